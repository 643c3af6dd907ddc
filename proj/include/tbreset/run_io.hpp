#ifndef TBRESET_RUN_IO_HPP
#define TBRESET_RUN_IO_HPP

// Experiment orchestration: run configurations, the CSV schema shared by all
// modes, JSON metadata sidecars, and the built-in figure parameter sets.
//
// CSV schema (one row per (t, site) pair; absent quantities stay empty):
//   t, m, p_analytic, p_mc_mean, p_mc_sd, mean_disp, msd, msd_plateau
// In lindblad/compare mode the p_mc_mean column carries the integrated
// master-equation diagonal (no sd).  Every CSV gets a sidecar
// <name>.meta.json with the full configuration, seeds, guard flags and the
// RNG algorithm.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tbr::io {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSeedEnvVar = "TBRESET_SEED";

struct TimeGrid {
    double start = 0.0; // <= 0 selects the anchored grid {i * end/count}
    double end = 30.0;
    int count = 60;

    std::vector<double> times() const;
};

struct RunConfig {
    std::string mode;   // analytic | simulate | lindblad | compare | figures
    std::string figure; // fig1 | fig2 | fig3 | all (figures mode)
    double delta = 1.0;
    double f0 = 0.0;
    double omega = 1.0;
    double lambda = 0.0;
    int n0 = 1;
    int n_reset = 10;
    int n_sites = 30;
    int first_label = 1;
    TimeGrid grid;
    int n_realizations = 1000;
    std::uint64_t seed = 12345;
    double dt_max = 0.0; // <= 0 selects default_dt_max
    double tol = 1e-8;
    std::vector<int> m_query; // defaults to {n0, n_reset}
    bool allow_finite_size = false;
    std::string output_path = "out";

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct CsvRow {
    double t = 0.0;
    std::optional<int> m;
    std::optional<double> p_analytic;
    std::optional<double> p_mc_mean;
    std::optional<double> p_mc_sd;
    std::optional<double> mean_disp;
    std::optional<double> msd;
    std::optional<double> msd_plateau;
};

void write_csv(const std::string& path, const std::vector<CsvRow>& rows);

/// Exit codes: 0 success, 2 config/usage error, 3 finite-size guard rejection,
/// 4 numerical failure.
int run(const RunConfig& config);

} // namespace tbr::io

#endif
