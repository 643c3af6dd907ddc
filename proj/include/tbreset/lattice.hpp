#ifndef TBRESET_LATTICE_HPP
#define TBRESET_LATTICE_HPP

// Finite periodic-lattice Monte Carlo: ring operators, exponential reset-time
// sampling, midpoint-exponential unitary stepping, the reset channel, single
// trajectories and seeded ensembles.

#include "tbreset/params.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tbr::lattice {

/// Raised when a propagation step detects state corruption
/// (e.g. non-Hermitian drift beyond tolerance).
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ring of n_sites sites with consecutive integer labels
/// first_label .. first_label + n_sites - 1.
struct Lattice {
    int n_sites;
    int first_label;

    int label_of(int index) const { return first_label + index; }
    int index_of(int label) const { return label - first_label; }
    bool contains(int label) const {
        return label >= first_label && label < first_label + n_sites;
    }
};

/// n_sites >= 4 required.
Lattice make_lattice(int n_sites, int first_label);

struct LatticeOperators {
    Eigen::MatrixXd hop;      // K + K^dagger restricted to the ring (0/1 adjacency)
    Eigen::VectorXd position; // diagonal of the site-number operator (label values)
    Eigen::MatrixXd h_static; // -(delta/2) (K + K^dagger)
};

/// Throws std::invalid_argument if n0 or n_reset lies outside the labels.
LatticeOperators build_operators(const ModelParams& params, const Lattice& lattice);

/// H(t) = h_static + f0 cos(omega t) * diag(position).
Eigen::MatrixXd hamiltonian_at(const LatticeOperators& ops, const ModelParams& params,
                               double t);

/// Midpoint-exponential one-step propagator U = exp(-i H(t0 + h/2) h),
/// built from the eigendecomposition of the (real symmetric) Hamiltonian.
Eigen::MatrixXcd midpoint_propagator(const LatticeOperators& ops,
                                     const ModelParams& params, double t0, double h);

struct DensityMatrix {
    Eigen::MatrixXcd rho;

    static DensityMatrix site_projector(const Lattice& lattice, int label);

    double trace_error() const;          // |Tr rho - 1|
    double hermiticity_residual() const; // max_ij |rho_ij - conj(rho_ji)|
    double min_eigenvalue() const;
    Eigen::VectorXd diagonal_real() const;
};

/// One realization of the reset protocol: reset instants in (0, horizon).
struct ResetTrajectory {
    std::vector<double> reset_times;
    double horizon;
    std::uint64_t rng_seed;
};

/// Gaps are i.i.d. Exp(lambda) via inverse CDF on splitmix64; sampling stops
/// once the cumulative sum exceeds the horizon.
ResetTrajectory sample_reset_times(double lambda, double horizon, std::uint64_t seed);

/// Default stepper bound: min(0.02/delta, 0.02 T, 0.2/max(f0, delta)),
/// resolving both the hopping and the drive timescales.
double default_dt_max(const ModelParams& params);

/// Time-ordered propagation by midpoint stepping, rho -> U rho U^dagger per
/// step of size <= dt_max.  Throws ConsistencyError if the input (or output)
/// drifts from Hermiticity by more than 1e-9.
DensityMatrix evolve_unitary(const DensityMatrix& rho, const LatticeOperators& ops,
                             const ModelParams& params, double t_start, double t_end,
                             double dt_max);

/// Reset channel: returns |target><target| exactly.  The input must carry
/// unit trace to 1e-9 (std::invalid_argument otherwise; std::domain_error
/// for a target outside the lattice).
DensityMatrix apply_reset(const DensityMatrix& rho, const Lattice& lattice,
                          int target_label);

/// Full protocol for one realization: unitary segments between resets, the
/// reset channel at each reset instant, diagonals recorded at every sample
/// time.  The drive phase is absolute: cos(omega t) always uses global time.
/// Density-matrix route, used as the reference implementation.
std::vector<Eigen::VectorXd> run_trajectory(const ModelParams& params,
                                            const Lattice& lattice,
                                            const ResetTrajectory& traj,
                                            const std::vector<double>& sample_times,
                                            double dt_max);

/// State-vector route: trajectories stay pure (|n0> start, projector resets),
/// so the diagonals equal the density-matrix route's to rounding.  This is
/// the path the ensemble driver uses.
std::vector<Eigen::VectorXd> run_trajectory_pure(const ModelParams& params,
                                                 const Lattice& lattice,
                                                 const ResetTrajectory& traj,
                                                 const std::vector<double>& sample_times,
                                                 double dt_max);

struct ObservableSeries {
    std::vector<double> times;
    Eigen::MatrixXd p_site;    // n_times x n_sites ensemble mean
    Eigen::MatrixXd p_site_sd; // sample standard deviation across realizations
    std::vector<double> mean_disp; // from averaged diagonals, labels relative to n0
    std::vector<double> msd;
    std::vector<double> mean_disp_sd; // across-realization sd of the per-trajectory moments
    std::vector<double> msd_sd;
    int n_realizations = 0;
    std::uint64_t master_seed = 0;
    double dt_max = 0.0;
    double longest_stretch = 0.0; // longest reset-free interval over the ensemble
    bool finite_size_flagged = false;
    std::vector<int> flagged_sites; // query sites for which the guard fired
};

/// Seeded, reproducible ensemble; realization i uses seed master_seed + i.
/// query_sites (labels) feed the finite-size guard
///   delta * longest_stretch > n_sites/2 - max(|m - n0|, |m - n_reset|).
/// Realizations run concurrently (n_threads = 0 selects the hardware count);
/// results merge in realization order, so the output is identical for any
/// thread count.
ObservableSeries ensemble_average(const ModelParams& params, const Lattice& lattice,
                                  int n_realizations,
                                  const std::vector<double>& sample_times,
                                  double dt_max, std::uint64_t seed,
                                  const std::vector<int>& query_sites,
                                  unsigned n_threads = 0);

} // namespace tbr::lattice

#endif
