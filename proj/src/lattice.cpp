#include "tbreset/lattice.hpp"

#include "tbreset/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <thread>

namespace tbr::lattice {

namespace {

constexpr double kHermTol = 1e-9;

Eigen::MatrixXcd to_complex(const Eigen::MatrixXd& m) {
    return m.cast<std::complex<double>>();
}

} // namespace

Lattice make_lattice(int n_sites, int first_label) {
    if (n_sites < 4)
        throw std::invalid_argument("make_lattice: n_sites must be >= 4");
    return Lattice{n_sites, first_label};
}

LatticeOperators build_operators(const ModelParams& params, const Lattice& lattice) {
    if (!lattice.contains(params.n0) || !lattice.contains(params.n_reset))
        throw std::invalid_argument(
            "build_operators: n0 and n_reset must lie within the site labels");
    const int n = lattice.n_sites;
    LatticeOperators ops;
    ops.hop = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        ops.hop(i, (i + 1) % n) = 1.0;
        ops.hop((i + 1) % n, i) = 1.0;
    }
    ops.position = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i)
        ops.position(i) = static_cast<double>(lattice.label_of(i));
    ops.h_static = -0.5 * params.delta * ops.hop;
    return ops;
}

Eigen::MatrixXd hamiltonian_at(const LatticeOperators& ops, const ModelParams& params,
                               double t) {
    Eigen::MatrixXd h = ops.h_static;
    const double drive = params.field.f0() * std::cos(params.field.omega() * t);
    h.diagonal() += drive * ops.position;
    return h;
}

Eigen::MatrixXcd midpoint_propagator(const LatticeOperators& ops,
                                     const ModelParams& params, double t0, double h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        hamiltonian_at(ops, params, t0 + 0.5 * h));
    if (es.info() != Eigen::Success)
        throw ConsistencyError("midpoint_propagator: eigendecomposition failed");
    const Eigen::MatrixXcd v = to_complex(es.eigenvectors());
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < phases.size(); ++k)
        phases(k) = std::polar(1.0, -es.eigenvalues()(k) * h);
    return v * phases.asDiagonal() * v.transpose();
}

DensityMatrix DensityMatrix::site_projector(const Lattice& lattice, int label) {
    if (!lattice.contains(label))
        throw std::domain_error("site_projector: label outside the lattice");
    DensityMatrix dm;
    dm.rho = Eigen::MatrixXcd::Zero(lattice.n_sites, lattice.n_sites);
    const int i = lattice.index_of(label);
    dm.rho(i, i) = 1.0;
    return dm;
}

double DensityMatrix::trace_error() const { return std::abs(rho.trace() - 1.0); }

double DensityMatrix::hermiticity_residual() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Eigen::VectorXd DensityMatrix::diagonal_real() const { return rho.diagonal().real(); }

ResetTrajectory sample_reset_times(double lambda, double horizon, std::uint64_t seed) {
    if (!(lambda > 0.0))
        throw std::domain_error("sample_reset_times: lambda must be positive");
    if (!(horizon > 0.0))
        throw std::domain_error("sample_reset_times: horizon must be positive");
    ResetTrajectory traj;
    traj.horizon = horizon;
    traj.rng_seed = seed;
    rng::SplitMix64 gen(seed);
    double cum = 0.0;
    for (;;) {
        cum += gen.exponential(lambda);
        if (cum > horizon)
            break;
        traj.reset_times.push_back(cum);
    }
    return traj;
}

double default_dt_max(const ModelParams& params) {
    const double t_period = params.field.period();
    const double f0 = std::abs(params.field.f0());
    return std::min({0.02 / params.delta, 0.02 * t_period,
                     0.2 / std::max(f0, params.delta)});
}

DensityMatrix evolve_unitary(const DensityMatrix& rho, const LatticeOperators& ops,
                             const ModelParams& params, double t_start, double t_end,
                             double dt_max) {
    if (t_end < t_start)
        throw std::domain_error("evolve_unitary: t_end must be >= t_start");
    if (!(dt_max > 0.0))
        throw std::domain_error("evolve_unitary: dt_max must be positive");
    if (rho.hermiticity_residual() > kHermTol)
        throw ConsistencyError("evolve_unitary: input density matrix not Hermitian");
    DensityMatrix out = rho;
    const double len = t_end - t_start;
    if (len == 0.0)
        return out;
    const int n_steps = std::max(1, static_cast<int>(std::ceil(len / dt_max)));
    const double h = len / n_steps;
    for (int k = 0; k < n_steps; ++k) {
        const Eigen::MatrixXcd u = midpoint_propagator(ops, params, t_start + k * h, h);
        out.rho = u * out.rho * u.adjoint();
    }
    if (out.hermiticity_residual() > kHermTol)
        throw ConsistencyError("evolve_unitary: Hermiticity drift beyond 1e-9");
    return out;
}

DensityMatrix apply_reset(const DensityMatrix& rho, const Lattice& lattice,
                          int target_label) {
    if (!lattice.contains(target_label))
        throw std::domain_error("apply_reset: target outside the lattice");
    if (rho.trace_error() > 1e-9)
        throw std::invalid_argument("apply_reset: input trace deviates from 1");
    return DensityMatrix::site_projector(lattice, target_label);
}

namespace {

// Event-driven walk shared by the density-matrix and state-vector routes.
// Resets sort before samples at coinciding times, so a sample at a reset
// instant records the post-reset state.
struct Event {
    double t;
    bool is_reset;
    int sample_index;
};

std::vector<Event> merge_events(const ResetTrajectory& traj,
                                const std::vector<double>& sample_times) {
    std::vector<Event> ev;
    ev.reserve(traj.reset_times.size() + sample_times.size());
    for (double r : traj.reset_times)
        ev.push_back({r, true, -1});
    for (std::size_t i = 0; i < sample_times.size(); ++i)
        ev.push_back({sample_times[i], false, static_cast<int>(i)});
    std::stable_sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
        if (a.t != b.t)
            return a.t < b.t;
        return a.is_reset && !b.is_reset;
    });
    return ev;
}

void check_sample_times(const ResetTrajectory& traj,
                        const std::vector<double>& sample_times) {
    double prev = 0.0;
    for (double s : sample_times) {
        if (s < prev || s > traj.horizon * (1.0 + 1e-12) + 1e-12)
            throw std::domain_error(
                "run_trajectory: sample times must be increasing within [0, horizon]");
        prev = s;
    }
}

} // namespace

std::vector<Eigen::VectorXd> run_trajectory(const ModelParams& params,
                                            const Lattice& lattice,
                                            const ResetTrajectory& traj,
                                            const std::vector<double>& sample_times,
                                            double dt_max) {
    check_sample_times(traj, sample_times);
    const LatticeOperators ops = build_operators(params, lattice);
    DensityMatrix state = DensityMatrix::site_projector(lattice, params.n0);
    std::vector<Eigen::VectorXd> diagonals(sample_times.size());
    double cursor = 0.0;
    for (const Event& ev : merge_events(traj, sample_times)) {
        state = evolve_unitary(state, ops, params, cursor, ev.t, dt_max);
        cursor = ev.t;
        if (ev.is_reset)
            state = apply_reset(state, lattice, params.n_reset);
        else
            diagonals[static_cast<std::size_t>(ev.sample_index)] = state.diagonal_real();
    }
    return diagonals;
}

namespace {

void evolve_vector(Eigen::VectorXcd& psi, const LatticeOperators& ops,
                   const ModelParams& params, double t_start, double t_end,
                   double dt_max) {
    const double len = t_end - t_start;
    if (len == 0.0)
        return;
    const int n_steps = std::max(1, static_cast<int>(std::ceil(len / dt_max)));
    const double h = len / n_steps;
    for (int k = 0; k < n_steps; ++k)
        psi = midpoint_propagator(ops, params, t_start + k * h, h) * psi;
}

} // namespace

std::vector<Eigen::VectorXd> run_trajectory_pure(const ModelParams& params,
                                                 const Lattice& lattice,
                                                 const ResetTrajectory& traj,
                                                 const std::vector<double>& sample_times,
                                                 double dt_max) {
    check_sample_times(traj, sample_times);
    const LatticeOperators ops = build_operators(params, lattice);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(lattice.n_sites);
    psi(lattice.index_of(params.n0)) = 1.0;
    std::vector<Eigen::VectorXd> diagonals(sample_times.size());
    double cursor = 0.0;
    for (const Event& ev : merge_events(traj, sample_times)) {
        evolve_vector(psi, ops, params, cursor, ev.t, dt_max);
        cursor = ev.t;
        if (ev.is_reset) {
            psi.setZero();
            psi(lattice.index_of(params.n_reset)) = 1.0;
        } else {
            diagonals[static_cast<std::size_t>(ev.sample_index)] = psi.cwiseAbs2();
        }
    }
    return diagonals;
}

namespace {

// Propagator table over a uniform cell grid shared by every realization.
// Valid when the sample grid is {(i+1) s}: cells have width h = s / n_sub and
// sample i closes cell (i+1) n_sub, so recording never needs a mid-cell stop.
struct PropagatorTable {
    double h = 0.0;
    int n_sub = 0;
    std::vector<Eigen::MatrixXcd> cells;
};

bool grid_is_anchored_uniform(const std::vector<double>& times) {
    if (times.empty())
        return false;
    const double s = times.front();
    if (!(s > 0.0))
        return false;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double expected = static_cast<double>(i + 1) * s;
        if (std::abs(times[i] - expected) > 1e-9 * std::max(1.0, expected))
            return false;
    }
    return true;
}

PropagatorTable build_table(const LatticeOperators& ops, const ModelParams& params,
                            double spacing, std::size_t n_samples, double dt_max) {
    PropagatorTable table;
    table.n_sub = std::max(1, static_cast<int>(std::ceil(spacing / dt_max)));
    table.h = spacing / table.n_sub;
    const std::size_t n_cells = n_samples * static_cast<std::size_t>(table.n_sub);
    table.cells.reserve(n_cells);
    for (std::size_t k = 0; k < n_cells; ++k)
        table.cells.push_back(
            midpoint_propagator(ops, params, static_cast<double>(k) * table.h, table.h));
    return table;
}

// Cached-cell walk for one realization: cached full-cell propagators, fresh
// midpoint substeps only around resets that land inside a cell.
void run_realization_cached(const ModelParams& params, const Lattice& lattice,
                            const LatticeOperators& ops, const PropagatorTable& table,
                            const ResetTrajectory& traj, std::size_t n_samples,
                            Eigen::MatrixXd& out_diagonals) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(lattice.n_sites);
    psi(lattice.index_of(params.n0)) = 1.0;
    std::size_t next_reset = 0;
    const std::vector<double>& resets = traj.reset_times;
    const double h = table.h;
    std::size_t sample = 0;
    for (std::size_t k = 0; k < table.cells.size(); ++k) {
        const double cell_start = static_cast<double>(k) * h;
        const double cell_end = static_cast<double>(k + 1) * h;
        if (next_reset >= resets.size() || resets[next_reset] >= cell_end) {
            psi = table.cells[k] * psi;
        } else {
            double cursor = cell_start;
            while (next_reset < resets.size() && resets[next_reset] < cell_end) {
                const double r = resets[next_reset];
                if (r > cursor)
                    psi = midpoint_propagator(ops, params, cursor, r - cursor) * psi;
                psi.setZero();
                psi(lattice.index_of(params.n_reset)) = 1.0;
                cursor = r;
                ++next_reset;
            }
            if (cell_end > cursor)
                psi = midpoint_propagator(ops, params, cursor, cell_end - cursor) * psi;
        }
        if ((k + 1) % static_cast<std::size_t>(table.n_sub) == 0) {
            out_diagonals.row(static_cast<Eigen::Index>(sample)) =
                psi.cwiseAbs2().transpose();
            if (++sample == n_samples)
                break;
        }
    }
}

double longest_gap(const ResetTrajectory& traj) {
    double prev = 0.0;
    double longest = 0.0;
    for (double r : traj.reset_times) {
        longest = std::max(longest, r - prev);
        prev = r;
    }
    return std::max(longest, traj.horizon - prev);
}

} // namespace

ObservableSeries ensemble_average(const ModelParams& params, const Lattice& lattice,
                                  int n_realizations,
                                  const std::vector<double>& sample_times,
                                  double dt_max, std::uint64_t seed,
                                  const std::vector<int>& query_sites,
                                  unsigned n_threads) {
    if (n_realizations < 2)
        throw std::invalid_argument("ensemble_average: n_realizations must be >= 2");
    if (sample_times.empty())
        throw std::invalid_argument("ensemble_average: empty sample grid");
    if (!(dt_max > 0.0))
        dt_max = default_dt_max(params);
    const double horizon = sample_times.back();
    const int n_sites = lattice.n_sites;
    const std::size_t n_times = sample_times.size();
    const std::size_t n_real = static_cast<std::size_t>(n_realizations);

    // Reset times first: cheap, and the finite-size guard needs the longest
    // reset-free stretch before any propagation happens.
    std::vector<ResetTrajectory> trajs;
    trajs.reserve(n_real);
    double longest = 0.0;
    for (std::size_t i = 0; i < n_real; ++i) {
        if (params.lambda > 0.0) {
            trajs.push_back(sample_reset_times(params.lambda, horizon,
                                               seed + static_cast<std::uint64_t>(i)));
        } else {
            trajs.push_back(ResetTrajectory{{}, horizon, seed + i});
        }
        longest = std::max(longest, longest_gap(trajs.back()));
    }

    ObservableSeries series;
    series.times = sample_times;
    series.n_realizations = n_realizations;
    series.master_seed = seed;
    series.longest_stretch = longest;
    for (int m : query_sites) {
        const double reach = static_cast<double>(std::max(std::abs(m - params.n0),
                                                          std::abs(m - params.n_reset)));
        if (params.delta * longest > 0.5 * n_sites - reach)
            series.flagged_sites.push_back(m);
    }
    series.finite_size_flagged = !series.flagged_sites.empty();

    const LatticeOperators ops = build_operators(params, lattice);
    const bool cached = grid_is_anchored_uniform(sample_times);
    PropagatorTable table;
    if (cached) {
        table = build_table(ops, params, sample_times.front(), n_times, dt_max);
        series.dt_max = table.h;
    } else {
        series.dt_max = dt_max;
    }

    // Per-realization diagonals, merged by index afterwards so the reduction
    // order (and hence the floating-point result) is independent of the
    // thread count.
    std::vector<Eigen::MatrixXd> per_real(n_real);
    const auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            per_real[i].resize(static_cast<Eigen::Index>(n_times), n_sites);
            if (cached) {
                run_realization_cached(params, lattice, ops, table, trajs[i], n_times,
                                       per_real[i]);
            } else {
                const auto diags =
                    run_trajectory_pure(params, lattice, trajs[i], sample_times, dt_max);
                for (std::size_t ti = 0; ti < n_times; ++ti)
                    per_real[i].row(static_cast<Eigen::Index>(ti)) =
                        diags[ti].transpose();
            }
        }
    };
    if (n_threads == 0)
        n_threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t pool_size = std::min<std::size_t>(n_threads, n_real);
    if (pool_size <= 1) {
        work(0, n_real);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_real + pool_size - 1) / pool_size;
        for (std::size_t t = 0; t < pool_size; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(n_real, b + chunk);
            if (b < e)
                pool.emplace_back(work, b, e);
        }
        for (auto& th : pool)
            th.join();
    }

    series.p_site = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_times), n_sites);
    for (std::size_t i = 0; i < n_real; ++i)
        series.p_site += per_real[i];
    series.p_site /= static_cast<double>(n_real);

    series.p_site_sd = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_times), n_sites);
    for (std::size_t i = 0; i < n_real; ++i)
        series.p_site_sd += (per_real[i] - series.p_site).cwiseAbs2();
    series.p_site_sd = (series.p_site_sd / static_cast<double>(n_real - 1)).cwiseSqrt();

    Eigen::VectorXd disp(n_sites);
    for (int j = 0; j < n_sites; ++j)
        disp(j) = static_cast<double>(lattice.label_of(j) - params.n0);
    const Eigen::VectorXd disp2 = disp.cwiseAbs2();

    series.mean_disp.resize(n_times);
    series.msd.resize(n_times);
    series.mean_disp_sd.assign(n_times, 0.0);
    series.msd_sd.assign(n_times, 0.0);
    for (std::size_t ti = 0; ti < n_times; ++ti) {
        const Eigen::Index r = static_cast<Eigen::Index>(ti);
        series.mean_disp[ti] = series.p_site.row(r).dot(disp.transpose());
        series.msd[ti] = series.p_site.row(r).dot(disp2.transpose());
        double acc_mu = 0.0;
        double acc_s = 0.0;
        for (std::size_t i = 0; i < n_real; ++i) {
            const double mu_i = per_real[i].row(r).dot(disp.transpose());
            const double s_i = per_real[i].row(r).dot(disp2.transpose());
            acc_mu += (mu_i - series.mean_disp[ti]) * (mu_i - series.mean_disp[ti]);
            acc_s += (s_i - series.msd[ti]) * (s_i - series.msd[ti]);
        }
        series.mean_disp_sd[ti] = std::sqrt(acc_mu / static_cast<double>(n_real - 1));
        series.msd_sd[ti] = std::sqrt(acc_s / static_cast<double>(n_real - 1));
    }
    return series;
}

} // namespace tbr::lattice
