// Acceptance suite: one test case per criterion, one printed PASS/FAIL line
// each.  Heavy ensembles are computed once and shared across criteria.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tbreset/analytic.hpp"
#include "tbreset/drive.hpp"
#include "tbreset/lattice.hpp"
#include "tbreset/lindblad.hpp"
#include "tbreset/specfun.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <numbers>
#include <vector>

using namespace tbr;
using lattice::ensemble_average;
using lattice::make_lattice;
using lattice::ObservableSeries;
using specfun::bessel_j;

namespace {

constexpr std::uint64_t kSeed = 20250801;

ModelParams fig1_params(double omega) {
    return ModelParams(1.0, drive::DriveField(1.0, omega), 0.25, 1, 10);
}

std::vector<double> grid(double step, int count) {
    std::vector<double> g;
    for (int i = 1; i <= count; ++i)
        g.push_back(step * i);
    return g;
}

// fig1 ensembles (N = 30, 10^3 realizations, t in (0, 30]), one per omega.
// Labels run -10..19: the reference values n0 = 1, n_reset = 10, m in {9, 10}
// all lie inside, while the ring's label seam (a drive-potential cliff of
// height N f0 cos(wt)) stays ~11 sites away from both seeds.  With labels
// 1..30 the seed n0 = 1 sits on the cliff and the ring provably deviates
// from the infinite-lattice formulas near it.
const ObservableSeries& fig1_ensemble(double omega) {
    static std::map<double, ObservableSeries> cache;
    auto it = cache.find(omega);
    if (it == cache.end()) {
        const auto series =
            ensemble_average(fig1_params(omega), make_lattice(30, -10), 1000,
                             grid(0.5, 60), 0.0, kSeed, {9, 10});
        it = cache.emplace(omega, series).first;
    }
    return it->second;
}

// N = 12 ensembles and Lindblad states for the cross-oracle triangle.
const ObservableSeries& small_ensemble(double omega) {
    static std::map<double, ObservableSeries> cache;
    auto it = cache.find(omega);
    if (it == cache.end()) {
        const auto series =
            ensemble_average(fig1_params(omega), make_lattice(12, 1), 1000,
                             grid(0.5, 20), 0.0, kSeed + 1, {9, 10});
        it = cache.emplace(omega, series).first;
    }
    return it->second;
}

const std::vector<lattice::DensityMatrix>& small_lindblad(double omega) {
    static std::map<double, std::vector<lattice::DensityMatrix>> cache;
    auto it = cache.find(omega);
    if (it == cache.end()) {
        const auto params = fig1_params(omega);
        const double dt = 0.5 * lattice::default_dt_max(params);
        const auto states =
            lindblad::lindblad_evolve(params, make_lattice(12, 1), grid(0.5, 20), dt);
        it = cache.emplace(omega, states).first;
    }
    return it->second;
}

struct AgreementCount {
    int within = 0;
    int total = 0;
    double fraction() const { return total ? static_cast<double>(within) / total : 0.0; }
};

void print_result(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[criterion %d] %-28s %s  (%s)\n", criterion, name,
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

} // namespace

TEST_CASE("criterion 1: fig1 reproduction") {
    bool pass = true;
    std::string detail;
    for (double omega : {0.1, 10.0}) {
        const auto& series = fig1_ensemble(omega);
        const auto params = fig1_params(omega);
        const auto lat = make_lattice(30, -10);
        for (int m : {9, 10}) {
            AgreementCount count;
            const int j = lat.index_of(m);
            for (std::size_t ti = 0; ti < series.times.size(); ++ti) {
                const double analytic_p =
                    analytic::p_site_reset(params, m, series.times[ti], 1e-9);
                const double mc = series.p_site(static_cast<Eigen::Index>(ti), j);
                const double se = series.p_site_sd(static_cast<Eigen::Index>(ti), j) /
                                  std::sqrt(1000.0);
                if (std::abs(mc - analytic_p) <= 3.0 * se + 1e-9)
                    ++count.within;
                ++count.total;
            }
            const bool ok = count.fraction() >= 0.95;
            CHECK(ok);
            pass = pass && ok;
            detail += "omega=" + std::to_string(omega).substr(0, 4) + " m=" +
                      std::to_string(m) + ": " + std::to_string(count.within) + "/" +
                      std::to_string(count.total) + "  ";
        }
    }
    print_result(1, "fig1 reproduction", pass, detail);
}

TEST_CASE("criterion 2: dynamic localization") {
    drive::DriveField field(0.2404825558, 0.1);
    ModelParams params(1.0, field, 0.0, 0, 0);
    const double t_period = field.period();
    bool strobo_ok = true;
    double worst_ratio = 0.0;
    for (int n = 1; n <= 5; ++n) {
        const double t = n * t_period;
        const double s = analytic::msd_no_reset(params, t);
        worst_ratio = std::max(worst_ratio, s / (t * t));
        strobo_ok = strobo_ok && (s < 1e-8 * t * t);
    }
    CHECK(strobo_ok);

    // Boundedness: the MSD scale is its maximum over the first drive period;
    // no secular growth means the 10-period maximum stays within 10x of it.
    double scale = 0.0;
    for (int i = 1; i <= 400; ++i)
        scale = std::max(scale, analytic::msd_no_reset(params, t_period * i / 400.0));
    double max_10 = 0.0;
    for (int i = 1; i <= 4000; ++i)
        max_10 = std::max(max_10, analytic::msd_no_reset(params, 10.0 * t_period * i / 4000.0));
    const bool bounded = std::isfinite(max_10) && max_10 < 10.0 * scale;
    CHECK(bounded);

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "max S(nT)/(nT)^2 = %.2e; max S over 10T = %.3f vs scale %.3f",
                  worst_ratio, max_10, scale);
    print_result(2, "dynamic localization", strobo_ok && bounded, buf);
}

TEST_CASE("criterion 3: reset-induced plateau") {
    bool pass = true;
    std::string detail;
    for (double f0 : {1.0, 0.2404825558}) {
        drive::DriveField field(f0, 0.1);
        const double t_period = field.period();
        for (double lam : {0.25, 1.0, 4.0}) {
            ModelParams params(1.0, field, lam, 1, 10);
            const double plateau = analytic::msd_plateau(params, 1e-9);
            // Under the global drive clock the MSD approaches a T-periodic
            // limit cycle whose stroboscopic samples converge to the plateau;
            // evaluate at the first whole period past 20/lambda.
            const double t_late = t_period * std::ceil(20.0 / (lam * t_period));
            const double s_late = analytic::msd_reset(params, t_late, 1e-8);
            const double rel = std::abs(s_late - plateau) / plateau;
            const bool ok = rel < 0.01;
            CHECK(ok);
            pass = pass && ok;
            // informational: the raw 20/lambda point samples the limit cycle
            const double s_raw = analytic::msd_reset(params, 20.0 / lam, 1e-8);
            std::printf("  plateau f0=%.4f lambda=%.2f: plateau=%.4f strobo(t=%.1f) "
                        "rel=%.2e, raw(t=%.1f) rel=%.2e\n",
                        f0, lam, plateau, t_late, rel, 20.0 / lam,
                        std::abs(s_raw - plateau) / plateau);
        }
    }

    // fast-reset limit: plateau -> delta^2 / lambda^2 when resetting in place
    ModelParams zeno(1.0, drive::DriveField(1.0, 0.1), 100.0, 0, 0);
    const double plateau = analytic::msd_plateau(zeno, 1e-9);
    const double zeno_rel = std::abs(plateau - 1e-4) / 1e-4;
    const bool zeno_ok = zeno_rel < 0.01;
    CHECK(zeno_ok);
    pass = pass && zeno_ok;

    char buf[96];
    std::snprintf(buf, sizeof buf, "six (f0, lambda) sets + Zeno limit rel=%.2e",
                  zeno_rel);
    print_result(3, "reset-induced plateau", pass, buf);
}

TEST_CASE("criterion 4: no-field exact limits") {
    ModelParams params(1.0, drive::DriveField(0.0, 1.0), 0.0, 0, 0);
    bool analytic_ok = true;
    for (double t : {0.7, 2.0, 3.5}) {
        for (int m = -4; m <= 4; ++m) {
            const double expect = bessel_j(m, t) * bessel_j(m, t);
            analytic_ok = analytic_ok &&
                          std::abs(analytic::p_site_no_reset(params, m, t) - expect) < 1e-10;
        }
        analytic_ok =
            analytic_ok && std::abs(analytic::msd_no_reset(params, t) - 0.5 * t * t) < 1e-10;
    }
    CHECK(analytic_ok);

    // Monte Carlo route on the doubled ring agrees inside the light cone.
    double worst = 0.0;
    for (int n_sites : {32, 64}) {
        const auto lat = make_lattice(n_sites, -n_sites / 2);
        const lattice::ResetTrajectory traj{{}, 3.0, 0};
        const auto diags =
            lattice::run_trajectory(params, lat, traj, {1.0, 3.0}, 0.01);
        double local = 0.0;
        for (std::size_t ti = 0; ti < 2; ++ti) {
            const double t = ti == 0 ? 1.0 : 3.0;
            for (int m = -8; m <= 8; ++m)
                local = std::max(local, std::abs(diags[ti](lat.index_of(m)) -
                                                 bessel_j(m, t) * bessel_j(m, t)));
        }
        if (n_sites == 64)
            worst = local;
    }
    const bool mc_ok = worst < 1e-4;
    CHECK(mc_ok);

    char buf[96];
    std::snprintf(buf, sizeof buf, "analytic exact; MC at N=64 worst |diff| = %.2e",
                  worst);
    print_result(4, "no-field exact limits", analytic_ok && mc_ok, buf);
}

namespace {

// Ring-exact renewal decomposition, the last-reset form evaluated with the
// ring's own unitary segments:
//   Pbar_m(t) = e^{-lambda t} [U(t,0) rho0 U+]_mm
//             + lambda int_0^t ds e^{-lambda (t-s)} [U(t,s) P_reset U+]_mm.
// Independent of the Lindblad splitting; the s-integral is composite Simpson.
Eigen::VectorXd ring_renewal_diagonals(const ModelParams& params,
                                       const lattice::Lattice& lat, double t,
                                       double dt, int n_nodes) {
    const auto ops = lattice::build_operators(params, lat);
    const auto evolve_seed = [&](int seed_label, double s) {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(lat.n_sites);
        psi(lat.index_of(seed_label)) = 1.0;
        const double len = t - s;
        if (len > 0.0) {
            const int n_steps = std::max(1, static_cast<int>(std::ceil(len / dt)));
            const double h = len / n_steps;
            for (int k = 0; k < n_steps; ++k)
                psi = lattice::midpoint_propagator(ops, params, s + k * h, h) * psi;
        }
        return Eigen::VectorXd(psi.cwiseAbs2());
    };
    Eigen::VectorXd total = std::exp(-params.lambda * t) * evolve_seed(params.n0, 0.0);
    const double h = t / n_nodes;
    for (int j = 0; j <= n_nodes; ++j) {
        const double s = j * h;
        const double simpson = (j == 0 || j == n_nodes) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        const double weight =
            params.lambda * std::exp(-params.lambda * (t - s)) * simpson * h / 3.0;
        total += weight * evolve_seed(params.n_reset, s);
    }
    return total;
}

} // namespace

TEST_CASE("criterion 5: cross-oracle triangle") {
    const auto params = fig1_params(0.1);
    const double dt0 = lattice::default_dt_max(params);

    // Leg 1: Lindblad vs the renewal formula, on a ring large enough that the
    // label seam cannot touch the compared amplitudes within t <= 10.
    const auto lat44 = make_lattice(44, -16);
    const auto coarse = lindblad::renewal_check(params, lat44, grid(0.5, 20), 1e-5, dt0);
    const auto fine =
        lindblad::renewal_check(params, lat44, grid(0.5, 20), 1e-5, 0.5 * dt0);
    const bool renewal_ok = fine.pass && fine.n_compared >= 40;
    CHECK(renewal_ok);

    // Leg 2: on the small N = 12 ring, the seam sits next
    // to n0, so the infinite-lattice kernels do not apply; the renewal
    // structure itself still must: compare the Lindblad integration against
    // the ring-exact last-reset decomposition.
    const auto lat12 = make_lattice(12, 1);
    double ring_max = 0.0;
    {
        const double dt_fine = 0.5 * dt0;
        const auto states = lindblad::lindblad_evolve(params, lat12, {2.0, 5.0, 10.0},
                                                      dt_fine);
        const double ts[] = {2.0, 5.0, 10.0};
        for (int i = 0; i < 3; ++i) {
            const auto reference =
                ring_renewal_diagonals(params, lat12, ts[i], dt_fine, 800);
            ring_max = std::max(
                ring_max,
                (states[static_cast<std::size_t>(i)].diagonal_real() - reference)
                    .cwiseAbs()
                    .maxCoeff());
        }
    }
    const bool ring_ok = ring_max < 1e-5;
    CHECK(ring_ok);

    // Leg 3: MC vs Lindblad on the same N = 12 ring, both omega panels.
    bool mc_ok = true;
    std::string mc_detail;
    for (double omega : {0.1, 10.0}) {
        const auto& series = small_ensemble(omega);
        const auto& states = small_lindblad(omega);
        AgreementCount count;
        for (std::size_t ti = 0; ti < series.times.size(); ++ti) {
            const Eigen::VectorXd diag = states[ti].diagonal_real();
            for (int j = 0; j < 12; ++j) {
                const double se = series.p_site_sd(static_cast<Eigen::Index>(ti), j) /
                                  std::sqrt(1000.0);
                if (std::abs(series.p_site(static_cast<Eigen::Index>(ti), j) - diag(j)) <=
                    3.0 * se + 1e-7)
                    ++count.within;
                ++count.total;
            }
        }
        const bool ok = count.fraction() >= 0.95;
        CHECK(ok);
        mc_ok = mc_ok && ok;
        mc_detail += std::to_string(count.within) + "/" + std::to_string(count.total) + " ";
    }

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "formula leg max=%.2e (coarse %.2e) over %zu pairs; N=12 ring-renewal "
                  "max=%.2e; MC-lindblad within 3SE: %s",
                  fine.max_abs_discrepancy, coarse.max_abs_discrepancy, fine.n_compared,
                  ring_max, mc_detail.c_str());
    print_result(5, "cross-oracle triangle", renewal_ok && ring_ok && mc_ok, buf);
}

TEST_CASE("criterion 6: conservation suite") {
    // Density-matrix route across a full fig1-parameter trajectory.
    const auto params = fig1_params(0.1);
    const auto lat = make_lattice(30, -10);
    const auto ops = lattice::build_operators(params, lat);
    const auto traj = lattice::sample_reset_times(0.25, 30.0, kSeed + 7);
    auto rho = lattice::DensityMatrix::site_projector(lat, params.n0);
    double cursor = 0.0;
    double worst_trace = 0.0;
    double worst_herm = 0.0;
    double worst_eig = 0.0;
    std::vector<double> events = traj.reset_times;
    events.insert(events.end(), {5.0, 15.0, 30.0});
    std::sort(events.begin(), events.end());
    for (double t_ev : events) {
        rho = lattice::evolve_unitary(rho, ops, params, cursor, t_ev, 0.02);
        cursor = t_ev;
        worst_trace = std::max(worst_trace, rho.trace_error());
        worst_herm = std::max(worst_herm, rho.hermiticity_residual());
        worst_eig = std::min(worst_eig, rho.min_eigenvalue());
        const bool is_reset =
            std::find(traj.reset_times.begin(), traj.reset_times.end(), t_ev) !=
            traj.reset_times.end();
        if (is_reset)
            rho = lattice::apply_reset(rho, lat, params.n_reset);
    }

    // Lindblad route from the triangle cache.
    for (const auto& state : small_lindblad(0.1)) {
        worst_trace = std::max(worst_trace, state.trace_error());
        worst_herm = std::max(worst_herm, state.hermiticity_residual());
        worst_eig = std::min(worst_eig, state.min_eigenvalue());
    }

    // Ensemble probabilities normalize at every sample time.
    double worst_norm = 0.0;
    for (double omega : {0.1, 10.0}) {
        const auto& series = fig1_ensemble(omega);
        for (Eigen::Index r = 0; r < series.p_site.rows(); ++r)
            worst_norm = std::max(worst_norm, std::abs(series.p_site.row(r).sum() - 1.0));
    }

    const bool pass = worst_trace < 1e-12 && worst_herm < 1e-10 && worst_eig > -1e-10 &&
                      worst_norm < 1e-8;
    CHECK(worst_trace < 1e-12);
    CHECK(worst_herm < 1e-10);
    CHECK(worst_eig > -1e-10);
    CHECK(worst_norm < 1e-8);

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "trace %.1e, herm %.1e, min eig %.1e, sum-P %.1e", worst_trace,
                  worst_herm, worst_eig, worst_norm);
    print_result(6, "conservation suite", pass, buf);
}

TEST_CASE("criterion 7: moment formulas") {
    // MC mean displacement vs (N - n0)(1 - e^{-lambda t}).  The ring mean is
    // the infinite-lattice mean only while the amplitude stays away from the
    // label seam, so both configurations here are containment-checked: the
    // fig1 omega = 0.1 panel (spread bounded by the drive) and a dedicated
    // faster-reset ensemble on a 40-ring.  The omega = 10 panel spreads
    // ballistically past the ring radius within the horizon and its ring
    // mean genuinely differs from the formula.
    // While contained, the per-trajectory mean displacement is exactly
    // Bernoulli: 0 without a reset (spread symmetric about n0), N - n0 after
    // any reset (symmetric about the reset site).  At late times every
    // realization has reset and the sample sd collapses to zero, so the
    // 3-SE band takes the exact model sd |N - n0| sqrt(p(1-p)), p = e^{-lambda t},
    // as a floor for the estimator's standard error.
    const auto mean_test = [](const ObservableSeries& series, const ModelParams& params,
                              int n_real) {
        AgreementCount count;
        const double hops = std::abs(static_cast<double>(params.n_reset - params.n0));
        for (std::size_t ti = 0; ti < series.times.size(); ++ti) {
            const double expect = analytic::mean_reset(params, series.times[ti]);
            const double p_free = std::exp(-params.lambda * series.times[ti]);
            const double sd_model = hops * std::sqrt(p_free * (1.0 - p_free));
            const double se = std::max(series.mean_disp_sd[ti], sd_model) /
                              std::sqrt(static_cast<double>(n_real));
            if (std::abs(series.mean_disp[ti] - expect) <= 3.0 * se + 1e-9)
                ++count.within;
            ++count.total;
        }
        return count;
    };

    bool mc_ok = true;
    std::string detail;
    {
        const auto count = mean_test(fig1_ensemble(0.1), fig1_params(0.1), 1000);
        const bool ok = count.fraction() >= 0.95;
        CHECK(ok);
        mc_ok = mc_ok && ok;
        detail += std::to_string(count.within) + "/" + std::to_string(count.total) + " ";
    }
    {
        ModelParams contained(1.0, drive::DriveField(1.0, 0.1), 0.5, -2, 2);
        const auto series = ensemble_average(contained, make_lattice(40, -19), 800,
                                             grid(0.5, 24), 0.0, kSeed + 3, {-2, 2});
        const auto count = mean_test(series, contained, 800);
        const bool ok = count.fraction() >= 0.95;
        CHECK(ok);
        mc_ok = mc_ok && ok;
        detail += std::to_string(count.within) + "/" + std::to_string(count.total) + " ";
    }

    // Analytic moment sums against the closed forms.
    const auto params = fig1_params(0.1);
    double worst_mean = 0.0;
    double worst_msd = 0.0;
    for (double t : {1.0, 5.0, 20.0}) {
        const int m_range = static_cast<int>(std::ceil(params.delta * t)) + 40;
        double mean_sum = 0.0;
        double msd_sum = 0.0;
        for (int m = params.n0 - m_range; m <= params.n0 + m_range; ++m) {
            const double p = analytic::p_site_reset(params, m, t, 1e-10);
            mean_sum += (m - params.n0) * p;
            msd_sum += static_cast<double>(m - params.n0) * (m - params.n0) * p;
        }
        worst_mean = std::max(worst_mean,
                              std::abs(mean_sum - analytic::mean_reset(params, t)));
        worst_msd = std::max(worst_msd,
                             std::abs(msd_sum - analytic::msd_reset(params, t, 1e-10)));
    }
    const bool sums_ok = worst_mean < 1e-6 && worst_msd < 1e-6;
    CHECK(sums_ok);

    char buf[160];
    std::snprintf(buf, sizeof buf, "MC within 3SE: %s; moment sums %.1e / %.1e",
                  detail.c_str(), worst_mean, worst_msd);
    print_result(7, "moment formulas", mc_ok && sums_ok, buf);
}

TEST_CASE("criterion 8: special-function substrate") {
    bool pass = true;

    // generating function
    for (double x : {0.5, 1.0, 3.0}) {
        for (int i = 0; i < 32; ++i) {
            const double tau = 2.0 * std::numbers::pi * i / 32.0;
            std::complex<double> sum = 0.0;
            for (int p = -40; p <= 40; ++p)
                sum += bessel_j(p, x) * std::polar(1.0, p * tau);
            pass = pass && std::abs(std::polar(1.0, x * std::sin(tau)) - sum) < 1e-10;
        }
    }

    // sum rules
    for (double x : {0.5, 2.0, 5.0, 10.0}) {
        double norm = bessel_j(0, x) * bessel_j(0, x);
        for (int m = 1; m <= 60; ++m)
            norm += 2.0 * bessel_j(m, x) * bessel_j(m, x);
        double second = 0.0;
        for (int m = -60; m <= 60; ++m)
            second += static_cast<double>(m) * m * bessel_j(m, x) * bessel_j(m, x);
        pass = pass && std::abs(norm - 1.0) < 1e-10 && std::abs(second - 0.5 * x * x) < 1e-8;
    }

    // Graf magnitude
    const std::complex<double> quarter = std::polar(1.0, -std::numbers::pi / 2.0);
    for (auto [u, v] : {std::pair{3.0, 4.0}, {1.2, 2.5}}) {
        for (int m : {0, 2, 5}) {
            std::complex<double> sum = 0.0;
            for (int n = -40; n <= 40; ++n)
                sum += std::pow(quarter, n) * bessel_j(n, u) * bessel_j(m - n, v);
            pass = pass &&
                   std::abs(std::abs(sum) - std::abs(bessel_j(m, std::hypot(u, v)))) < 1e-8;
        }
    }

    // parity
    for (int n : {1, 2, 5})
        for (double x : {0.7, 3.3})
            pass = pass && bessel_j(n, -x) == ((n % 2) ? -bessel_j(n, x) : bessel_j(n, x));

    const double zero_err = std::abs(tbr::specfun::j0_zero(1) - 2.404825557695773);
    pass = pass && zero_err < 1e-9;
    CHECK(pass);

    char buf[96];
    std::snprintf(buf, sizeof buf, "identity suites at stated tolerances; |j01 err| = %.1e",
                  zero_err);
    print_result(8, "special-function substrate", pass, buf);
}

TEST_CASE("criterion 9: numerical order") {
    // midpoint exponential stepper
    auto p = ModelParams(1.0, drive::DriveField(1.0, 1.0), 0.0, 0, 0);
    const auto lat = make_lattice(12, -5);
    const auto ops = lattice::build_operators(p, lat);
    const auto rho0 = lattice::DensityMatrix::site_projector(lat, 0);
    const auto stepper_obs = [&](double dt) {
        return lattice::evolve_unitary(rho0, ops, p, 0.0, 3.0, dt)
            .rho(lat.index_of(0), lat.index_of(0))
            .real();
    };
    const double s1 = stepper_obs(0.2);
    const double s2 = stepper_obs(0.1);
    const double s3 = stepper_obs(0.05);
    const double stepper_order = std::log2(std::abs((s1 - s2) / (s2 - s3)));

    // strang splitting
    auto q = ModelParams(1.0, drive::DriveField(1.0, 1.0), 1.0, 0, 2);
    const auto splitting_obs = [&](double dt) {
        const auto states = lindblad::lindblad_evolve(q, lat, {3.0}, dt);
        return states.back().diagonal_real()(lat.index_of(2));
    };
    const double l1 = splitting_obs(0.2);
    const double l2 = splitting_obs(0.1);
    const double l3 = splitting_obs(0.05);
    const double splitting_order = std::log2(std::abs((l1 - l2) / (l2 - l3)));

    const bool pass = stepper_order > 1.8 && stepper_order < 2.2 &&
                      splitting_order > 1.8 && splitting_order < 2.2;
    CHECK(stepper_order > 1.8);
    CHECK(stepper_order < 2.2);
    CHECK(splitting_order > 1.8);
    CHECK(splitting_order < 2.2);

    char buf[96];
    std::snprintf(buf, sizeof buf, "observed orders: stepper %.3f, splitting %.3f",
                  stepper_order, splitting_order);
    print_result(9, "numerical order", pass, buf);
}
