#include "tbreset/lindblad.hpp"

#include "tbreset/analytic.hpp"
#include "tbreset/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace tbr::lindblad {

namespace {

// Exact flow of the relaxation generator lambda (T - 1) over duration tau:
// rho -> e^{-lambda tau} rho + (1 - e^{-lambda tau}) Tr[rho] |target><target|.
void relax(Eigen::MatrixXcd& rho, double lambda, double tau, int target_index) {
    if (lambda == 0.0 || tau == 0.0)
        return;
    const double decay = std::exp(-lambda * tau);
    const std::complex<double> gain = (1.0 - decay) * rho.trace();
    rho *= decay;
    rho(target_index, target_index) += gain;
}

} // namespace

std::vector<lattice::DensityMatrix> lindblad_evolve(
    const ModelParams& params, const lattice::Lattice& lat,
    const std::vector<double>& sample_times, double dt_max) {
    if (sample_times.empty())
        throw std::invalid_argument("lindblad_evolve: empty sample grid");
    if (!(dt_max > 0.0))
        dt_max = lattice::default_dt_max(params);
    const lattice::LatticeOperators ops = lattice::build_operators(params, lat);
    const int target = lat.index_of(params.n_reset);
    Eigen::MatrixXcd rho =
        lattice::DensityMatrix::site_projector(lat, params.n0).rho;
    std::vector<lattice::DensityMatrix> out;
    out.reserve(sample_times.size());
    double cursor = 0.0;
    for (double t_next : sample_times) {
        if (t_next < cursor)
            throw std::domain_error("lindblad_evolve: sample times must be increasing");
        const double len = t_next - cursor;
        if (len > 0.0) {
            const int n_steps = std::max(1, static_cast<int>(std::ceil(len / dt_max)));
            const double h = len / n_steps;
            for (int k = 0; k < n_steps; ++k) {
                relax(rho, params.lambda, 0.5 * h, target);
                const Eigen::MatrixXcd u =
                    lattice::midpoint_propagator(ops, params, cursor + k * h, h);
                rho = u * rho * u.adjoint();
                relax(rho, params.lambda, 0.5 * h, target);
                // both sub-flows are trace-preserving; divide out the matmul
                // rounding so it cannot accumulate over long runs
                rho /= rho.trace().real();
            }
        }
        cursor = t_next;
        out.push_back(lattice::DensityMatrix{rho});
    }
    return out;
}

namespace {

// Envelope max_{xi in [0, x]} |J_a(xi)| on a coarse grid; monotone in x, used
// only to select which (site, time) pairs are compared.
double bessel_envelope(int a, double x) {
    double peak = 0.0;
    const int n = 64;
    for (int i = 1; i <= n; ++i)
        peak = std::max(peak, std::abs(specfun::bessel_j(a, x * i / n)));
    return peak;
}

// Ring-vs-infinite-lattice probability error bound at site m for amplitude
// seeded at label s, when the spread is at most Bessel argument x.  Two
// finite-size mechanisms: wrapped images at orders (m - s) + k N, and
// reflection off the label seam (the drive potential jumps by N f0 cos(wt)
// across the bond between the last and first label, acting as a wall whose
// mirror images of the seed sit at 2*wall - s).
double image_error_bound(int m, int s, double x, const lattice::Lattice& lat,
                         bool driven) {
    const double direct = bessel_envelope(std::abs(m - s), x);
    double err = 0.0;
    for (int k : {-2, -1, 1, 2}) {
        const double img = bessel_envelope(std::abs(m - s + k * lat.n_sites), x);
        err += 2.0 * direct * img + img * img;
    }
    if (driven) { // no potential cliff at the seam without the drive
        const double wall_lo = lat.first_label - 0.5;
        const double wall_hi = lat.first_label + lat.n_sites - 0.5;
        for (double wall : {wall_lo, wall_hi}) {
            const int mirror = static_cast<int>(std::lround(2.0 * wall)) - s;
            const double img = bessel_envelope(std::abs(m - mirror), x);
            err += 2.0 * direct * img + img * img;
        }
    }
    return err;
}

} // namespace

RenewalReport renewal_check(const ModelParams& params, const lattice::Lattice& lat,
                            const std::vector<double>& times, double tolerance,
                            double dt_max) {
    RenewalReport report;
    report.tolerance = tolerance;
    const auto states = lindblad_evolve(params, lat, times, dt_max);

    // Spread envelopes: delta |w(t)| for the no-reset seed, and
    // delta sup_{s<=t} |w(t)-w(s)| for the reset seed.
    const auto& field = params.field;
    std::vector<double> x0(times.size());
    std::vector<double> xr(times.size());
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        x0[ti] = params.delta * std::abs(field.w(t));
        double sup = 0.0;
        const int n_scan = 256;
        for (int i = 0; i <= n_scan; ++i)
            sup = std::max(sup, std::abs(field.w_increment(t * i / n_scan, t)));
        xr[ti] = params.delta * sup * 1.05;
    }

    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const Eigen::VectorXd diag = states[ti].diagonal_real();
        const double w_free = std::exp(-params.lambda * times[ti]);
        const bool driven = params.field.f0() != 0.0;
        for (int j = 0; j < lat.n_sites; ++j) {
            const int m = lat.label_of(j);
            const double bound =
                w_free * image_error_bound(m, params.n0, x0[ti], lat, driven) +
                (1.0 - w_free) *
                    image_error_bound(m, params.n_reset, xr[ti], lat, driven);
            if (bound > 0.1 * tolerance) {
                ++report.n_skipped;
                continue;
            }
            const double renewal =
                analytic::p_site_reset(params, m, times[ti],
                                       std::min(1e-9, 0.01 * tolerance));
            const double d = std::abs(diag(j) - renewal);
            if (d > report.max_abs_discrepancy) {
                report.max_abs_discrepancy = d;
                report.worst_time = times[ti];
                report.worst_site = m;
            }
            ++report.n_compared;
        }
    }
    report.pass = report.n_compared > 0 && report.max_abs_discrepancy < tolerance;
    return report;
}

Eigen::MatrixXcd liouvillian_matrix(const Eigen::MatrixXd& h) {
    const int n = static_cast<int>(h.rows());
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n * n, n * n);
    for (int m = 0; m < n; ++m)
        for (int nn = 0; nn < n; ++nn)
            for (int mp = 0; mp < n; ++mp)
                for (int np = 0; np < n; ++np) {
                    double val = 0.0;
                    if (nn == np)
                        val += h(m, mp);
                    if (m == mp)
                        val -= h(np, nn);
                    l(m * n + nn, mp * n + np) = val;
                }
    return l;
}

Eigen::MatrixXd reset_channel_matrix(int n_sites, int target_index) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n_sites * n_sites, n_sites * n_sites);
    for (int n2 = 0; n2 < n_sites; ++n2)
        t(target_index * n_sites + target_index, n2 * n_sites + n2) = 1.0;
    return t;
}

} // namespace tbr::lindblad
