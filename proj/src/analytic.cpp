#include "tbreset/analytic.hpp"

#include "tbreset/quadrature.hpp"
#include "tbreset/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace tbr::analytic {

namespace {

void require_time(double t) {
    if (t < 0.0)
        throw std::domain_error("analytic: t must be non-negative");
}

double sq(double x) { return x * x; }

// The reset integrands carry an exp(-lambda t') factor whose support can be
// a vanishing corner of [0, t]; a single adaptive pass over the whole
// interval can sample only zeros and accept 0.  Integrate over panels that
// double in width from 1/lambda outward, and truncate where the exponential
// is below 1e-45 relative (the dropped tail is bounded in the callers).
template <typename F>
double exp_weighted_integral(const F& f, double t, double lambda, double tol) {
    const double span = std::min(t, 45.0 / lambda);
    double a = 0.0;
    double width = std::min(1.0 / lambda, span);
    double total = 0.0;
    int n_panels = 1 + static_cast<int>(std::ceil(std::log2(std::max(span * lambda, 2.0))));
    const double panel_tol = tol / static_cast<double>(n_panels);
    while (a < span) {
        const double b = std::min(a + width, span);
        total += quad::adaptive_simpson(f, a, b, panel_tol);
        a = b;
        width *= 2.0;
    }
    return total;
}

} // namespace

double p_site_no_reset(const ModelParams& params, int m, double t) {
    require_time(t);
    const double arg = params.delta * std::abs(params.field.w(t));
    const double j = specfun::bessel_j(m - params.n0, arg);
    return j * j;
}

double mean_no_reset(const ModelParams& params, double t) {
    (void)params;
    require_time(t);
    return 0.0;
}

double msd_no_reset(const ModelParams& params, double t) {
    require_time(t);
    return 0.5 * sq(params.delta) * std::norm(params.field.w(t));
}

double p_site_reset(const ModelParams& params, int m, double t, double tol) {
    require_time(t);
    if (tol < 1e-12 || tol > 1e-6)
        throw std::domain_error("p_site_reset: tol outside [1e-12, 1e-6]");
    const double no_reset = p_site_no_reset(params, m, t);
    if (params.lambda == 0.0 || t == 0.0)
        return no_reset;
    const double lam = params.lambda;
    const int order = m - params.n_reset;
    const auto& field = params.field;
    const double delta = params.delta;
    const auto integrand = [&](double tp) {
        const double arg = delta * std::abs(field.w_increment(t - tp, t));
        return std::exp(-lam * tp) * sq(specfun::bessel_j(order, arg));
    };
    // Tail beyond 45/lambda: integrand <= e^-45, so lambda * tail < 1e-19.
    const double integral = exp_weighted_integral(integrand, t, lam, tol / lam);
    return std::exp(-lam * t) * no_reset + lam * integral;
}

double mean_reset(const ModelParams& params, double t) {
    require_time(t);
    return static_cast<double>(params.n_reset - params.n0) * (-std::expm1(-params.lambda * t));
}

double msd_reset(const ModelParams& params, double t, double tol) {
    require_time(t);
    if (tol < 1e-12 || tol > 1e-6)
        throw std::domain_error("msd_reset: tol outside [1e-12, 1e-6]");
    const double free_part = std::exp(-params.lambda * t) * msd_no_reset(params, t);
    if (params.lambda == 0.0 || t == 0.0)
        return free_part;
    const double lam = params.lambda;
    const auto& field = params.field;
    const auto integrand = [&](double tp) {
        return std::exp(-lam * tp) * std::norm(field.w_increment(t - tp, t));
    };
    const double prefactor = 0.5 * lam * sq(params.delta);
    // Tail beyond 45/lambda: |w(t)-w(t-t')| <= 2 max|w|, weight e^-45 ~ 3e-20.
    const double integral =
        exp_weighted_integral(integrand, t, lam, tol / std::max(prefactor, 1.0));
    const double hops = sq(static_cast<double>(params.n_reset - params.n0)) *
                        (-std::expm1(-lam * t));
    return free_part + prefactor * integral + hops;
}

double msd_plateau(const ModelParams& params, double tol) {
    if (!(params.lambda > 0.0))
        throw std::domain_error("msd_plateau: requires lambda > 0 (no plateau without resets)");
    if (tol < 1e-12 || tol > 1e-6)
        throw std::domain_error("msd_plateau: tol outside [1e-12, 1e-6]");
    const double lam = params.lambda;
    const auto& field = params.field;
    const auto integrand = [&](double x) {
        return std::exp(-x) * std::norm(field.w(x / lam));
    };
    constexpr double x_cut = 40.0;
    const double half_d2 = 0.5 * sq(params.delta);
    // Tail beyond the cut, bounded with |w(x/lambda)| <= x/lambda:
    //   int_40^inf e^-x (x/lambda)^2 dx = e^-40 (40^2 + 2*40 + 2) / lambda^2
    const double tail_bound = half_d2 * std::exp(-x_cut) * (sq(x_cut) + 2.0 * x_cut + 2.0) / sq(lam);
    const double quad_tol = tol / std::max(half_d2, 1.0);
    if (tail_bound > tol)
        throw quad::QuadratureError("msd_plateau: tail bound exceeds tolerance", tail_bound);
    const double integral = exp_weighted_integral(integrand, x_cut, 1.0, quad_tol);
    return sq(static_cast<double>(params.n_reset - params.n0)) + half_d2 * integral;
}

} // namespace tbr::analytic
