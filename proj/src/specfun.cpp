#include "tbreset/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tbr::specfun {

namespace {

// Ascending power series, J_n(x) = sum_k (-1)^k (x/2)^{n+2k} / (k! (n+k)!).
// Safe (no destructive cancellation) when the term ratio (x/2)^2/((k+1)(n+k+1))
// stays below one from the start, i.e. x <= 2*sqrt(n+1); also fine for small x
// where the cancellation amplification is a few digits at most.  Evaluated in
// long double.
double series_jn(int n, double x) {
    const long double half_x = 0.5L * static_cast<long double>(x);
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i)
        term *= half_x / static_cast<long double>(i);
    const long double hx2 = half_x * half_x;
    long double sum = term;
    const int kmax = std::max(40, static_cast<int>(std::ceil(std::abs(x))) + 30);
    for (int k = 1; k <= kmax; ++k) {
        term *= -hx2 / (static_cast<long double>(k) * static_cast<long double>(n + k));
        sum += term;
        if (std::abs(term) < 1e-24L * std::abs(sum) && k > 4)
            break;
    }
    return static_cast<double>(sum);
}

// Miller's downward recurrence: start well above both the order and the
// turning point, recur J_{k-1} = (2k/x) J_k - J_{k+1} down to zero, then
// normalize with 1 = J_0 + 2 sum_{k>=1} J_{2k}.
double miller_jn(int n, double x) {
    const int start = std::max(n, static_cast<int>(std::ceil(x)))
                      + std::max(40, static_cast<int>(15.0 * std::cbrt(x)));
    const int m = start + (start & 1); // even start so the parity bookkeeping is uniform
    long double jp = 0.0L;             // J_{k+2} during the sweep
    long double jc = 1e-30L;           // J_{k+1}; seeded at order m with arbitrary scale
    long double even_sum = 2.0L * jc;  // order-m contribution (m even, m >= 2)
    long double target = 0.0L;
    const long double two_over_x = 2.0L / static_cast<long double>(x);
    for (int k = m - 1; k >= 0; --k) {
        // J_k = (2(k+1)/x) J_{k+1} - J_{k+2}
        const long double jk = static_cast<long double>(k + 1) * two_over_x * jc - jp;
        jp = jc;
        jc = jk;
        if (k % 2 == 0)
            even_sum += (k == 0) ? jc : 2.0L * jc;
        if (k == n)
            target = jc;
        if (std::abs(jc) > 1e250L) {
            jc *= 1e-250L;
            jp *= 1e-250L;
            even_sum *= 1e-250L;
            target *= 1e-250L;
        }
    }
    return static_cast<double>(target / even_sum);
}

} // namespace

double bessel_j(int n, double x) {
    if (!std::isfinite(x))
        throw std::domain_error("bessel_j: non-finite argument");
    double sign = 1.0;
    if (n < 0) {
        n = -n;
        if (n & 1) sign = -sign;
    }
    if (x < 0) {
        x = -x;
        if (n & 1) sign = -sign;
    }
    if (x == 0.0)
        return n == 0 ? 1.0 : 0.0;
    const double series_limit = std::max(8.0, 2.0 * std::sqrt(static_cast<double>(n) + 1.0));
    if (x <= series_limit)
        return sign * series_jn(n, x);
    return sign * miller_jn(n, x);
}

double j0_zero(int k) {
    if (k < 1 || k > 20)
        throw std::domain_error("j0_zero: k must be in [1, 20], got " + std::to_string(k));
    // McMahon seed, then Newton with J_0' = -J_1.
    const double beta = (static_cast<double>(k) - 0.25) * M_PI;
    double z = beta + 1.0 / (8.0 * beta);
    for (int it = 0; it < 30; ++it) {
        const double f = bessel_j(0, z);
        const double df = -bessel_j(1, z);
        const double step = f / df;
        z -= step;
        if (std::abs(step) < 1e-15 * z)
            break;
    }
    return z;
}

} // namespace tbr::specfun
