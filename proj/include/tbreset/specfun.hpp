#ifndef TBRESET_SPECFUN_HPP
#define TBRESET_SPECFUN_HPP

// Integer-order Bessel functions of the first kind, dependency-free.
//
// Accuracy target: absolute error <= 1e-12 for |x| <= 1e4 at any integer
// order.  Negative orders and arguments reduce exactly through
// J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x).

namespace tbr::specfun {

/// J_n(x).  Throws std::domain_error if x is not finite.
double bessel_j(int n, double x);

/// k-th positive zero of J_0, k in [1, 20].  Newton-refined to ~1e-14.
/// Throws std::domain_error for k outside the supported range.
double j0_zero(int k);

} // namespace tbr::specfun

#endif
