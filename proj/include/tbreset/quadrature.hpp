#ifndef TBRESET_QUADRATURE_HPP
#define TBRESET_QUADRATURE_HPP

// Adaptive Simpson quadrature with the classic |S_fine - S_coarse|/15
// interval error estimate.  Subdivision is capped at 2^20 leaf intervals
// (depth 20); intervals that cannot be resolved within the cap contribute
// their estimate to an unresolved-error budget, and the driver throws if
// that budget exceeds the requested tolerance.

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace tbr::quad {

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    /// Error estimate actually reached when the subdivision cap was hit.
    double achieved_error() const { return achieved_; }

private:
    double achieved_;
};

namespace detail {

inline constexpr int kMaxDepth = 20; // 2^20 leaf intervals

template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth, double& unresolved) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth >= kMaxDepth) {
        if (std::abs(err) > tol)
            unresolved += std::abs(err);
        return left + right + err;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, unresolved)
         + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, unresolved);
}

} // namespace detail

/// Integrate f over [a, b] to absolute tolerance tol.
/// Throws QuadratureError when the subdivision cap leaves more than tol
/// of estimated error unresolved.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (a == b)
        return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double unresolved = 0.0;
    const double result =
        detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0, unresolved);
    if (unresolved > tol)
        throw QuadratureError("adaptive_simpson: tolerance not met at subdivision cap",
                              unresolved);
    return result;
}

} // namespace tbr::quad

#endif
