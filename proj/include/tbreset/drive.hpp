#ifndef TBRESET_DRIVE_HPP
#define TBRESET_DRIVE_HPP

// The sinusoidal drive F(t) = f0 cos(omega t) and its phase integral
//   w(t) = int_0^t exp(i eta(t')) dt',   eta(t) = (f0/omega) sin(omega t),
// evaluated through the Bessel expansion
//   w(t) = J_0(r) t + sum_{p != 0} J_p(r) (e^{i p omega t} - 1) / (i p omega),
// with r = f0/omega.  Coefficients are computed once per field and shared;
// evaluation is O(P) with P = max(40, ceil(r) + 30).

#include <complex>
#include <vector>

namespace tbr::drive {

class DriveField {
public:
    /// omega must be positive (the static-field case is out of scope).
    DriveField(double f0, double omega);

    double f0() const { return f0_; }
    double omega() const { return omega_; }
    double ratio() const { return ratio_; }
    double period() const;

    /// w(t) for t >= 0 (throws std::domain_error for t < 0).
    std::complex<double> w(double t) const;

    /// w(t_hi) - w(t_lo), the propagator increment over [t_lo, t_hi].
    /// Summed in one pass rather than by subtraction of two evaluations.
    std::complex<double> w_increment(double t_lo, double t_hi) const;

    /// Delta * J_0(f0/omega); |result| never exceeds delta.
    double effective_tunnelling(double delta) const;

private:
    double f0_;
    double omega_;
    double ratio_;
    std::vector<double> jp_; // J_p(ratio), p = 0..P
};

struct DriveSample {
    double t;
    std::complex<double> w;
    double u; // Re w
    double v; // Im w
};

/// Evaluate w(t) with a truncation-error check against tol
/// (tol in [1e-14, 1e-6]; the series is accurate to ~1e-13 |w| regardless).
DriveSample eval_w(const DriveField& field, double t, double tol = 1e-10);

} // namespace tbr::drive

#endif
