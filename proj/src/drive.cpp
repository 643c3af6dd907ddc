#include "tbreset/drive.hpp"

#include "tbreset/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tbr::drive {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

DriveField::DriveField(double f0, double omega) : f0_(f0), omega_(omega) {
    if (!(omega > 0.0) || !std::isfinite(omega) || !std::isfinite(f0))
        throw std::domain_error("DriveField: omega must be positive and finite");
    ratio_ = f0 / omega;
    const double r = std::abs(ratio_);
    int p_max = std::max(40, static_cast<int>(std::ceil(r)) + 30);
    // Extend until the dropped tail is far below any representable need.
    while (std::abs(specfun::bessel_j(p_max, ratio_)) > 1e-18 ||
           std::abs(specfun::bessel_j(p_max - 1, ratio_)) > 1e-18)
        p_max += 10;
    jp_.resize(static_cast<std::size_t>(p_max) + 1);
    for (int p = 0; p <= p_max; ++p)
        jp_[static_cast<std::size_t>(p)] = specfun::bessel_j(p, ratio_);
}

double DriveField::period() const { return 2.0 * std::numbers::pi / omega_; }

std::complex<double> DriveField::w_increment(double t_lo, double t_hi) const {
    // secular J_0 term plus the +-p harmonic pairs, folded via J_{-p} = (-1)^p J_p
    std::complex<double> acc = jp_[0] * (t_hi - t_lo);
    const std::complex<double> rot_hi = std::exp(kI * (omega_ * t_hi));
    const std::complex<double> rot_lo = std::exp(kI * (omega_ * t_lo));
    std::complex<double> ph_hi = 1.0;
    std::complex<double> ph_lo = 1.0;
    for (int p = 1; p < static_cast<int>(jp_.size()); ++p) {
        ph_hi *= rot_hi;
        ph_lo *= rot_lo;
        const std::complex<double> diff = ph_hi - ph_lo; // e^{ip w t_hi} - e^{ip w t_lo}
        const double c = jp_[static_cast<std::size_t>(p)] / (static_cast<double>(p) * omega_);
        // +p term: J_p diff / (ip w); -p term: J_{-p} conj(diff) / (-ip w)
        const std::complex<double> plus = -kI * c * diff;
        const std::complex<double> minus =
            ((p & 1) ? -1.0 : 1.0) * (kI * c * std::conj(diff));
        acc += plus + minus;
    }
    return acc;
}

std::complex<double> DriveField::w(double t) const {
    if (t < 0.0)
        throw std::domain_error("DriveField::w: t must be non-negative");
    if (ratio_ == 0.0)
        return {t, 0.0};
    return w_increment(0.0, t);
}

double DriveField::effective_tunnelling(double delta) const {
    if (!(delta > 0.0))
        throw std::domain_error("effective_tunnelling: delta must be positive");
    return delta * jp_[0];
}

DriveSample eval_w(const DriveField& field, double t, double tol) {
    if (t < 0.0)
        throw std::domain_error("eval_w: t must be non-negative");
    if (tol < 1e-14 || tol > 1e-6)
        throw std::domain_error("eval_w: tol outside [1e-14, 1e-6]");
    const std::complex<double> w = field.w(t);
    return DriveSample{t, w, w.real(), w.imag()};
}

} // namespace tbr::drive
