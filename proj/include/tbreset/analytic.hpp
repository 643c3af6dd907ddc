#ifndef TBRESET_ANALYTIC_HPP
#define TBRESET_ANALYTIC_HPP

// Closed-form site-occupation probabilities and moments for the driven
// chain, with and without resets, on the infinite lattice.
//
// Without resets:
//   P_m(t)   = J^2_{m-n0}(delta |w(t)|)
//   mu(t)    = 0
//   S(t)     = delta^2 |w(t)|^2 / 2
//
// With Poisson resets at rate lambda to site n_reset, and the drive phase
// running on the global clock (resets replace the state, not the field),
// the last-renewal decomposition gives
//   Pbar_m(t) = e^{-lambda t} J^2_{m-n0}(delta |w(t)|)
//             + lambda int_0^t dt' e^{-lambda t'}
//                      J^2_{m-n_reset}(delta |w(t) - w(t-t')|),
// where t' is the time since the last reset.  The increment w(t) - w(t-t')
// is the drive integral accumulated since that reset; it reduces to w(t')
// when f0 = 0 or when t is a whole number of drive periods.  The moments
// follow from the Bessel sum rules and are insensitive to the increment's
// phase history where noted:
//   mubar(t) = (n_reset - n0)(1 - e^{-lambda t})            (exact, closed form)
//   Sbar(t)  = e^{-lambda t} delta^2 |w(t)|^2 / 2
//            + (lambda delta^2 / 2) int_0^t dt' e^{-lambda t'} |w(t)-w(t-t')|^2
//            + (n_reset - n0)^2 (1 - e^{-lambda t})
//
// The long-time MSD plateau is the stroboscopic limit (t = nT, n -> inf):
//   Sbar_inf = (n_reset - n0)^2 + (delta^2/2) int_0^inf dx e^{-x} |w(x/lambda)|^2

#include "tbreset/params.hpp"

namespace tbr::analytic {

double p_site_no_reset(const ModelParams& params, int m, double t);
double mean_no_reset(const ModelParams& params, double t);
double msd_no_reset(const ModelParams& params, double t);

double p_site_reset(const ModelParams& params, int m, double t, double tol = 1e-8);
double mean_reset(const ModelParams& params, double t);
double msd_reset(const ModelParams& params, double t, double tol = 1e-8);

/// Stroboscopic long-time MSD limit; requires lambda > 0
/// (throws std::domain_error otherwise: without resets there is no plateau).
double msd_plateau(const ModelParams& params, double tol = 1e-8);

} // namespace tbr::analytic

#endif
