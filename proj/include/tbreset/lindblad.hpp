#ifndef TBRESET_LINDBLAD_HPP
#define TBRESET_LINDBLAD_HPP

// Direct integration of the reset master equation
//   d rho/dt = -i [H(t), rho] + lambda T rho - lambda rho,
// by Strang splitting: exact half-relaxation, midpoint-exponential unitary
// step, exact half-relaxation.  Both sub-flows preserve the trace exactly,
// so the composed step does too; the global error is O(dt^2).
//
// This is the independent oracle of the artifact: its output is compared
// against the renewal formula (analytic) and the trajectory ensemble (lattice).

#include "tbreset/lattice.hpp"
#include "tbreset/params.hpp"

#include <Eigen/Dense>

#include <vector>

namespace tbr::lindblad {

/// rho(t) on the given sample grid, starting from |n0><n0| at t = 0.
std::vector<lattice::DensityMatrix> lindblad_evolve(
    const ModelParams& params, const lattice::Lattice& lattice,
    const std::vector<double>& sample_times, double dt_max);

struct RenewalReport {
    double max_abs_discrepancy = 0.0; // over the compared (site, time) pairs
    std::size_t n_compared = 0;
    std::size_t n_skipped = 0; // outside the finite-size validity window
    double tolerance = 0.0;
    bool pass = false;
    double worst_time = 0.0;
    int worst_site = 0;
};

/// Compare lindblad_evolve diagonals against the renewal formula at every
/// (site, time) pair whose ring-vs-infinite-lattice image error bound is
/// below tolerance/10 (Bessel tail bound on the wrapped amplitudes).
RenewalReport renewal_check(const ModelParams& params, const lattice::Lattice& lattice,
                            const std::vector<double>& times, double tolerance,
                            double dt_max);

/// (mn| L |m'n') = H_{mm'} d_{nn'} - H_{n'n} d_{mm'}, vectorized with
/// row-major pairs |mn) -> m*N + n.  Hermitian for Hermitian H; materialized
/// only for small-N sanity checks.
Eigen::MatrixXcd liouvillian_matrix(const Eigen::MatrixXd& h);

/// (n1 n1'|T|n2 n2') = d_{n1,n1'} d_{n2,n2'} d_{n1,target_index}.
Eigen::MatrixXd reset_channel_matrix(int n_sites, int target_index);

} // namespace tbr::lindblad

#endif
