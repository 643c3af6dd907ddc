#ifndef TBRESET_PARAMS_HPP
#define TBRESET_PARAMS_HPP

#include "tbreset/drive.hpp"

#include <stdexcept>

namespace tbr {

/// Physical parameters of the driven chain with resets.
/// delta: tunnelling frequency (> 0); lambda: reset rate (>= 0);
/// n0: initial site label; n_reset: reset target site label.
struct ModelParams {
    double delta;
    drive::DriveField field;
    double lambda;
    int n0;
    int n_reset;

    ModelParams(double delta_, drive::DriveField field_, double lambda_, int n0_,
                int n_reset_)
        : delta(delta_), field(std::move(field_)), lambda(lambda_), n0(n0_),
          n_reset(n_reset_) {
        if (!(delta > 0.0))
            throw std::invalid_argument("ModelParams: delta must be positive");
        if (lambda < 0.0)
            throw std::invalid_argument("ModelParams: lambda must be non-negative");
    }
};

} // namespace tbr

#endif
