// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace splatpose {

struct AdamHyper {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-15;
};

/// Bias-correction factors for a given 1-based step.
struct AdamBias {
    double first = 1.0;       ///< 1 - beta1^step
    double second_sqrt = 1.0; ///< sqrt(1 - beta2^step)

    static AdamBias at(long step, const AdamHyper &hyper);
};

/// Adam update with precomputed bias correction.
void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                 std::span<double> v, double lr, const AdamBias &bias, const AdamHyper &hyper);

/// One Adam step over a parameter block. `step` is the 1-based step count used
/// for bias correction.
void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m,
               std::span<double> v, double lr, long step, const AdamHyper &hyper);

/// Log-linear interpolation from lr_init at progress 0 to lr_final at 1.
inline double
exponential_lr(double lr_init, double lr_final, double progress) {
    const double t = progress < 0.0 ? 0.0 : (progress > 1.0 ? 1.0 : progress);
    return std::exp((1.0 - t) * std::log(lr_init) + t * std::log(lr_final));
}

} // namespace splatpose
