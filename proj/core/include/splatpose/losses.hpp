// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/image.hpp>
#include <splatpose/scene.hpp>

#include <vector>

namespace splatpose {

struct LossConfig {
    double lambda = 0.2;       ///< D-SSIM weight in the photometric loss
    double aniso_weight = 0.1;
    double aniso_ratio = 4.0;  ///< max/min scale ratio tolerated without penalty
    int ssim_window = 11;
    double ssim_sigma = 1.5;
    double c1 = 0.01 * 0.01;
    double c2 = 0.03 * 0.03;

    void validate() const;
};

struct PhotometricLoss {
    double total = 0.0;
    double l1 = 0.0;
    double dssim = 0.0; ///< (1 - SSIM) / 2
    Image gradient;     ///< dL/drendered
};

/// (1 - lambda) * mean|rendered - target| + lambda * (1 - SSIM) / 2, with its
/// exact gradient. Throws InvalidInput on shape mismatch.
PhotometricLoss photometric_loss(const Image &rendered, const Image &target, const LossConfig &cfg);

/// Mean local SSIM over pixels and channels; Gaussian window, reflect padding
/// (edge pixel not repeated). Throws InvalidInput when either side is smaller
/// than the window.
double ssim(const Image &a, const Image &b, const LossConfig &cfg = {});

/// SSIM together with d SSIM / d a.
double ssim_with_gradient(const Image &a, const Image &b, const LossConfig &cfg, Image &grad_a);

struct AnisotropyLoss {
    double value = 0.0;
    std::vector<Vec3> scale_gradient; ///< with respect to activated scales
};

/// (1/N) sum_i max(max(S_i)/min(S_i), r) - r.
AnisotropyLoss anisotropy_loss(const SceneModel &scene, double ratio);

/// 10 log10(1 / MSE), 100 dB when MSE < 1e-10.
double psnr(const Image &a, const Image &b);

inline constexpr double kPsnrCap = 100.0;

/// Normalized 1D Gaussian taps used by the SSIM window.
std::vector<double> gaussian_window(int size, double sigma);

} // namespace splatpose
