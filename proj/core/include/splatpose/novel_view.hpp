// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/evalmetrics.hpp>
#include <splatpose/losses.hpp>
#include <splatpose/optimizer.hpp>
#include <splatpose/rasterizer.hpp>

#include <vector>

namespace splatpose {

/// Test-time pose optimization with the scene frozen.
struct PoseFitConfig {
    int iters = 200;
    double lr_omega = 2e-3;
    double lr_omega_final = 1e-5;
    double lr_tau = 2e-3; ///< times scene extent
    double lr_tau_final = 1e-5;
    LossConfig loss;
    AdamHyper adam;
    int threads = 1;
};

struct PoseFitResult {
    CameraPose pose;
    double psnr = 0.0;
    double ssim = 0.0;
    double initial_psnr = 0.0;
};

/// Fits a PoseDelta so that the render of scene from init matches target.
PoseFitResult fit_pose(const SceneModel &scene, const CameraPose &init, const CameraIntrinsics &K,
                       const Image &target, double scene_extent, const PoseFitConfig &cfg,
                       const Vec3 &background = Vec3::Zero());

struct HeldoutReport {
    std::vector<PoseFitResult> views;
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;
};

/// Scores held-out views of a trained scene. The similarity aligning the
/// trained poses to ground truth is inverted to place every held-out ground
/// truth pose in the scene frame, then each pose is refined by fit_pose and
/// the refined render is compared with the held-out image.
HeldoutReport evaluate_heldout(const SceneModel &scene, const Trajectory &trained,
                               const Trajectory &gt, const Trajectory &heldout_gt,
                               const std::vector<Image> &heldout_images,
                               const CameraIntrinsics &K, const PoseFitConfig &cfg,
                               const Vec3 &background = Vec3::Zero());

} // namespace splatpose
