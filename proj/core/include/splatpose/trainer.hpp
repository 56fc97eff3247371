// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/error.hpp>
#include <splatpose/keyframes.hpp>
#include <splatpose/losses.hpp>
#include <splatpose/optimizer.hpp>
#include <splatpose/rasterizer.hpp>
#include <splatpose/scene.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

namespace splatpose {

/// Coarse-to-fine screen-space blur schedule:
///   sigma(i) = (1 + sigma_max)^(1 - i / (end_fraction * total)) - 1,
/// and 0 from end_fraction * total onwards.
struct FilterSchedule {
    double sigma_max = 8.0;   ///< pixels
    double end_fraction = 0.7;

    void validate() const;
};

double filter_sigma(long iter, const FilterSchedule &schedule, long total);

struct DensifyConfig {
    int interval = 100;
    int start = 500;
    double stop_fraction = 0.5;
    /// Mean per-view sum of per-pixel |dL/dmu2d| (both components), pixels.
    double abs_grad_threshold = 0.0008;
    /// Mean per-view |dL/dmu2d|, used when use_abs_grad is false.
    double grad_threshold = 0.0004;
    bool use_abs_grad = true;
    double split_scale_fraction = 0.01; ///< of the scene extent
    double opacity_cull = 0.005;
    int opacity_reset_interval = 3000;
    std::size_t max_gaussians = 500000;

    void validate() const;
};

struct DensifyReport {
    long iteration = 0;
    std::size_t before = 0;
    std::size_t after = 0;
    std::size_t split = 0;
    std::size_t cloned = 0;
    std::size_t pruned = 0;
    std::size_t skipped_for_capacity = 0;
    /// For every primitive after the call: its index before the call, or -1
    /// for a newly created one.
    std::vector<std::ptrdiff_t> origin;
};

/// Split, clone and cull according to the accumulated gradient statistics,
/// then reset the statistics. Split children are drawn from the parent
/// Gaussian using rng.
DensifyReport densify_and_prune(SceneModel &scene, const DensifyConfig &cfg, long iteration,
                                double scene_extent, std::mt19937_64 &rng);

struct TrainConfig {
    long total_iters = 7000;
    double lr_position = 1.6e-4; ///< times scene extent
    double lr_position_final = 1.6e-6;
    double lr_scales = 5e-3;
    double lr_rotation = 1e-3;
    double lr_opacity = 5e-2;
    double lr_color = 2.5e-3;
    double lr_pose_omega = 1e-3;
    double lr_pose_omega_final = 1e-5;
    double lr_pose_tau = 1e-3; ///< times scene extent
    double lr_pose_tau_final = 1e-5;
    AdamHyper adam;
    bool pose_refinement = true;
    bool c2f = true;
    bool aniso = true;
    std::uint64_t seed = 0;
    int threads = 1;
    Vec3 background = Vec3::Zero();
    int log_interval = 100;

    void validate() const;
};

struct MetricsRow {
    long iter = 0;
    double loss = 0.0;
    double l1 = 0.0;
    double dssim = 0.0;
    double aniso = 0.0;
    double sigma = 0.0;
    std::size_t n_gaussians = 0;
    double psnr_train = 0.0;
};

struct TrainResult {
    SceneModel scene;
    std::vector<PoseDelta> deltas;
    std::vector<CameraPose> poses; ///< refined world-to-camera, delta applied
    std::vector<MetricsRow> metrics;
    std::vector<DensifyReport> densify_log;
    long iterations_run = 0;
};

/// Thrown when the loss becomes non-finite; carries the last state.
class TrainingDiverged : public NumericFailure {
  public:
    TrainingDiverged(const std::string &what, TrainResult snapshot)
        : NumericFailure(what), snapshot_(std::make_shared<TrainResult>(std::move(snapshot))) {}

    const TrainResult &
    snapshot() const {
        return *snapshot_;
    }

  private:
    std::shared_ptr<const TrainResult> snapshot_;
};

/// 1.1 times the largest distance of a camera center from their mean.
double scene_extent(const std::vector<CameraPose> &poses);

/// Jointly optimizes the Gaussians and one PoseDelta per frame. Every frame
/// needs a pose and an image matching the intrinsics.
TrainResult train(const FrameSet &frames, const SceneModel &init, const TrainConfig &cfg,
                  const FilterSchedule &schedule, const DensifyConfig &densify,
                  const LossConfig &loss_cfg);

} // namespace splatpose
