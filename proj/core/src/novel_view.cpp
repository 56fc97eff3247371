// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/novel_view.hpp>
#include <splatpose/trainer.hpp>

#include <cmath>

namespace splatpose {

PoseFitResult
fit_pose(const SceneModel &scene, const CameraPose &init, const CameraIntrinsics &K,
         const Image &target, double extent, const PoseFitConfig &cfg, const Vec3 &background) {
    if (cfg.iters < 0) {
        throw InvalidInput("pose fit iterations must be non-negative");
    }
    SceneModel work = scene;
    const RenderSettings settings{cfg.threads};
    PoseDelta delta;
    Vec3 m_omega = Vec3::Zero(), v_omega = Vec3::Zero();
    Vec3 m_tau = Vec3::Zero(), v_tau = Vec3::Zero();

    PoseFitResult out;
    out.initial_psnr = psnr(render(work, init, delta, K, 0.0, background, settings).image, target);
    PoseDelta best = delta;
    double best_loss = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.iters; ++it) {
        const RenderBuffers buf = render(work, init, delta, K, 0.0, background, settings);
        const PhotometricLoss loss = photometric_loss(buf.image, target, cfg.loss);
        if (!std::isfinite(loss.total)) {
            throw NumericFailure("pose fit loss is not finite");
        }
        if (loss.total < best_loss) {
            best_loss = loss.total;
            best = delta;
        }
        const BackwardResult back =
            render_backward(buf, work, init, delta, K, 0.0, loss.gradient, settings);
        const double progress = cfg.iters > 1 ? static_cast<double>(it) / (cfg.iters - 1) : 1.0;
        const double lr_w = exponential_lr(cfg.lr_omega, cfg.lr_omega_final, progress);
        const double lr_t = exponential_lr(cfg.lr_tau * extent, cfg.lr_tau_final * extent, progress);
        adam_step({delta.omega.data(), 3}, {back.pose.omega.data(), 3}, {m_omega.data(), 3},
                  {v_omega.data(), 3}, lr_w, it + 1, cfg.adam);
        adam_step({delta.tau.data(), 3}, {back.pose.tau.data(), 3}, {m_tau.data(), 3},
                  {v_tau.data(), 3}, lr_t, it + 1, cfg.adam);
    }
    if (cfg.iters > 0) {
        const RenderBuffers last = render(work, init, delta, K, 0.0, background, settings);
        if (photometric_loss(last.image, target, cfg.loss).total > best_loss) {
            delta = best;
        }
    }
    out.pose = apply_pose_delta(delta, init);
    const Image final_image = render(work, init, delta, K, 0.0, background, settings).image;
    out.psnr = psnr(final_image, target);
    out.ssim = ssim(final_image, target, cfg.loss);
    return out;
}

HeldoutReport
evaluate_heldout(const SceneModel &scene, const Trajectory &trained, const Trajectory &gt,
                 const Trajectory &heldout_gt, const std::vector<Image> &heldout_images,
                 const CameraIntrinsics &K, const PoseFitConfig &cfg, const Vec3 &background) {
    if (heldout_gt.size() != heldout_images.size()) {
        throw InvalidInput("held-out poses and images differ in count");
    }
    const Similarity to_scene = align_trajectories(trained, gt).inverse();
    const double extent = scene_extent(trained.poses);
    HeldoutReport report;
    for (std::size_t i = 0; i < heldout_gt.size(); ++i) {
        const CameraPose init = to_scene.apply(heldout_gt.poses[i]);
        report.views.push_back(fit_pose(scene, init, K, heldout_images[i], extent, cfg, background));
        report.mean_psnr += report.views.back().psnr;
        report.mean_ssim += report.views.back().ssim;
    }
    if (!report.views.empty()) {
        report.mean_psnr /= static_cast<double>(report.views.size());
        report.mean_ssim /= static_cast<double>(report.views.size());
    }
    return report;
}

} // namespace splatpose
