// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/trainer.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace splatpose {

void
FilterSchedule::validate() const {
    if (!(sigma_max >= 0.0) || !(end_fraction > 0.0 && end_fraction <= 1.0)) {
        throw InvalidInput("filter schedule needs sigma_max >= 0 and end_fraction in (0, 1]");
    }
}

double
filter_sigma(long iter, const FilterSchedule &schedule, long total) {
    const double end = schedule.end_fraction * static_cast<double>(total);
    if (iter < 0 || !(static_cast<double>(iter) < end)) {
        return iter < 0 ? schedule.sigma_max : 0.0;
    }
    const double progress = static_cast<double>(iter) / end;
    const double sigma = std::pow(1.0 + schedule.sigma_max, 1.0 - progress) - 1.0;
    return std::max(0.0, sigma);
}

void
DensifyConfig::validate() const {
    if (interval <= 0 || start < 0 || !(stop_fraction > 0.0) || !(abs_grad_threshold > 0.0) ||
        !(grad_threshold > 0.0) || !(split_scale_fraction > 0.0) || !(opacity_cull > 0.0) ||
        opacity_reset_interval <= 0 || max_gaussians == 0) {
        throw InvalidInput("densification parameters must be positive");
    }
}

void
TrainConfig::validate() const {
    if (total_iters < 0) {
        throw InvalidInput("total_iters must be non-negative");
    }
    for (double lr : {lr_position, lr_position_final, lr_scales, lr_rotation, lr_opacity, lr_color,
                      lr_pose_omega, lr_pose_omega_final, lr_pose_tau, lr_pose_tau_final}) {
        if (!(lr > 0.0)) {
            throw InvalidInput("learning rates must be positive");
        }
    }
    if (log_interval <= 0) {
        throw InvalidInput("log_interval must be positive");
    }
}

double
scene_extent(const std::vector<CameraPose> &poses) {
    if (poses.empty()) {
        return 1.0;
    }
    Vec3 mean = Vec3::Zero();
    for (const auto &p : poses) {
        mean += p.center();
    }
    mean /= static_cast<double>(poses.size());
    double radius = 0.0;
    for (const auto &p : poses) {
        radius = std::max(radius, (p.center() - mean).norm());
    }
    return radius > 0.0 ? 1.1 * radius : 1.0;
}

DensifyReport
densify_and_prune(SceneModel &scene, const DensifyConfig &cfg, long iteration, double extent,
                  std::mt19937_64 &rng) {
    DensifyReport report;
    report.iteration = iteration;
    report.before = scene.size();

    const std::size_t n = scene.size();
    std::vector<double> score(n, 0.0);
    std::vector<std::size_t> candidates;
    std::vector<char> culled(n, 0);
    const double threshold = cfg.use_abs_grad ? cfg.abs_grad_threshold : cfg.grad_threshold;
    for (std::size_t i = 0; i < n; ++i) {
        const GradientStats &st = scene.stats()[i];
        score[i] = cfg.use_abs_grad ? st.mean_abs() : st.mean_norm();
        if (scene[i].opacity() < cfg.opacity_cull) {
            culled[i] = 1;
        } else if (score[i] >= threshold) {
            candidates.push_back(i);
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

    const double split_limit = cfg.split_scale_fraction * extent;
    std::vector<char> split_parent(n, 0);
    std::vector<GaussianPrimitive> added;
    std::vector<std::ptrdiff_t> added_origin;
    std::size_t count = n;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i : candidates) {
        if (count + 1 > cfg.max_gaussians) {
            ++report.skipped_for_capacity;
            continue;
        }
        const GaussianPrimitive &g = scene[i];
        const Vec3 s = g.scales();
        if (s.maxCoeff() > split_limit) {
            const Mat3 R = rotation_from_quaternion(g.rotation);
            for (int child = 0; child < 2; ++child) {
                GaussianPrimitive c = g;
                Vec3 z;
                for (int k = 0; k < 3; ++k) {
                    z[k] = normal(rng);
                }
                c.position = g.position + R * s.cwiseProduct(z);
                c.log_scales = g.log_scales.array() - std::log(1.6);
                added.push_back(c);
                added_origin.push_back(-1);
            }
            split_parent[i] = 1;
            ++report.split;
        } else {
            added.push_back(g);
            added_origin.push_back(-1);
            ++report.cloned;
        }
        ++count;
    }

    std::vector<char> keep(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (culled[i]) {
            keep[i] = 0;
            ++report.pruned;
        } else if (split_parent[i]) {
            keep[i] = 0;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) {
            report.origin.push_back(static_cast<std::ptrdiff_t>(i));
        }
    }
    scene.retain(keep);
    for (std::size_t a = 0; a < added.size(); ++a) {
        scene.add(added[a]);
        report.origin.push_back(added_origin[a]);
    }
    scene.reset_stats();
    report.after = scene.size();
    return report;
}

namespace {

constexpr int kP = GaussianPrimitive::kParamCount;
using ParamBlock = std::array<double, kP>;

// Flat layout: position(3) rotation(4) log_scales(3) opacity(1) color(3).
ParamBlock
pack(const GaussianPrimitive &g) {
    return {g.position.x(),   g.position.y(),   g.position.z(),   g.rotation[0],
            g.rotation[1],    g.rotation[2],    g.rotation[3],    g.log_scales.x(),
            g.log_scales.y(), g.log_scales.z(), g.opacity_logit,  g.color_logits.x(),
            g.color_logits.y(), g.color_logits.z()};
}

void
unpack(const ParamBlock &p, GaussianPrimitive &g) {
    g.position = {p[0], p[1], p[2]};
    g.rotation = {p[3], p[4], p[5], p[6]};
    g.log_scales = {p[7], p[8], p[9]};
    g.opacity_logit = p[10];
    g.color_logits = {p[11], p[12], p[13]};
}

struct Moments {
    ParamBlock m{};
    ParamBlock v{};
};

struct PoseState {
    std::array<double, 6> m{};
    std::array<double, 6> v{};
    long step = 0;
};

void
remap_moments(std::vector<Moments> &moments, const std::vector<std::ptrdiff_t> &origin) {
    std::vector<Moments> next(origin.size());
    for (std::size_t i = 0; i < origin.size(); ++i) {
        if (origin[i] >= 0) {
            next[i] = moments[static_cast<std::size_t>(origin[i])];
        }
    }
    moments = std::move(next);
}

} // namespace

TrainResult
train(const FrameSet &frames, const SceneModel &init, const TrainConfig &cfg,
      const FilterSchedule &schedule, const DensifyConfig &densify, const LossConfig &loss_cfg) {
    cfg.validate();
    schedule.validate();
    densify.validate();
    loss_cfg.validate();
    frames.validate();
    const CameraIntrinsics &K = frames.intrinsics;
    const std::size_t n_frames = frames.frames.size();
    if (n_frames == 0) {
        throw InvalidInput("training needs at least one frame");
    }
    std::vector<CameraPose> initial(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f) {
        const Frame &fr = frames.frames[f];
        if (!fr.pose) {
            throw InvalidInput("frame " + std::to_string(fr.id) + " has no pose");
        }
        if (fr.image.width() != K.width || fr.image.height() != K.height) {
            throw InvalidInput("frame " + std::to_string(fr.id) + " image does not match intrinsics");
        }
        initial[f] = *fr.pose;
    }

    TrainResult result;
    result.scene = init;
    result.scene.reset_stats();
    result.deltas.assign(n_frames, PoseDelta{});
    SceneModel &scene = result.scene;

    const double extent = scene_extent(initial);
    const long total = cfg.total_iters;
    const long densify_stop = static_cast<long>(densify.stop_fraction * static_cast<double>(total));
    std::mt19937_64 rng(cfg.seed);
    RenderSettings rs{cfg.threads};

    std::vector<Moments> moments(scene.size());
    std::vector<PoseState> pose_state(n_frames);
    std::vector<std::size_t> order(n_frames);
    std::iota(order.begin(), order.end(), 0);

    auto finish = [&]() {
        result.poses.resize(n_frames);
        for (std::size_t f = 0; f < n_frames; ++f) {
            result.poses[f] = apply_pose_delta(result.deltas[f], initial[f]);
        }
    };

    for (long it = 0; it < total; ++it) {
        if (it % static_cast<long>(n_frames) == 0) {
            std::shuffle(order.begin(), order.end(), rng);
        }
        const std::size_t f = order[static_cast<std::size_t>(it % static_cast<long>(n_frames))];
        const double sigma = cfg.c2f ? filter_sigma(it, schedule, total) : 0.0;
        const PoseDelta delta = cfg.pose_refinement ? result.deltas[f] : PoseDelta{};

        RenderBuffers buffers = render(scene, initial[f], delta, K, sigma, cfg.background, rs);
        const Image &target = frames.frames[f].image;
        PhotometricLoss photo = photometric_loss(buffers.image, target, loss_cfg);
        AnisotropyLoss aniso;
        double loss = photo.total;
        if (cfg.aniso && loss_cfg.aniso_weight > 0.0) {
            aniso = anisotropy_loss(scene, loss_cfg.aniso_ratio);
            loss += loss_cfg.aniso_weight * aniso.value;
        }
        if (!std::isfinite(loss)) {
            result.iterations_run = it;
            finish();
            throw TrainingDiverged("non-finite loss at iteration " + std::to_string(it),
                                   std::move(result));
        }

        BackwardResult back =
            render_backward(buffers, scene, initial[f], delta, K, sigma, photo.gradient, rs);

        const long step = it + 1;
        const double progress = total > 0 ? static_cast<double>(it) / static_cast<double>(total) : 0.0;
        const double lr_pos =
            exponential_lr(cfg.lr_position * extent, cfg.lr_position_final * extent, progress);
        std::array<double, kP> lr{};
        std::fill(lr.begin(), lr.begin() + 3, lr_pos);
        std::fill(lr.begin() + 3, lr.begin() + 7, cfg.lr_rotation);
        std::fill(lr.begin() + 7, lr.begin() + 10, cfg.lr_scales);
        lr[10] = cfg.lr_opacity;
        std::fill(lr.begin() + 11, lr.end(), cfg.lr_color);

        const AdamBias bias = AdamBias::at(step, cfg.adam);
        const auto &gg = back.gaussians;
        for (std::size_t i = 0; i < scene.size(); ++i) {
            GaussianPrimitive &g = scene[i];
            Vec3 dlog_s = gg.log_scales[i];
            if (!aniso.scale_gradient.empty()) {
                dlog_s += loss_cfg.aniso_weight * aniso.scale_gradient[i].cwiseProduct(g.scales());
            }
            const ParamBlock grad = {gg.position[i].x(), gg.position[i].y(), gg.position[i].z(),
                                     gg.rotation[i][0],  gg.rotation[i][1],  gg.rotation[i][2],
                                     gg.rotation[i][3],  dlog_s.x(),         dlog_s.y(),
                                     dlog_s.z(),         gg.opacity_logit[i], gg.color_logits[i].x(),
                                     gg.color_logits[i].y(), gg.color_logits[i].z()};
            ParamBlock p = pack(g);
            Moments &mo = moments[i];
            for (int k = 0; k < kP; ++k) {
                adam_update({&p[k], 1}, {&grad[k], 1}, {&mo.m[k], 1}, {&mo.v[k], 1}, lr[k], bias,
                            cfg.adam);
            }
            unpack(p, g);
        }

        if (cfg.pose_refinement) {
            PoseState &ps = pose_state[f];
            ps.step += 1;
            const double lr_w = exponential_lr(cfg.lr_pose_omega, cfg.lr_pose_omega_final, progress);
            const double lr_t = exponential_lr(cfg.lr_pose_tau * extent,
                                               cfg.lr_pose_tau_final * extent, progress);
            PoseDelta &d = result.deltas[f];
            std::array<double, 6> p = {d.omega.x(), d.omega.y(), d.omega.z(),
                                       d.tau.x(),   d.tau.y(),   d.tau.z()};
            const std::array<double, 6> g = {back.pose.omega.x(), back.pose.omega.y(),
                                             back.pose.omega.z(), back.pose.tau.x(),
                                             back.pose.tau.y(),   back.pose.tau.z()};
            adam_step({p.data(), 3}, {g.data(), 3}, {ps.m.data(), 3}, {ps.v.data(), 3}, lr_w,
                      ps.step, cfg.adam);
            adam_step({p.data() + 3, 3}, {g.data() + 3, 3}, {ps.m.data() + 3, 3},
                      {ps.v.data() + 3, 3}, lr_t, ps.step, cfg.adam);
            d.omega = {p[0], p[1], p[2]};
            d.tau = {p[3], p[4], p[5]};
        }

        const long done = it + 1;
        if (done < densify_stop && done >= densify.start && done % densify.interval == 0) {
            DensifyReport rep = densify_and_prune(scene, densify, done, extent, rng);
            remap_moments(moments, rep.origin);
            result.densify_log.push_back(std::move(rep));
        }
        if (done < densify_stop && done % densify.opacity_reset_interval == 0) {
            const double cap = logit(0.01);
            for (std::size_t i = 0; i < scene.size(); ++i) {
                scene[i].opacity_logit = std::min(scene[i].opacity_logit, cap);
                moments[i].m[10] = 0.0;
                moments[i].v[10] = 0.0;
            }
        }
        if (done % cfg.log_interval == 0 || done == total) {
            MetricsRow row;
            row.iter = done;
            row.loss = loss;
            row.l1 = photo.l1;
            row.dssim = photo.dssim;
            row.aniso = aniso.value;
            row.sigma = sigma;
            row.n_gaussians = scene.size();
            row.psnr_train = psnr(buffers.image, target);
            result.metrics.push_back(row);
        }
        result.iterations_run = done;
    }
    finish();
    return result;
}

} // namespace splatpose
