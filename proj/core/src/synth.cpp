// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/synth.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace splatpose {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

} // namespace

void
SynthSpec::validate() const {
    if (n_gaussians < 1 || n_cameras < 2 || width < 1 || height < 1 || n_heldout < 0) {
        throw InvalidInput("synth counts and image size must be positive");
    }
    if (!(scene_radius > 0.0) || !(camera_distance > 1.0) || !(fov_degrees > 0.0) ||
        !(fov_degrees < 180.0)) {
        throw InvalidInput("synth geometry out of range");
    }
    if (!(arc_degrees > 0.0) || !(arc_degrees < 360.0)) {
        throw InvalidInput("synth arc must lie in (0, 360) degrees");
    }
    if (rotation_noise_deg < 0.0 || translation_noise < 0.0 || seed_jitter < 0.0) {
        throw InvalidInput("synth noise levels must be non-negative");
    }
}

CameraIntrinsics
SynthSpec::intrinsics() const {
    CameraIntrinsics K;
    K.width = width;
    K.height = height;
    K.fx = 0.5 * width / std::tan(0.5 * fov_degrees * kDeg);
    K.fy = K.fx;
    K.cx = 0.5 * width;
    K.cy = 0.5 * height;
    K.near = 0.01 * scene_radius;
    return K;
}

CameraPose
look_at(const Vec3 &eye, const Vec3 &target, const Vec3 &up) {
    const Vec3 forward = (target - eye).normalized();
    const Vec3 right = forward.cross(up).normalized();
    const Vec3 down = forward.cross(right);
    CameraPose pose;
    pose.rotation.row(0) = right.transpose();
    pose.rotation.row(1) = down.transpose();
    pose.rotation.row(2) = forward.transpose();
    pose.translation = -pose.rotation * eye;
    return pose;
}

CameraPose
arc_camera(const SynthSpec &spec, double azimuth) {
    const double d = spec.camera_distance * spec.scene_radius;
    const double el = spec.elevation_degrees * kDeg;
    const Vec3 eye(d * std::cos(el) * std::sin(azimuth), d * std::sin(el),
                   -d * std::cos(el) * std::cos(azimuth));
    return look_at(eye, Vec3::Zero());
}

SynthResult
generate(const SynthSpec &spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double R = spec.scene_radius;

    SynthResult out;
    out.intrinsics = spec.intrinsics();

    for (int i = 0; i < spec.n_gaussians; ++i) {
        Vec3 dir(normal(rng), normal(rng), normal(rng));
        while (dir.norm() < 1e-12) {
            dir = Vec3(normal(rng), normal(rng), normal(rng));
        }
        GaussianPrimitive g;
        g.position = dir.normalized() * (R * std::cbrt(unit(rng)));
        Vec4 q(normal(rng), normal(rng), normal(rng), normal(rng));
        g.rotation = Quaternion(q).coeffs();
        // Axis lengths log-uniform within a factor sqrt(3) of a base size,
        // so the max/min ratio stays at or below 3.
        const double base = R * (0.08 + 0.08 * unit(rng));
        for (int a = 0; a < 3; ++a) {
            g.log_scales[a] = std::log(base) + (unit(rng) - 0.5) * std::log(3.0);
        }
        g.opacity_logit = logit(0.5 + 0.45 * unit(rng));
        for (int c = 0; c < 3; ++c) {
            g.color_logits[c] = logit(0.05 + 0.9 * unit(rng));
        }
        out.gt_scene.add(g);
    }

    const double arc = spec.arc_degrees * kDeg;
    const double step = arc / (spec.n_cameras - 1);
    const double start = -0.5 * arc;
    const double rot_std = spec.rotation_noise_deg * kDeg / std::sqrt(3.0);
    const double trans_std = spec.translation_noise * R / std::sqrt(3.0);
    for (int i = 0; i < spec.n_cameras; ++i) {
        const CameraPose pose = arc_camera(spec, start + step * i);
        PoseDelta noise;
        for (int a = 0; a < 3; ++a) {
            noise.omega[a] = rot_std * normal(rng);
        }
        for (int a = 0; a < 3; ++a) {
            noise.tau[a] = trans_std * normal(rng);
        }
        out.gt.ids.push_back(i);
        out.gt.poses.push_back(pose);
        out.noise.push_back(noise);
        out.perturbed.ids.push_back(i);
        out.perturbed.poses.push_back(apply_pose_delta(noise, pose));
    }

    // Held-out views sit half way between training cameras, spread over the arc.
    for (int h = 0; h < spec.n_heldout; ++h) {
        const int gap = static_cast<int>(
            std::floor((h + 0.5) * (spec.n_cameras - 1) / static_cast<double>(spec.n_heldout)));
        out.heldout.ids.push_back(1000 + h);
        out.heldout.poses.push_back(arc_camera(spec, start + step * (gap + 0.5)));
    }

    const Vec3 black = Vec3::Zero();
    for (const auto &pose : out.gt.poses) {
        out.images.push_back(render(out.gt_scene, pose, {}, out.intrinsics, 0.0, black, {}).image);
    }
    for (const auto &pose : out.heldout.poses) {
        out.heldout_images.push_back(
            render(out.gt_scene, pose, {}, out.intrinsics, 0.0, black, {}).image);
    }

    for (std::size_t i = 0; i < out.gt_scene.size(); ++i) {
        const GaussianPrimitive &g = out.gt_scene[i];
        const Vec3 jitter(normal(rng), normal(rng), normal(rng));
        out.seed_points.push_back(g.position + spec.seed_jitter * R * jitter);
        out.seed_colors.push_back(g.color());
    }
    return out;
}

} // namespace splatpose
