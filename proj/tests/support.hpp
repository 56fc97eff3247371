// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/geometry.hpp>
#include <splatpose/image.hpp>
#include <splatpose/rasterizer.hpp>
#include <splatpose/scene.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

namespace splatpose::testing {

/// Seeded generator for property tests.
class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double
    uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    double
    normal(double stddev = 1.0) {
        return std::normal_distribution<double>(0.0, stddev)(rng_);
    }
    int
    integer(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }
    Vec3
    vec3(double lo, double hi) {
        return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
    }
    Vec3
    unit_vector() {
        Vec3 v;
        do {
            v = {normal(), normal(), normal()};
        } while (v.norm() < 1e-6);
        return v.normalized();
    }
    Quaternion
    quaternion() {
        Vec4 q;
        do {
            q = {normal(), normal(), normal(), normal()};
        } while (q.norm() < 1e-6);
        return Quaternion(q);
    }
    Mat3
    rotation() {
        return rotation_from_quaternion(quaternion());
    }
    CameraPose
    pose(double translation_range = 2.0) {
        CameraPose p;
        p.rotation = rotation();
        p.translation = vec3(-translation_range, translation_range);
        return p;
    }
    std::mt19937_64 &
    engine() {
        return rng_;
    }

  private:
    std::mt19937_64 rng_;
};

/// Small pinhole camera looking down +z.
inline CameraIntrinsics
small_intrinsics(int size = 32) {
    CameraIntrinsics K;
    K.width = size;
    K.height = size;
    K.fx = K.fy = 0.9 * size;
    K.cx = K.cy = 0.5 * size;
    K.near = 0.01;
    return K;
}

/// Random Gaussians in front of a camera at the origin looking down +z.
inline SceneModel
random_scene(Gen &gen, int n, double depth_lo = 2.5, double depth_hi = 4.0) {
    std::vector<GaussianPrimitive> gs(n);
    for (auto &g : gs) {
        const double z = gen.uniform(depth_lo, depth_hi);
        g.position = {gen.uniform(-0.35, 0.35) * z, gen.uniform(-0.35, 0.35) * z, z};
        g.rotation = gen.quaternion().coeffs() * gen.uniform(0.7, 1.3);
        g.log_scales = {std::log(gen.uniform(0.08, 0.25)), std::log(gen.uniform(0.08, 0.25)),
                        std::log(gen.uniform(0.08, 0.25))};
        g.opacity_logit = gen.uniform(-1.5, 1.5);
        g.color_logits = gen.vec3(-2.0, 2.0);
    }
    return SceneModel(std::move(gs));
}

/// Camera poses near the identity, so random_scene stays in view.
inline CameraPose
jittered_pose(Gen &gen, double angle = 0.05, double shift = 0.05) {
    CameraPose p;
    p.rotation = exp_so3(gen.unit_vector() * gen.uniform(0.0, angle));
    p.translation = gen.vec3(-shift, shift);
    return p;
}

inline Image
random_image(Gen &gen, int w, int h) {
    Image img(w, h);
    for (double &v : img.data()) {
        v = gen.uniform(0.0, 1.0);
    }
    return img;
}

/// Geodesic angle from the chord length, ||A - B||_F = 2 sqrt(2) sin(theta / 2).
inline double
rotation_distance(const Mat3 &a, const Mat3 &b) {
    return 2.0 * std::asin(std::min(1.0, (a - b).norm() / (2.0 * std::sqrt(2.0))));
}

/// Fresh scratch directory under the system temp path.
inline std::filesystem::path
scratch_dir(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("splatpose_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace splatpose::testing
