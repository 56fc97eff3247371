// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/evalmetrics.hpp>

// Hand-built three-pose trajectories. The expected values were computed
// offline with Horn's quaternion alignment, confirmed by direct numerical
// minimization over the seven similarity parameters, and relative errors
// were formed with homogeneous 4x4 matrices.
namespace splatpose::testing {

inline CameraPose
pose_at(const Vec3 &rotvec, const Vec3 &center) {
    const Mat3 r = exp_so3(rotvec);
    return {r, -(r * center)};
}

struct MetricsFixture {
    Trajectory est;
    Trajectory gt;
    double ate = 0.0;
    double rpe_t = 0.0;
    double rpe_r = 0.0;
};

inline MetricsFixture
metrics_fixture_a() {
    MetricsFixture f;
    f.gt.ids = f.est.ids = {1, 2, 3};
    f.gt.poses = {pose_at({0, 0, 0}, {0, 0, 0}), pose_at({0, 0.3, 0}, {1, 0, 0}),
                  pose_at({0.1, 0.5, 0}, {1, 1, 0})};
    f.est.poses = {pose_at({0.02, 0, 0}, {0, 0, 0.1}), pose_at({0, 0.32, 0.01}, {1.1, 0, 0}),
                   pose_at({0.1, 0.45, 0.03}, {0.9, 1.2, 0})};
    f.ate = 0.05727432761928854;
    f.rpe_t = 15.704100048815423;
    f.rpe_r = 3.173368141075047;
    return f;
}

inline MetricsFixture
metrics_fixture_b() {
    MetricsFixture f;
    f.gt.ids = f.est.ids = {10, 11, 12};
    f.gt.poses = {pose_at({0.2, -0.1, 0.05}, {2, 0, 1}), pose_at({0.25, 0.4, 0}, {0, 1, 3}),
                  pose_at({-0.3, 0.2, 0.6}, {-1, -2, 0.5})};
    f.est.poses = {pose_at({0.3, -0.2, 0.0}, {2.5, 0.3, 1}),
                   pose_at({0.2, 0.5, -0.1}, {0.2, 1.4, 2.1}),
                   pose_at({-0.2, 0.1, 0.7}, {-1.4, -1.5, 0.2})};
    f.ate = 0.3722929811803333;
    f.rpe_t = 127.14793936613819;
    f.rpe_r = 15.996232168284651;
    return f;
}

/// est moved into another frame by a fixed similarity.
inline Trajectory
similarity_copy(const Trajectory &t, const Similarity &sim) {
    Trajectory out = t;
    for (auto &p : out.poses) {
        p = sim.apply(p);
    }
    return out;
}

} // namespace splatpose::testing
