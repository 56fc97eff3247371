// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/evalmetrics.hpp>
#include <splatpose/image.hpp>
#include <splatpose/rasterizer.hpp>
#include <splatpose/scene.hpp>

#include <cstdint>
#include <vector>

namespace splatpose {

struct SynthSpec {
    std::uint64_t seed = 1;
    int n_gaussians = 50;
    double scene_radius = 1.0;
    int n_cameras = 12;
    double arc_degrees = 60.0;
    double elevation_degrees = 15.0;
    double camera_distance = 3.0; ///< times scene_radius
    int width = 64;
    int height = 64;
    double fov_degrees = 60.0; ///< horizontal
    double rotation_noise_deg = 2.0;
    double translation_noise = 0.02; ///< fraction of scene_radius
    int n_heldout = 3;
    double seed_jitter = 0.02; ///< seed point jitter, fraction of scene_radius

    /// Throws InvalidInput on non-positive sizes or an arc of 360 degrees or more.
    void validate() const;
    CameraIntrinsics intrinsics() const;
};

struct SynthResult {
    SceneModel gt_scene;
    CameraIntrinsics intrinsics;
    Trajectory gt;        ///< training cameras
    Trajectory perturbed; ///< gt with sampled pose noise
    std::vector<PoseDelta> noise;
    std::vector<Image> images;
    Trajectory heldout;   ///< cameras half way between training cameras
    std::vector<Image> heldout_images;
    std::vector<Vec3> seed_points;
    std::vector<Vec3> seed_colors;
};

/// World-to-camera pose at eye looking at target, +y up in the world. Camera
/// axes: x right, y down, z forward.
CameraPose look_at(const Vec3 &eye, const Vec3 &target, const Vec3 &up = Vec3::UnitY());

/// Camera on the arc at azimuth phi (radians) around +y.
CameraPose arc_camera(const SynthSpec &spec, double azimuth);

/// Deterministic for a given spec. Rotation noise is drawn per axis with
/// standard deviation rotation_noise_deg / sqrt(3), so its RMS angle equals
/// rotation_noise_deg; translation noise likewise.
SynthResult generate(const SynthSpec &spec);

} // namespace splatpose
