// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/evalmetrics.hpp>
#include <splatpose/keyframes.hpp>
#include <splatpose/scene.hpp>

#include <filesystem>
#include <optional>

namespace splatpose {

/// A self-contained training input:
///
///   run.json          intrinsics, frame list, file names below
///   images/           one PNG per frame (and per held-out view)
///   poses.txt         initial world-to-camera poses
///   points.txt        seed cloud, "x y z r g b" with colors in [0, 1]
///   gt_poses.txt      optional ground truth for the training frames
///   heldout_poses.txt optional ground truth for held-out views
///   gt_scene.ply      optional ground-truth scene
struct RunData {
    FrameSet frames;
    std::optional<Trajectory> gt;
    Trajectory heldout;
    std::vector<Image> heldout_images;
    std::optional<SceneModel> gt_scene;
    Vec3 background = Vec3::Zero();
};

inline constexpr int kRunFormatVersion = 1;

/// Writes images as 8-bit PNG. Creates the directory if needed.
void write_run_dir(const std::filesystem::path &dir, const RunData &run);

/// Throws ParseError naming the offending file.
RunData load_run_dir(const std::filesystem::path &dir, bool load_images = true);

void write_points(const std::filesystem::path &path, const std::vector<Vec3> &points,
                  const std::vector<Vec3> &colors);
void read_points(const std::filesystem::path &path, std::vector<Vec3> &points,
                 std::vector<Vec3> &colors);

} // namespace splatpose
