// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/geometry.hpp>
#include <splatpose/image.hpp>
#include <splatpose/rasterizer.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace splatpose {

struct Frame {
    int id = 0;
    std::string image_path;
    Image image; ///< may stay empty until loaded
    std::optional<CameraPose> pose;
    bool is_keyframe = false;
};

/// An ordered image sequence with shared pinhole intrinsics and a seed cloud.
struct FrameSet {
    std::vector<Frame> frames;
    CameraIntrinsics intrinsics;
    std::vector<Vec3> points;
    std::vector<Vec3> colors; ///< RGB in [0, 1], one per point

    /// Throws InvalidInput if ids are not strictly increasing or the seed
    /// cloud is inconsistent.
    void validate() const;
    bool all_posed() const;
};

inline constexpr std::size_t kDefaultKeyframeInterval = 5;

/// {0, N, 2N, ...} plus the last index. Throws InvalidInput when n_frames < 2
/// or interval < 1.
std::vector<std::size_t> subsample_keyframes(std::size_t n_frames, std::size_t interval);

/// Fills the pose of every non-keyframe by interpolating between the
/// surrounding keyframes (slerp + lerp in index space). Frames before the
/// first or after the last keyframe take the nearest keyframe pose. Throws
/// InvalidInput when there is no keyframe or a keyframe lacks a pose.
FrameSet interpolate_missing(FrameSet frames);

} // namespace splatpose
