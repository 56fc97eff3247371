// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/geometry.hpp>
#include <splatpose/rasterizer.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace splatpose {

/// Contents of a COLMAP text model (cameras.txt, images.txt, points3D.txt).
struct ColmapModel {
    std::map<std::string, CameraPose> poses; ///< world-to-camera, by image name
    CameraIntrinsics intrinsics;
    std::vector<Vec3> points;
    std::vector<Vec3> colors; ///< RGB in [0, 1]
};

/// Only PINHOLE and SIMPLE_PINHOLE cameras are accepted, and every image must
/// use the same intrinsics. Throws ParseError naming the file and line.
ColmapModel parse_colmap_text(const std::filesystem::path &dir);

} // namespace splatpose
