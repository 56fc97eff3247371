// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/geometry.hpp>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace splatpose {

struct PoseEntry {
    int frame_id = 0;
    CameraPose pose; ///< world-to-camera
};

/// Plain text, one pose per line: frame_id qw qx qy qz tx ty tz.
/// '#' starts a comment line. Numbers are written with 17 significant digits.
void write_pose_file(std::ostream &out, const std::vector<PoseEntry> &poses);
void write_pose_file(const std::filesystem::path &path, const std::vector<PoseEntry> &poses);
std::vector<PoseEntry> read_pose_file(std::istream &in, const std::string &name = "<stream>");
std::vector<PoseEntry> read_pose_file(const std::filesystem::path &path);

} // namespace splatpose
