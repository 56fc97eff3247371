// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/scene.hpp>

#include <filesystem>
#include <iosfwd>

namespace splatpose {

enum class PlyPrecision {
    kFloat64, ///< bit-exact round trip of every parameter
    kFloat32, ///< 3DGS viewer compatible, lossy
};

/// Binary little-endian PLY with vertex properties
/// x y z f_dc_0..2 opacity scale_0..2 rot_0..3.
///
/// Values are the raw optimizer parameters: f_dc_* hold the pre-sigmoid color
/// logits, opacity the opacity logit, scale_* the log-scales, rot_* the
/// unnormalized quaternion (w, x, y, z).
void write_ply(std::ostream &out, const SceneModel &scene,
               PlyPrecision precision = PlyPrecision::kFloat64);
void write_ply(const std::filesystem::path &path, const SceneModel &scene,
               PlyPrecision precision = PlyPrecision::kFloat64);

/// Accepts float or double properties in any order; unknown properties
/// (normals, f_rest_*) are skipped. Throws ParseError.
SceneModel read_ply(std::istream &in, const std::string &name = "<stream>");
SceneModel read_ply(const std::filesystem::path &path);

} // namespace splatpose
