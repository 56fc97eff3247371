// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/config.hpp>
#include <splatpose/trainer.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace splatpose {

/// Files of a checkpoint directory.
inline constexpr const char *kCheckpointScene = "scene.ply";
inline constexpr const char *kCheckpointPoses = "poses.txt";
inline constexpr const char *kCheckpointConfig = "config.toml";
inline constexpr const char *kCheckpointMetrics = "metrics.csv";
inline constexpr const char *kCheckpointVersion = "version.txt";
inline constexpr const char *kCheckpointHash = "checkpoint.hash";

struct Checkpoint {
    SceneModel scene;
    std::vector<PoseEntry> poses; ///< refined world-to-camera
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const void *data, std::size_t size,
                    std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Writes scene.ply, poses.txt, config.toml, metrics.csv and version.txt,
/// then checkpoint.hash: the FNV-1a digest of scene.ply followed by
/// poses.txt, as 16 hex digits. Returns the digest.
std::uint64_t write_checkpoint(const std::filesystem::path &dir, const SceneModel &scene,
                               const std::vector<PoseEntry> &poses, const RunConfig &config,
                               const std::vector<MetricsRow> &metrics);

Checkpoint read_checkpoint(const std::filesystem::path &dir);

/// Recomputes the digest of the scene and pose files in dir.
std::uint64_t checkpoint_digest(const std::filesystem::path &dir);

std::string hex_digest(std::uint64_t digest);

void write_metrics_csv(std::ostream &out, const std::vector<MetricsRow> &rows);

} // namespace splatpose
