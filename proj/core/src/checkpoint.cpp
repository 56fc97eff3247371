// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/checkpoint.hpp>
#include <splatpose/error.hpp>
#include <splatpose/ply.hpp>
#include <splatpose/pose_io.hpp>
#include <splatpose/version.hpp>

#include <cstdio>
#include <fstream>
#include <iterator>

namespace splatpose {

namespace fs = std::filesystem;

std::uint64_t
fnv1a(const void *data, std::size_t size, std::uint64_t seed) {
    const auto *bytes = static_cast<const unsigned char *>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string
hex_digest(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

void
write_metrics_csv(std::ostream &out, const std::vector<MetricsRow> &rows) {
    out << "iter,loss,l1,dssim,aniso,sigma,n_gaussians,psnr_train\n";
    char buf[512];
    for (const auto &r : rows) {
        std::snprintf(buf, sizeof buf, "%ld,%.10g,%.10g,%.10g,%.10g,%.10g,%zu,%.10g\n", r.iter,
                      r.loss, r.l1, r.dssim, r.aniso, r.sigma, r.n_gaussians, r.psnr_train);
        out << buf;
    }
}

namespace {

std::string
slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream
open_out(const fs::path &path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) {
        throw ParseError(path.string(), 0, "cannot open for writing");
    }
    return out;
}

} // namespace

std::uint64_t
checkpoint_digest(const fs::path &dir) {
    const std::string scene = slurp(dir / kCheckpointScene);
    const std::string poses = slurp(dir / kCheckpointPoses);
    return fnv1a(poses.data(), poses.size(), fnv1a(scene.data(), scene.size()));
}

std::uint64_t
write_checkpoint(const fs::path &dir, const SceneModel &scene, const std::vector<PoseEntry> &poses,
                 const RunConfig &config, const std::vector<MetricsRow> &metrics) {
    fs::create_directories(dir);
    write_ply(dir / kCheckpointScene, scene);
    write_pose_file(dir / kCheckpointPoses, poses);
    {
        auto out = open_out(dir / kCheckpointConfig);
        out << "# " << build_identifier() << "\n" << config.to_toml();
    }
    {
        auto out = open_out(dir / kCheckpointMetrics);
        write_metrics_csv(out, metrics);
    }
    {
        auto out = open_out(dir / kCheckpointVersion);
        out << build_identifier() << "\n";
    }
    const std::uint64_t digest = checkpoint_digest(dir);
    auto out = open_out(dir / kCheckpointHash);
    out << hex_digest(digest) << "\n";
    return digest;
}

Checkpoint
read_checkpoint(const fs::path &dir) {
    Checkpoint c;
    c.scene = read_ply(dir / kCheckpointScene);
    c.poses = read_pose_file(dir / kCheckpointPoses);
    return c;
}

} // namespace splatpose
