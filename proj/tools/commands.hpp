// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace splatpose::cli {

struct PrepOptions {
    std::string colmap_dir;
    std::string pose_file;
    std::string points_file;
    std::vector<double> intrinsics; ///< fx, fy, cx, cy for pose-file input
    std::string images_dir;
    std::string out;
    std::size_t interval = 5;
    bool interval_set = false;
    std::string config;
};

struct TrainOptions {
    std::string run_dir;
    std::string out;
    std::string config;
    std::optional<long> iters;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool no_c2f = false;
    bool no_pose_refine = false;
    bool no_abs_grad = false;
    bool no_aniso = false;
};

struct EvalOptions {
    std::string checkpoint;
    std::string run_dir;
    std::string poses;
    std::string gt_poses;
    std::string report;
    std::string csv;
    int delta = 1;
    std::string config;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
};

struct SpectrumOptions {
    std::string mixture;
    std::string preset = "comb";
    double u_min = -0.5;
    double u_max = 0.5;
    int u_steps = 513;
    std::vector<double> sigmas{0.0, 0.005, 0.01, 0.02, 0.05, 0.1};
    std::string out;
    std::string kernel_csv;
    std::string counts_csv;
    std::optional<std::uint64_t> seed;
};

struct SynthOptions {
    std::string out;
    std::uint64_t seed = 1;
    int gaussians = 50;
    int cameras = 12;
    double arc = 60.0;
    int size = 64;
    double rot_noise = 2.0;
    double trans_noise = 0.02;
    int heldout = 3;
};

struct RenderOptions {
    std::string checkpoint;
    std::string run_dir;
    std::string out;
    std::optional<int> frame;
    double sigma = 0.0;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
};

int run_prep(const PrepOptions &opts);
int run_train(const TrainOptions &opts);
int run_eval(const EvalOptions &opts);
int run_spectrum(const SpectrumOptions &opts);
int run_synth(const SynthOptions &opts);
int run_render(const RenderOptions &opts);
int run_config_dump();

} // namespace splatpose::cli
