// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <splatpose/checkpoint.hpp>
#include <splatpose/colmap.hpp>
#include <splatpose/config.hpp>
#include <splatpose/error.hpp>
#include <splatpose/evalmetrics.hpp>
#include <splatpose/novel_view.hpp>
#include <splatpose/pose_io.hpp>
#include <splatpose/run_dir.hpp>
#include <splatpose/spectrum.hpp>
#include <splatpose/synth.hpp>
#include <splatpose/trainer.hpp>
#include <splatpose/version.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

namespace splatpose::cli {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path>
list_images(const fs::path &dir) {
    if (!fs::is_directory(dir)) {
        throw ParseError(dir.string(), 0, "images directory not found");
    }
    std::vector<fs::path> out;
    for (const auto &e : fs::directory_iterator(dir)) {
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (e.is_regular_file() && (ext == ".png" || ext == ".jpg" || ext == ".jpeg")) {
            out.push_back(e.path());
        }
    }
    std::sort(out.begin(), out.end());
    if (out.size() < 2) {
        throw ParseError(dir.string(), 0, "need at least 2 images");
    }
    return out;
}

RunConfig
base_config(const std::string &path) {
    RunConfig cfg;
    if (!path.empty()) {
        cfg = load_config(path);
    }
    return cfg;
}

std::vector<PoseEntry>
entries_for(const FrameSet &frames, const std::vector<CameraPose> &poses) {
    std::vector<PoseEntry> out;
    for (std::size_t i = 0; i < frames.frames.size(); ++i) {
        out.push_back({frames.frames[i].id, poses[i]});
    }
    return out;
}

std::vector<CameraPose>
initial_poses(const FrameSet &frames) {
    std::vector<CameraPose> out;
    for (const auto &f : frames.frames) {
        out.push_back(*f.pose);
    }
    return out;
}

} // namespace

int
run_prep(const PrepOptions &opts) {
    RunConfig cfg = base_config(opts.config);
    if (opts.interval_set) {
        cfg.keyframe_interval = opts.interval;
    }
    cfg.validate();
    if (opts.colmap_dir.empty() == opts.pose_file.empty()) {
        throw InvalidInput("give exactly one of --colmap or --poses");
    }
    const std::vector<fs::path> images = list_images(opts.images_dir);
    const std::vector<std::size_t> keys = subsample_keyframes(images.size(), cfg.keyframe_interval);

    FrameSet frames;
    std::map<std::string, CameraPose> by_name;
    std::map<int, CameraPose> by_id;
    std::string pose_source;
    if (!opts.colmap_dir.empty()) {
        ColmapModel model = parse_colmap_text(opts.colmap_dir);
        frames.intrinsics = model.intrinsics;
        frames.points = std::move(model.points);
        frames.colors = std::move(model.colors);
        by_name = std::move(model.poses);
        pose_source = (fs::path(opts.colmap_dir) / "images.txt").string();
    } else {
        if (opts.points_file.empty()) {
            throw InvalidInput("--poses needs --points");
        }
        for (const auto &e : read_pose_file(fs::path(opts.pose_file))) {
            by_id[e.frame_id] = e.pose;
        }
        read_points(opts.points_file, frames.points, frames.colors);
        pose_source = opts.pose_file;
    }

    for (std::size_t i = 0; i < images.size(); ++i) {
        Frame f;
        f.id = static_cast<int>(i);
        f.image_path = fs::absolute(images[i]).string();
        f.is_keyframe = std::binary_search(keys.begin(), keys.end(), i);
        if (f.is_keyframe) {
            if (!opts.colmap_dir.empty()) {
                const auto it = by_name.find(images[i].filename().string());
                if (it == by_name.end()) {
                    throw ParseError(pose_source, 0,
                                     "no pose for keyframe image " + images[i].filename().string());
                }
                f.pose = it->second;
            } else {
                const auto it = by_id.find(f.id);
                if (it == by_id.end()) {
                    throw ParseError(pose_source, 0,
                                     "no pose for keyframe id " + std::to_string(f.id));
                }
                f.pose = it->second;
            }
        }
        frames.frames.push_back(std::move(f));
    }
    const Image first = read_image(images.front());
    if (opts.colmap_dir.empty()) {
        if (opts.intrinsics.size() != 4) {
            throw InvalidInput("--poses needs --intrinsics fx,fy,cx,cy");
        }
        CameraIntrinsics &K = frames.intrinsics;
        K.fx = opts.intrinsics[0];
        K.fy = opts.intrinsics[1];
        K.cx = opts.intrinsics[2];
        K.cy = opts.intrinsics[3];
        K.width = first.width();
        K.height = first.height();
        K.validate();
    }
    if (first.width() != frames.intrinsics.width || first.height() != frames.intrinsics.height) {
        throw ParseError(images.front().string(), 0, "image size does not match the camera");
    }
    frames.validate();
    RunData run;
    run.frames = interpolate_missing(std::move(frames));
    write_run_dir(opts.out, run);
    std::size_t n_keys = 0;
    for (const auto &f : run.frames.frames) {
        n_keys += f.is_keyframe ? 1 : 0;
    }
    std::printf("wrote %s: %zu frames, %zu keyframes, %zu seed points\n", opts.out.c_str(),
                run.frames.frames.size(), n_keys, run.frames.points.size());
    return 0;
}

int
run_train(const TrainOptions &opts) {
    RunConfig cfg = base_config(opts.config);
    if (opts.iters) {
        cfg.train.total_iters = *opts.iters;
    }
    if (opts.seed) {
        cfg.train.seed = *opts.seed;
    }
    if (opts.threads) {
        cfg.train.threads = *opts.threads;
    }
    cfg.train.c2f = cfg.train.c2f && !opts.no_c2f;
    cfg.train.pose_refinement = cfg.train.pose_refinement && !opts.no_pose_refine;
    cfg.densify.use_abs_grad = cfg.densify.use_abs_grad && !opts.no_abs_grad;
    cfg.train.aniso = cfg.train.aniso && !opts.no_aniso;
    cfg.run_dir = opts.run_dir;
    cfg.output = opts.out;
    cfg.validate();

    RunData run = load_run_dir(opts.run_dir);
    if (!run.frames.all_posed()) {
        run.frames = interpolate_missing(std::move(run.frames));
    }
    cfg.train.background = run.background;
    const SceneModel init = init_from_points(run.frames.points, run.frames.colors);

    TrainResult result;
    try {
        result = train(run.frames, init, cfg.train, cfg.schedule, cfg.densify, cfg.loss);
    } catch (const TrainingDiverged &e) {
        const fs::path diag = fs::path(opts.out) / "diverged";
        const TrainResult &s = e.snapshot();
        write_checkpoint(diag, s.scene, entries_for(run.frames, s.poses), cfg, s.metrics);
        std::fprintf(stderr, "error: %s (diagnostic checkpoint in %s)\n", e.what(),
                     diag.string().c_str());
        return 3;
    }
    const std::uint64_t digest = write_checkpoint(
        opts.out, result.scene, entries_for(run.frames, result.poses), cfg, result.metrics);
    std::printf("trained %ld iterations, %zu gaussians, checkpoint %s hash %s\n",
                result.iterations_run, result.scene.size(), opts.out.c_str(),
                hex_digest(digest).c_str());
    if (run.gt && run.gt->size() == result.poses.size()) {
        Trajectory est;
        for (std::size_t i = 0; i < result.poses.size(); ++i) {
            est.ids.push_back(run.frames.frames[i].id);
            est.poses.push_back(result.poses[i]);
        }
        Trajectory init;
        init.ids = est.ids;
        init.poses = initial_poses(run.frames);
        std::printf("rotation error vs gt: initial %.4f deg, final %.4f deg\n",
                    gauge_rotation_error_deg(init.poses, run.gt->poses),
                    gauge_rotation_error_deg(est.poses, run.gt->poses));
    }
    return 0;
}

int
run_eval(const EvalOptions &opts) {
    RunConfig cfg = base_config(opts.config);
    if (opts.threads) {
        cfg.heldout.threads = *opts.threads;
    }
    cfg.validate();

    std::optional<RunData> run;
    if (!opts.run_dir.empty()) {
        run = load_run_dir(opts.run_dir);
    }
    std::optional<Checkpoint> ckpt;
    Trajectory est;
    if (!opts.checkpoint.empty()) {
        ckpt = read_checkpoint(opts.checkpoint);
        est = Trajectory::from_entries(ckpt->poses);
    } else if (!opts.poses.empty()) {
        est = Trajectory::from_entries(read_pose_file(fs::path(opts.poses)));
    } else {
        throw InvalidInput("give --checkpoint or --poses");
    }
    std::optional<Trajectory> gt;
    if (!opts.gt_poses.empty()) {
        gt = Trajectory::from_entries(read_pose_file(fs::path(opts.gt_poses)));
    } else if (run && run->gt) {
        gt = run->gt;
    }

    nlohmann::json report;
    report["build"] = build_identifier();
    if (gt) {
        report["ate"] = ate(est, *gt);
        const RelativePoseError r = rpe(est, *gt, opts.delta);
        report["rpe_t"] = r.translation;
        report["rpe_r"] = r.rotation;
        report["rotation_error_deg"] = gauge_rotation_error_deg(est.poses, gt->poses);
        report["rotation_error_similarity_deg"] = aligned_rotation_error_deg(est, *gt);
    }
    if (ckpt && run) {
        const FrameSet &frames = run->frames;
        std::map<int, CameraPose> poses;
        for (const auto &e : ckpt->poses) {
            poses[e.frame_id] = e.pose;
        }
        double psnr_sum = 0.0;
        double ssim_sum = 0.0;
        std::size_t n = 0;
        for (const Frame &f : frames.frames) {
            const auto it = poses.find(f.id);
            if (it == poses.end()) {
                throw InvalidInput("checkpoint has no pose for frame " + std::to_string(f.id));
            }
            const Image img = render(ckpt->scene, it->second, {}, frames.intrinsics, 0.0,
                                     run->background, {cfg.heldout.threads})
                                  .image;
            psnr_sum += psnr(img, f.image);
            ssim_sum += ssim(img, f.image, cfg.loss);
            ++n;
        }
        report["psnr"] = psnr_sum / static_cast<double>(n);
        report["ssim"] = ssim_sum / static_cast<double>(n);
        if (gt && run->heldout.size() > 0) {
            const HeldoutReport h =
                evaluate_heldout(ckpt->scene, est, *gt, run->heldout, run->heldout_images,
                                 frames.intrinsics, cfg.heldout, run->background);
            report["heldout_psnr"] = h.mean_psnr;
            report["heldout_ssim"] = h.mean_ssim;
        }
    }

    const std::string text = report.dump(2);
    if (!opts.report.empty()) {
        std::ofstream out(opts.report);
        out << text << "\n";
    }
    std::cout << text << "\n";
    if (!opts.csv.empty()) {
        std::ofstream out(opts.csv);
        const char *keys[] = {"psnr",  "ssim",         "ate",         "rpe_t",
                              "rpe_r", "heldout_psnr", "heldout_ssim"};
        std::string header;
        std::string row;
        for (const char *k : keys) {
            if (!header.empty()) {
                header += ",";
                row += ",";
            }
            header += k;
            if (report.contains(k)) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.10g", report[k].get<double>());
                row += buf;
            }
        }
        out << header << "\n" << row << "\n";
    }
    return 0;
}

int
run_spectrum(const SpectrumOptions &opts) {
    using namespace spectrum;
    GaussianMixture1D f;
    if (!opts.mixture.empty()) {
        f = GaussianMixture1D::parse(opts.mixture);
    } else if (opts.preset == "comb") {
        f = high_frequency_comb();
    } else if (opts.preset == "wide") {
        f.components.push_back({1.0, 0.0, 0.3});
    } else {
        throw InvalidInput("unknown preset '" + opts.preset + "' (comb or wide)");
    }
    if (opts.u_steps < 512) {
        throw InvalidInput("--u-steps must be at least 512");
    }
    if (!(opts.u_max > opts.u_min)) {
        throw InvalidInput("--u-max must exceed --u-min");
    }
    std::vector<double> sigmas = opts.sigmas;
    for (const double s : sigmas) {
        if (!(s >= 0.0)) {
            throw InvalidInput("sigmas must be non-negative");
        }
    }
    std::sort(sigmas.begin(), sigmas.end());

    std::ofstream csv;
    std::ostream *out = &std::cout;
    if (!opts.out.empty()) {
        csv.open(opts.out);
        if (!csv) {
            throw ParseError(opts.out, 0, "cannot open for writing");
        }
        out = &csv;
    }
    *out << "u,sigma,grad_spectral,grad_spatial\n";
    char buf[256];
    for (const double s : sigmas) {
        for (int i = 0; i < opts.u_steps; ++i) {
            double u = opts.u_min + (opts.u_max - opts.u_min) * i / (opts.u_steps - 1);
            if (std::abs(u) < 1e-15) {
                u = 0.0;
            }
            const double gs = spectral_alignment_gradient(f, u, s, resolve_grid(f, u, s));
            const double gx = spatial_gradient_oracle(f, u, s);
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.12g,%.12g\n", u, s, gs, gx);
            *out << buf;
        }
    }

    if (!opts.kernel_csv.empty()) {
        std::ofstream k(opts.kernel_csv);
        k << "u,k,sigma,H,H_smoothed\n";
        for (const double s : sigmas) {
            for (int ui = 0; ui <= 20; ++ui) {
                const double u = opts.u_min + (opts.u_max - opts.u_min) * ui / 20.0;
                for (int ki = 0; ki <= 200; ++ki) {
                    const double kk = 0.5 * ki;
                    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.12g,%.12g\n", u, kk, s,
                                  kernel_H(u, kk), smoothed_kernel(u, kk, s));
                    k << buf;
                }
            }
        }
    }

    std::ofstream counts;
    if (!opts.counts_csv.empty()) {
        counts.open(opts.counts_csv);
        counts << "sigma,oscillations\n";
    }
    int previous = std::numeric_limits<int>::max();
    bool monotone = true;
    for (const double s : sigmas) {
        const int c = oscillation_count(f, opts.u_min, opts.u_max, s, opts.u_steps);
        monotone = monotone && c <= previous;
        previous = c;
        std::fprintf(stderr, "sigma %-8g oscillations %d\n", s, c);
        if (counts.is_open()) {
            counts << s << "," << c << "\n";
        }
    }
    std::fprintf(stderr, "oscillation counts %s in sigma\n",
                 monotone ? "non-increasing" : "NOT non-increasing");
    return 0;
}

int
run_synth(const SynthOptions &opts) {
    SynthSpec spec;
    spec.seed = opts.seed;
    spec.n_gaussians = opts.gaussians;
    spec.n_cameras = opts.cameras;
    spec.arc_degrees = opts.arc;
    spec.width = opts.size;
    spec.height = opts.size;
    spec.rotation_noise_deg = opts.rot_noise;
    spec.translation_noise = opts.trans_noise;
    spec.n_heldout = opts.heldout;
    const SynthResult s = generate(spec);

    RunData run;
    run.frames.intrinsics = s.intrinsics;
    for (std::size_t i = 0; i < s.gt.size(); ++i) {
        Frame f;
        f.id = s.gt.ids[i];
        f.image = s.images[i];
        f.pose = s.perturbed.poses[i];
        f.is_keyframe = true;
        run.frames.frames.push_back(std::move(f));
    }
    run.frames.points = s.seed_points;
    run.frames.colors = s.seed_colors;
    run.gt = s.gt;
    run.heldout = s.heldout;
    run.heldout_images = s.heldout_images;
    run.gt_scene = s.gt_scene;
    write_run_dir(opts.out, run);
    std::printf("wrote %s: %zu frames, %zu held-out views, initial rotation error %.4f deg\n",
                opts.out.c_str(), s.gt.size(), s.heldout.size(),
                mean_rotation_error_deg(s.perturbed.poses, s.gt.poses));
    return 0;
}

int
run_render(const RenderOptions &opts) {
    const RunData run = load_run_dir(opts.run_dir, false);
    const Checkpoint ckpt = read_checkpoint(opts.checkpoint);
    if (opts.sigma < 0.0) {
        throw InvalidInput("--sigma must be non-negative");
    }
    fs::create_directories(opts.out);
    const RenderSettings settings{opts.threads.value_or(1)};
    std::size_t written = 0;
    for (const auto &e : ckpt.poses) {
        if (opts.frame && *opts.frame != e.frame_id) {
            continue;
        }
        const Image img = render(ckpt.scene, e.pose, {}, run.frames.intrinsics, opts.sigma,
                                 run.background, settings)
                              .image;
        char name[64];
        std::snprintf(name, sizeof name, "frame_%05d.png", e.frame_id);
        write_png(fs::path(opts.out) / name, img);
        ++written;
    }
    if (written == 0) {
        throw InvalidInput("no matching frame in the checkpoint");
    }
    std::printf("rendered %zu views into %s\n", written, opts.out.c_str());
    return 0;
}

int
run_config_dump() {
    std::cout << RunConfig{}.to_toml();
    return 0;
}

} // namespace splatpose::cli
