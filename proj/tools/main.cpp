// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <splatpose/error.hpp>
#include <splatpose/version.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

} // namespace

int
main(int argc, char **argv) {
    using namespace splatpose::cli;

    CLI::App app{"splatpose: joint Gaussian splatting and camera pose refinement"};
    app.set_version_flag("--version", splatpose::build_identifier());
    app.require_subcommand(1);

    PrepOptions prep;
    auto *prep_cmd = app.add_subcommand("prep", "Build a run directory from SfM output");
    prep_cmd->add_option("--colmap", prep.colmap_dir, "COLMAP text model directory");
    prep_cmd->add_option("--poses", prep.pose_file, "plain-text pose file instead of COLMAP");
    prep_cmd->add_option("--points", prep.points_file, "seed points (x y z r g b) for --poses");
    prep_cmd->add_option("--intrinsics", prep.intrinsics, "fx,fy,cx,cy for --poses")
        ->delimiter(',')
        ->expected(4);
    prep_cmd->add_option("--images", prep.images_dir, "image directory")->required();
    prep_cmd->add_option("--out", prep.out, "run directory to write")->required();
    auto *interval = prep_cmd->add_option("--interval,-N", prep.interval, "keyframe interval");
    prep_cmd->add_option("--config", prep.config, "TOML configuration file");
    std::uint64_t unused_seed = 0;
    prep_cmd->add_option("--seed", unused_seed, "accepted for uniformity; prep is deterministic");

    TrainOptions train;
    auto *train_cmd = app.add_subcommand("train", "Jointly optimize Gaussians and poses");
    train_cmd->add_option("run_dir", train.run_dir, "run directory")->required();
    train_cmd->add_option("--out", train.out, "checkpoint directory")->required();
    train_cmd->add_option("--config", train.config, "TOML configuration file");
    train_cmd->add_option("--iters", train.iters, "total iterations");
    train_cmd->add_option("--seed", train.seed, "random seed");
    train_cmd->add_option("--threads", train.threads, "worker threads");
    train_cmd->add_flag("--no-c2f", train.no_c2f, "disable the coarse-to-fine blur schedule");
    train_cmd->add_flag("--no-pose-refine", train.no_pose_refine, "keep the initial poses fixed");
    train_cmd->add_flag("--no-abs-grad", train.no_abs_grad, "densify on the plain gradient");
    train_cmd->add_flag("--no-aniso", train.no_aniso, "disable anisotropy regularization");

    EvalOptions eval;
    auto *eval_cmd = app.add_subcommand("eval", "Trajectory and image metrics");
    eval_cmd->add_option("--checkpoint", eval.checkpoint, "checkpoint directory");
    eval_cmd->add_option("--run", eval.run_dir, "run directory with images (and gt)");
    eval_cmd->add_option("--poses", eval.poses, "estimated pose file instead of a checkpoint");
    eval_cmd->add_option("--gt-poses", eval.gt_poses, "ground-truth pose file");
    eval_cmd->add_option("--report", eval.report, "write the JSON report here");
    eval_cmd->add_option("--csv", eval.csv, "write a one-row CSV report here");
    eval_cmd->add_option("--delta", eval.delta, "RPE frame step")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--config", eval.config, "TOML configuration file");
    eval_cmd->add_option("--threads", eval.threads, "worker threads");
    eval_cmd->add_option("--seed", eval.seed, "accepted for uniformity; eval is deterministic");

    SpectrumOptions spec;
    auto *spec_cmd = app.add_subcommand("spectrum", "1D alignment-gradient sweeps as CSV");
    spec_cmd->add_option("--mixture", spec.mixture, "components a:m:s separated by commas");
    spec_cmd->add_option("--preset", spec.preset, "comb or wide");
    spec_cmd->add_option("--u-min", spec.u_min, "smallest offset");
    spec_cmd->add_option("--u-max", spec.u_max, "largest offset");
    spec_cmd->add_option("--u-steps", spec.u_steps, "offsets per sweep (>= 512)");
    spec_cmd->add_option("--sigmas", spec.sigmas, "blur values")->delimiter(',');
    spec_cmd->add_option("--out", spec.out, "gradient CSV (stdout if omitted)");
    spec_cmd->add_option("--kernel-csv", spec.kernel_csv, "kernel samples CSV");
    spec_cmd->add_option("--counts-csv", spec.counts_csv, "oscillation counts CSV");
    spec_cmd->add_option("--seed", spec.seed, "accepted for uniformity; sweeps are deterministic");

    SynthOptions synth;
    auto *synth_cmd = app.add_subcommand("synth", "Write a synthetic run directory");
    synth_cmd->add_option("--out", synth.out, "run directory to write")->required();
    synth_cmd->add_option("--seed", synth.seed, "random seed");
    synth_cmd->add_option("--gaussians", synth.gaussians, "scene size");
    synth_cmd->add_option("--cameras", synth.cameras, "training cameras");
    synth_cmd->add_option("--arc", synth.arc, "camera arc, degrees");
    synth_cmd->add_option("--size", synth.size, "image width and height, pixels");
    synth_cmd->add_option("--rot-noise", synth.rot_noise, "rotation noise, degrees");
    synth_cmd->add_option("--trans-noise", synth.trans_noise, "translation noise, scene radii");
    synth_cmd->add_option("--heldout", synth.heldout, "held-out views");

    RenderOptions rend;
    auto *render_cmd = app.add_subcommand("render", "Render checkpoint views to PNG");
    render_cmd->add_option("--checkpoint", rend.checkpoint, "checkpoint directory")->required();
    render_cmd->add_option("--run", rend.run_dir, "run directory (for intrinsics)")->required();
    render_cmd->add_option("--out", rend.out, "output directory")->required();
    render_cmd->add_option("--frame", rend.frame, "render only this frame id");
    render_cmd->add_option("--sigma", rend.sigma, "screen-space blur, pixels");
    render_cmd->add_option("--threads", rend.threads, "worker threads");
    render_cmd->add_option("--seed", rend.seed, "accepted for uniformity; rendering is deterministic");

    auto *config_cmd = app.add_subcommand("config", "Print the default configuration as TOML");
    config_cmd->add_option("--seed", unused_seed, "accepted for uniformity; the dump is fixed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (prep_cmd->parsed()) {
            prep.interval_set = interval->count() > 0;
            return run_prep(prep);
        }
        if (train_cmd->parsed()) {
            return run_train(train);
        }
        if (eval_cmd->parsed()) {
            return run_eval(eval);
        }
        if (spec_cmd->parsed()) {
            return run_spectrum(spec);
        }
        if (synth_cmd->parsed()) {
            return run_synth(synth);
        }
        if (render_cmd->parsed()) {
            return run_render(rend);
        }
        if (config_cmd->parsed()) {
            return run_config_dump();
        }
    } catch (const splatpose::ParseError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const splatpose::InvalidInput &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const splatpose::PreconditionError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
