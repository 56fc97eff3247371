// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <splatpose/error.hpp>
#include <splatpose/synth.hpp>
#include <splatpose/trainer.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace splatpose;

namespace {

struct Problem {
    FrameSet frames;
    SceneModel init;
    SynthResult synth;
};

Problem
small_problem(std::uint64_t seed = 3) {
    SynthSpec spec;
    spec.seed = seed;
    spec.n_gaussians = 12;
    spec.n_cameras = 5;
    spec.width = spec.height = 24;
    spec.n_heldout = 1;
    Problem p;
    p.synth = generate(spec);
    p.frames.intrinsics = p.synth.intrinsics;
    for (std::size_t i = 0; i < p.synth.images.size(); ++i) {
        Frame f;
        f.id = static_cast<int>(i);
        f.is_keyframe = true;
        f.pose = p.synth.perturbed.poses[i];
        f.image = p.synth.images[i];
        p.frames.frames.push_back(f);
    }
    p.init = init_from_points(p.synth.seed_points, p.synth.seed_colors);
    return p;
}

TrainConfig
short_config(long iters) {
    TrainConfig cfg;
    cfg.total_iters = iters;
    cfg.seed = 11;
    cfg.log_interval = 10;
    return cfg;
}

DensifyConfig
early_densify() {
    DensifyConfig d;
    d.start = 20;
    d.interval = 20;
    d.opacity_reset_interval = 60;
    return d;
}

bool
same_scene(const SceneModel &a, const SceneModel &b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].position != b[i].position || a[i].rotation != b[i].rotation ||
            a[i].log_scales != b[i].log_scales || a[i].opacity_logit != b[i].opacity_logit ||
            a[i].color_logits != b[i].color_logits) {
            return false;
        }
    }
    return true;
}

GaussianPrimitive
primitive(double scale, double opacity) {
    GaussianPrimitive g;
    g.log_scales = Vec3::Constant(std::log(scale));
    g.opacity_logit = std::log(opacity / (1.0 - opacity));
    return g;
}

void
observe(SceneModel &s, std::size_t i, double abs_per_view, int views) {
    s.stats()[i].count = views;
    s.stats()[i].abs_sum = Vec2(abs_per_view * views, 0.0);
    s.stats()[i].norm_sum = abs_per_view * views;
}

} // namespace

TEST(FilterSchedule, WorkedExamples) {
    const FilterSchedule s;
    EXPECT_EQ(filter_sigma(0, s, 7000), 8.0);
    EXPECT_NEAR(filter_sigma(2450, s, 7000), 2.0, 1e-12);
    EXPECT_EQ(filter_sigma(4900, s, 7000), 0.0);
    EXPECT_EQ(filter_sigma(6999, s, 7000), 0.0);
}

TEST(FilterSchedule, NonIncreasingAndNonNegative) {
    splatpose::testing::Gen gen(1);
    for (int trial = 0; trial < 20; ++trial) {
        FilterSchedule s;
        s.sigma_max = gen.uniform(0.0, 20.0);
        s.end_fraction = gen.uniform(0.05, 1.0);
        const long total = gen.integer(10, 5000);
        double last = std::numeric_limits<double>::infinity();
        for (long i = 0; i <= total; ++i) {
            const double v = filter_sigma(i, s, total);
            EXPECT_LE(v, last);
            EXPECT_GE(v, 0.0);
            last = v;
        }
    }
}

TEST(Densify, BelowThresholdOnlyCulls) {
    SceneModel s({primitive(0.5, 0.5), primitive(0.5, 0.001), primitive(0.01, 0.9)});
    observe(s, 0, 1e-5, 4);
    observe(s, 2, 7e-4, 4);
    std::mt19937_64 rng(1);
    const DensifyReport r = densify_and_prune(s, DensifyConfig{}, 600, 1.0, rng);
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(r.pruned, 1u);
    EXPECT_EQ(r.split + r.cloned, 0u);
    EXPECT_EQ(r.origin, (std::vector<std::ptrdiff_t>{0, 2}));
    EXPECT_EQ(s.stats()[1].count, 0);
}

TEST(Densify, LargeGaussianSplitsIntoTwoSmallerChildren) {
    GaussianPrimitive g = primitive(0.2, 0.7);
    g.position = Vec3(1, 2, 3);
    SceneModel s({g});
    observe(s, 0, 0.002, 3);
    std::mt19937_64 rng(2);
    const DensifyReport r = densify_and_prune(s, DensifyConfig{}, 600, 1.0, rng);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(r.split, 1u);
    EXPECT_EQ(r.origin, (std::vector<std::ptrdiff_t>{-1, -1}));
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(s[i].scales().x(), 0.2 / 1.6, 1e-15);
        EXPECT_EQ(s[i].opacity_logit, g.opacity_logit);
        EXPECT_NE(s[i].position, g.position);
        EXPECT_LT((s[i].position - g.position).norm(), 0.2 * 6.0);
    }
}

TEST(Densify, SmallGaussianIsCloned) {
    SceneModel s({primitive(0.005, 0.7)});
    observe(s, 0, 0.001, 2);
    std::mt19937_64 rng(3);
    const DensifyReport r = densify_and_prune(s, DensifyConfig{}, 600, 1.0, rng);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(r.cloned, 1u);
    EXPECT_EQ(s[1].position, s[0].position);
    EXPECT_EQ(r.origin, (std::vector<std::ptrdiff_t>{0, -1}));
}

TEST(Densify, PlainGradientStatisticWhenRequested) {
    SceneModel s({primitive(0.005, 0.7)});
    s.stats()[0].count = 2;
    s.stats()[0].abs_sum = Vec2(1.0, 1.0);
    s.stats()[0].norm_sum = 1e-4;
    DensifyConfig cfg;
    cfg.use_abs_grad = false;
    std::mt19937_64 rng(4);
    densify_and_prune(s, cfg, 600, 1.0, rng);
    EXPECT_EQ(s.size(), 1u);
}

TEST(Densify, CapacityIsRespectedInGradientOrder) {
    SceneModel s({primitive(0.005, 0.7), primitive(0.005, 0.7), primitive(0.005, 0.7)});
    observe(s, 0, 0.001, 1);
    observe(s, 1, 0.003, 1);
    observe(s, 2, 0.002, 1);
    DensifyConfig cfg;
    cfg.max_gaussians = 4;
    std::mt19937_64 rng(5);
    const DensifyReport r = densify_and_prune(s, cfg, 600, 1.0, rng);
    EXPECT_EQ(s.size(), 4u);
    EXPECT_EQ(r.skipped_for_capacity, 2u);
    EXPECT_EQ(s[3].position, s[1].position);
}

TEST(Train, ZeroIterationsReturnsTheInitialState) {
    const Problem p = small_problem();
    const TrainResult r =
        train(p.frames, p.init, short_config(0), FilterSchedule{}, DensifyConfig{}, LossConfig{});
    EXPECT_TRUE(same_scene(r.scene, p.init));
    EXPECT_EQ(r.iterations_run, 0);
    for (std::size_t i = 0; i < r.poses.size(); ++i) {
        EXPECT_EQ(r.poses[i], *p.frames.frames[i].pose);
    }
}

TEST(Train, FixedPosesLeaveDeltasAtZero) {
    const Problem p = small_problem();
    TrainConfig cfg = short_config(40);
    cfg.pose_refinement = false;
    const TrainResult r = train(p.frames, p.init, cfg, FilterSchedule{}, early_densify(), LossConfig{});
    for (const PoseDelta &d : r.deltas) {
        EXPECT_EQ(d.omega, Vec3::Zero());
        EXPECT_EQ(d.tau, Vec3::Zero());
    }
    EXPECT_FALSE(same_scene(r.scene, p.init));
}

TEST(Train, ImprovesTheFit) {
    const Problem p = small_problem();
    const TrainResult r =
        train(p.frames, p.init, short_config(300), FilterSchedule{}, early_densify(), LossConfig{});
    ASSERT_GE(r.metrics.size(), 2u);
    EXPECT_EQ(r.metrics.size(), 30u);
    EXPECT_EQ(r.metrics.back().iter, 300);
    EXPECT_LT(r.metrics.back().loss, r.metrics.front().loss);
    EXPECT_EQ(r.metrics.front().sigma, filter_sigma(9, FilterSchedule{}, 300));
    EXPECT_FALSE(r.densify_log.empty());
}

TEST(Train, DeterministicAcrossRunsAndThreadCounts) {
    const Problem p = small_problem();
    TrainConfig cfg = short_config(80);
    const TrainResult a = train(p.frames, p.init, cfg, FilterSchedule{}, early_densify(), LossConfig{});
    const TrainResult b = train(p.frames, p.init, cfg, FilterSchedule{}, early_densify(), LossConfig{});
    cfg.threads = 4;
    const TrainResult c = train(p.frames, p.init, cfg, FilterSchedule{}, early_densify(), LossConfig{});
    EXPECT_TRUE(same_scene(a.scene, b.scene));
    EXPECT_TRUE(same_scene(a.scene, c.scene));
    for (std::size_t i = 0; i < a.poses.size(); ++i) {
        EXPECT_EQ(a.poses[i], b.poses[i]);
        EXPECT_EQ(a.poses[i], c.poses[i]);
    }
    cfg.seed = 12;
    const TrainResult d = train(p.frames, p.init, cfg, FilterSchedule{}, early_densify(), LossConfig{});
    EXPECT_FALSE(same_scene(a.scene, d.scene));
}

TEST(Train, NonFiniteLossAbortsWithSnapshot) {
    Problem p = small_problem();
    for (auto &f : p.frames.frames) {
        f.image.data()[0] = std::numeric_limits<double>::quiet_NaN();
    }
    try {
        train(p.frames, p.init, short_config(10), FilterSchedule{}, DensifyConfig{}, LossConfig{});
        FAIL();
    } catch (const TrainingDiverged &e) {
        EXPECT_EQ(e.snapshot().iterations_run, 0);
        EXPECT_EQ(e.snapshot().poses.size(), p.frames.frames.size());
    }
}

TEST(Train, RejectsInvalidInput) {
    Problem p = small_problem();
    TrainConfig cfg = short_config(-1);
    EXPECT_THROW(train(p.frames, p.init, cfg, {}, {}, {}), InvalidInput);
    p.frames.frames[1].pose.reset();
    EXPECT_THROW(train(p.frames, p.init, short_config(1), {}, {}, {}), InvalidInput);
    p = small_problem();
    p.frames.frames[0].image = Image(5, 5);
    EXPECT_THROW(train(p.frames, p.init, short_config(1), {}, {}, {}), InvalidInput);
}

TEST(SceneExtent, IsScaledMaxDistanceFromMean) {
    std::vector<CameraPose> poses(3);
    poses[0].translation = Vec3(-1, 0, 0);
    poses[1].translation = Vec3(1, 0, 0);
    poses[2].translation = Vec3(0, 0, 0);
    EXPECT_NEAR(scene_extent(poses), 1.1, 1e-15);
}
