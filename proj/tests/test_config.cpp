// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <splatpose/config.hpp>
#include <splatpose/error.hpp>
#include <splatpose/toml_lite.hpp>

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace splatpose;
using splatpose::testing::Gen;

namespace {

toml::Document
parse(const std::string &text) {
    std::stringstream in(text);
    return toml::parse(in, "test.toml");
}

int
error_line(const std::string &text) {
    try {
        RunConfig c;
        c.apply(parse(text));
    } catch (const ParseError &e) {
        EXPECT_EQ(e.file(), "test.toml");
        return e.line();
    }
    return -1;
}

} // namespace

TEST(Toml, ParsesScalarsTablesAndArrays) {
    const toml::Document d = parse("# top\nname = \"a \\\"b\\\"\"\n[t]\nflag = true\n"
                                   "n = -42  # trailing\nx = 1.5e-3\nv = [1, 2.5, -3]\n");
    EXPECT_EQ(std::get<std::string>(d.entries.at("name").value), "a \"b\"");
    EXPECT_EQ(std::get<bool>(d.entries.at("t.flag").value), true);
    EXPECT_EQ(std::get<long long>(d.entries.at("t.n").value), -42);
    EXPECT_EQ(std::get<double>(d.entries.at("t.x").value), 1.5e-3);
    EXPECT_EQ(std::get<std::vector<double>>(d.entries.at("t.v").value),
              (std::vector<double>{1, 2.5, -3}));
    EXPECT_EQ(d.entries.at("t.n").line, 5);
}

TEST(Toml, SyntaxErrorsCarryTheLine) {
    auto line_of = [](const std::string &text) {
        try {
            parse(text);
        } catch (const ParseError &e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("a = 1\nb = \n"), 2);
    EXPECT_EQ(line_of("a = 1\na = 2\n"), 2);
    EXPECT_EQ(line_of("[t\n"), 1);
    EXPECT_EQ(line_of("a = \"open\n"), 1);
    EXPECT_EQ(line_of("a = [1, 2\n"), 1);
    EXPECT_EQ(line_of("a = 1 2\n"), 1);
    EXPECT_EQ(line_of("\n\na = 1x\n"), 3);
}

TEST(RunConfig, DefaultsAreValidAndDocumented) {
    const RunConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.train.total_iters, 7000);
    EXPECT_EQ(c.keyframe_interval, 5u);
    EXPECT_EQ(c.schedule.sigma_max, 8.0);
    std::set<std::string> keys;
    for (const auto &k : RunConfig::describe()) {
        EXPECT_FALSE(k.doc.empty()) << k.key;
        EXPECT_TRUE(keys.insert(k.key).second) << k.key;
    }
    const std::string text = c.to_toml();
    for (const auto &k : keys) {
        const std::string bare = k.substr(k.find('.') + 1);
        EXPECT_NE(text.find("\n" + bare + " = "), std::string::npos) << k;
    }
}

TEST(RunConfig, ApplyOverridesOnlyGivenKeys) {
    RunConfig c;
    c.apply(parse("[train]\ntotal_iters = 300\nc2f = false\nbackground = [1, 0.5, 0]\n"
                  "[densify]\nopacity_cull = 0.01\n[keyframes]\ninterval = 3\n"));
    EXPECT_EQ(c.train.total_iters, 300);
    EXPECT_FALSE(c.train.c2f);
    EXPECT_EQ(c.train.background, Vec3(1, 0.5, 0));
    EXPECT_EQ(c.densify.opacity_cull, 0.01);
    EXPECT_EQ(c.keyframe_interval, 3u);
    EXPECT_EQ(c.train.lr_scales, RunConfig{}.train.lr_scales);
}

TEST(RunConfig, IntegersAreAcceptedForRealKeys) {
    RunConfig c;
    c.apply(parse("[schedule]\nsigma_max = 4\n"));
    EXPECT_EQ(c.schedule.sigma_max, 4.0);
}

TEST(RunConfig, RejectsUnknownAndIllTypedKeys) {
    EXPECT_EQ(error_line("[train]\ntotal_iter = 5\n"), 2);
    EXPECT_EQ(error_line("\n[nope]\nx = 1\n"), 3);
    EXPECT_EQ(error_line("[train]\nc2f = 1\n"), 2);
    EXPECT_EQ(error_line("[train]\ntotal_iters = 1.5\n"), 2);
    EXPECT_EQ(error_line("[train]\nseed = -1\n"), 2);
    EXPECT_EQ(error_line("[train]\nbackground = [1, 2]\n"), 2);
    EXPECT_EQ(error_line("[paths]\nrun_dir = 4\n"), 2);
    EXPECT_EQ(error_line("total_iters = 4\n"), 1);
}

TEST(RunConfig, ValidateRejectsBadValues) {
    RunConfig c;
    c.keyframe_interval = 0;
    EXPECT_THROW(c.validate(), InvalidInput);
    c = RunConfig{};
    c.schedule.end_fraction = 0.0;
    EXPECT_THROW(c.validate(), InvalidInput);
    c = RunConfig{};
    c.train.total_iters = -1;
    EXPECT_THROW(c.validate(), InvalidInput);
    c = RunConfig{};
    c.loss.ssim_window = 4;
    EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(RunConfig, SnapshotRoundTripsRandomConfigs) {
    Gen gen(1);
    for (int trial = 0; trial < 25; ++trial) {
        RunConfig c;
        c.train.total_iters = gen.integer(0, 20000);
        c.train.lr_position = gen.uniform(1e-6, 1e-2);
        c.train.c2f = gen.uniform(0, 1) < 0.5;
        c.train.seed = static_cast<std::uint64_t>(gen.integer(0, 1 << 30));
        c.train.background = gen.vec3(0, 1);
        c.schedule.sigma_max = gen.uniform(0.5, 20);
        c.densify.abs_grad_threshold = gen.uniform(1e-5, 1e-2);
        c.loss.lambda = gen.uniform(0, 1);
        c.heldout.lr_tau = gen.uniform(1e-4, 1e-2);
        c.run_dir = "dir with spaces/" + std::to_string(trial);
        RunConfig back;
        back.apply(parse(c.to_toml()));
        EXPECT_EQ(back.to_toml(), c.to_toml());
        EXPECT_EQ(back.train.lr_position, c.train.lr_position);
        EXPECT_EQ(back.train.background, c.train.background);
        EXPECT_EQ(back.run_dir, c.run_dir);
    }
}

TEST(RunConfig, LoadConfigReportsMissingFile) {
    EXPECT_THROW(load_config("/nonexistent/config.toml"), ParseError);
}
