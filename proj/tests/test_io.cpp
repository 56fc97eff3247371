// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <splatpose/checkpoint.hpp>
#include <splatpose/colmap.hpp>
#include <splatpose/error.hpp>
#include <splatpose/image.hpp>
#include <splatpose/pose_io.hpp>
#include <splatpose/run_dir.hpp>

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace splatpose;
using splatpose::testing::Gen;
using splatpose::testing::rotation_distance;
using splatpose::testing::scratch_dir;

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SPLATPOSE_FIXTURES;

void
write_text(const fs::path &p, const std::string &text) {
    std::ofstream(p) << text;
}

fs::path
copy_colmap(const std::string &name) {
    const fs::path dir = scratch_dir(name);
    for (const char *f : {"cameras.txt", "images.txt", "points3D.txt"}) {
        fs::copy_file(kFixtures / "colmap" / f, dir / f);
    }
    return dir;
}

int
parse_error_line(const fs::path &dir) {
    try {
        parse_colmap_text(dir);
    } catch (const ParseError &e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST(Colmap, ParsesTheFixture) {
    const ColmapModel m = parse_colmap_text(kFixtures / "colmap");
    EXPECT_EQ(m.intrinsics.width, 16);
    EXPECT_EQ(m.intrinsics.fx, 14.0);
    EXPECT_EQ(m.intrinsics.cy, 8.0);
    ASSERT_EQ(m.poses.size(), 6u);
    ASSERT_EQ(m.points.size(), 6u);
    EXPECT_EQ(m.points[1], Vec3(0.5, 0.0, 0.2));
    EXPECT_NEAR(m.colors[3].x(), 128.0 / 255.0, 1e-15);
    const CameraPose &p = m.poses.at("frame_002.png");
    EXPECT_LT(rotation_distance(p.rotation, exp_so3(Vec3(0, 0.1, 0))), 1e-12);
    EXPECT_LT((p.translation - Vec3(-0.4, 0, 3)).norm(), 1e-15);
}

TEST(Colmap, IdentityAndUnnormalizedQuaternions) {
    const fs::path dir = copy_colmap("colmap_norm");
    write_text(dir / "images.txt", "1 1 0 0 0 0 0 0 1 a.png\n\n2 2 0 0 0 0 0 0 1 b.png\n\n");
    const ColmapModel m = parse_colmap_text(dir);
    EXPECT_EQ(m.poses.at("a.png").rotation, Mat3::Identity());
    EXPECT_EQ(m.poses.at("a.png").translation, Vec3::Zero());
    EXPECT_EQ(m.poses.at("b.png").rotation, Mat3::Identity());
}

TEST(Colmap, NineTokenPoseLineIsRejected) {
    const fs::path dir = copy_colmap("colmap_short");
    write_text(dir / "images.txt", "# header\n# header\n1 1 0 0 0 0 0 0 1\n\n");
    try {
        parse_colmap_text(dir);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 3);
        EXPECT_NE(std::string(e.what()).find("images.txt"), std::string::npos);
    }
}

TEST(Colmap, MissingFileNamesIt) {
    const fs::path dir = copy_colmap("colmap_missing");
    fs::remove(dir / "cameras.txt");
    try {
        parse_colmap_text(dir);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("cameras.txt"), std::string::npos);
    }
}

TEST(Colmap, ErrorsCarryTheLineNumber) {
    {
        const fs::path dir = copy_colmap("colmap_model");
        write_text(dir / "cameras.txt", "# c\n1 OPENCV 16 16 1 1 1 1 0 0 0 0\n");
        EXPECT_EQ(parse_error_line(dir), 2);
    }
    {
        const fs::path dir = copy_colmap("colmap_image");
        write_text(dir / "images.txt", "1 1 0 0 0 0 0 3 7 a.png\n\n");
        EXPECT_EQ(parse_error_line(dir), 1);
    }
    {
        const fs::path dir = copy_colmap("colmap_quat");
        write_text(dir / "images.txt", "# x\n1 0 0 0 0 0 0 3 1 a.png\n\n");
        EXPECT_EQ(parse_error_line(dir), 2);
    }
    {
        const fs::path dir = copy_colmap("colmap_point");
        write_text(dir / "points3D.txt", "1 0 0 0 0 0 0 0.1\n2 0 0 x 1 1 1 0.1\n");
        EXPECT_EQ(parse_error_line(dir), 2);
    }
    {
        const fs::path dir = copy_colmap("colmap_color");
        write_text(dir / "points3D.txt", "1 0 0 0 0 300 0 0.1\n");
        EXPECT_EQ(parse_error_line(dir), 1);
    }
}

TEST(PoseFile, RoundTrip) {
    Gen gen(1);
    std::vector<PoseEntry> poses;
    for (int i = 0; i < 10; ++i) {
        poses.push_back({i * 2, gen.pose()});
    }
    std::stringstream buf;
    write_pose_file(buf, poses);
    const auto back = read_pose_file(buf);
    ASSERT_EQ(back.size(), poses.size());
    for (std::size_t i = 0; i < poses.size(); ++i) {
        EXPECT_EQ(back[i].frame_id, poses[i].frame_id);
        EXPECT_LT(rotation_distance(back[i].pose.rotation, poses[i].pose.rotation), 1e-14);
        EXPECT_EQ(back[i].pose.translation, poses[i].pose.translation);
    }
}

TEST(PoseFile, RejectsMalformedLines) {
    auto line_of = [](const std::string &text) {
        std::stringstream in(text);
        try {
            read_pose_file(in, "p.txt");
        } catch (const ParseError &e) {
            EXPECT_EQ(e.file(), "p.txt");
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("# h\n1 1 0 0 0 0 0\n"), 2);
    EXPECT_EQ(line_of("1 1 0 0 0 0 0 0 9\n"), 1);
    EXPECT_EQ(line_of("1 0 0 0 0 0 0 0\n"), 1);
    EXPECT_EQ(line_of("2 1 0 0 0 0 0 0\n\n2 1 0 0 0 0 0 0\n"), 3);
    EXPECT_EQ(line_of("1 1 0 0 0 0 0 0\n"), -1);
}

TEST(Png, QuantizedRoundTrip) {
    Gen gen(2);
    const Image img = splatpose::testing::random_image(gen, 7, 5);
    const fs::path p = scratch_dir("png") / "a.png";
    write_png(p, img);
    const Image back = read_image(p);
    ASSERT_TRUE(back.same_shape(img));
    for (std::size_t i = 0; i < img.size(); ++i) {
        EXPECT_EQ(back.data()[i], to_8bit(img.data()[i]) / 255.0);
    }
    EXPECT_EQ(to_8bit(-1.0), 0);
    EXPECT_EQ(to_8bit(2.0), 255);
    EXPECT_EQ(to_8bit(0.5), 128);
}

TEST(Png, ReadsTheFixtureImages) {
    const Image img = read_image(kFixtures / "images" / "frame_001.png");
    EXPECT_EQ(img.width(), 16);
    EXPECT_EQ(img.at(2, 3, 0), ((2 * 16 + 5) % 256) / 255.0);
    EXPECT_THROW(read_image(kFixtures / "colmap" / "cameras.txt"), Error);
}

TEST(RunDir, RoundTripWithHeldoutAndScene) {
    Gen gen(3);
    RunData run;
    run.frames.intrinsics = splatpose::testing::small_intrinsics(8);
    for (int i = 0; i < 4; ++i) {
        Frame f;
        f.id = i * 5;
        f.is_keyframe = i != 1;
        f.pose = gen.pose();
        f.image = splatpose::testing::random_image(gen, 8, 8);
        run.frames.frames.push_back(f);
        run.frames.points.push_back(gen.vec3(-1, 1));
        run.frames.colors.push_back(Vec3(0.25, 0.5, 1.0));
    }
    run.background = Vec3(0.1, 0.2, 0.3);
    run.heldout.ids = {100};
    run.heldout.poses = {gen.pose()};
    run.heldout_images = {splatpose::testing::random_image(gen, 8, 8)};
    Trajectory gt;
    for (const auto &f : run.frames.frames) {
        gt.ids.push_back(f.id);
        gt.poses.push_back(*f.pose);
    }
    run.gt = gt;
    run.gt_scene = splatpose::testing::random_scene(gen, 5);

    const fs::path dir = scratch_dir("rundir");
    write_run_dir(dir, run);
    const RunData back = load_run_dir(dir);
    ASSERT_EQ(back.frames.frames.size(), 4u);
    EXPECT_EQ(back.frames.frames[2].id, 10);
    EXPECT_FALSE(back.frames.frames[1].is_keyframe);
    EXPECT_EQ(back.frames.frames[3].pose->translation, run.frames.frames[3].pose->translation);
    EXPECT_EQ(back.frames.frames[0].image.data()[5],
              to_8bit(run.frames.frames[0].image.data()[5]) / 255.0);
    EXPECT_EQ(back.frames.points, run.frames.points);
    EXPECT_EQ(back.background, run.background);
    ASSERT_TRUE(back.gt.has_value());
    EXPECT_EQ(back.gt->ids, gt.ids);
    EXPECT_EQ(back.heldout.ids, run.heldout.ids);
    EXPECT_EQ(back.heldout_images.size(), 1u);
    ASSERT_TRUE(back.gt_scene.has_value());
    EXPECT_EQ((*back.gt_scene)[4].position, (*run.gt_scene)[4].position);

    const RunData lazy = load_run_dir(dir, false);
    EXPECT_TRUE(lazy.frames.frames[0].image.empty());
}

TEST(RunDir, RejectsMissingOrForeignManifests) {
    const fs::path dir = scratch_dir("rundir_bad");
    EXPECT_THROW(load_run_dir(dir), ParseError);
    write_text(dir / "run.json", "{\"format_version\": 99}");
    EXPECT_THROW(load_run_dir(dir), ParseError);
    write_text(dir / "run.json", "{not json");
    EXPECT_THROW(load_run_dir(dir), ParseError);
}

TEST(Points, RoundTripAndErrors) {
    const fs::path p = scratch_dir("points") / "points.txt";
    const std::vector<Vec3> pts = {{1, 2, 3}, {-0.125, 1e-9, 4}};
    const std::vector<Vec3> cols = {{0, 0.5, 1}, {1, 1, 1}};
    write_points(p, pts, cols);
    std::vector<Vec3> a, b;
    read_points(p, a, b);
    EXPECT_EQ(a, pts);
    EXPECT_EQ(b, cols);
    write_text(p, "1 2 3 0 0\n");
    EXPECT_THROW(read_points(p, a, b), ParseError);
    EXPECT_THROW(write_points(p, pts, {}), InvalidInput);
}

TEST(Checkpoint, Fnv1aKnownVectors) {
    EXPECT_EQ(fnv1a("", 0), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a("a", 1), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a("foobar", 6), 0x85944171f73967e8ULL);
    EXPECT_EQ(hex_digest(0xabcULL), "0000000000000abc");
}

TEST(Checkpoint, WriteReadAndDigest) {
    Gen gen(4);
    const SceneModel scene = splatpose::testing::random_scene(gen, 12);
    const std::vector<PoseEntry> poses = {{0, gen.pose()}, {1, gen.pose()}};
    const fs::path dir = scratch_dir("checkpoint");
    const std::uint64_t h = write_checkpoint(dir, scene, poses, RunConfig{}, {MetricsRow{}});
    EXPECT_EQ(h, checkpoint_digest(dir));
    std::ifstream in(dir / kCheckpointHash);
    std::string text;
    in >> text;
    EXPECT_EQ(text, hex_digest(h));
    const Checkpoint c = read_checkpoint(dir);
    EXPECT_EQ(c.scene.size(), 12u);
    EXPECT_EQ(c.scene[3].log_scales, scene[3].log_scales);
    EXPECT_EQ(c.poses.size(), 2u);
    EXPECT_TRUE(fs::exists(dir / kCheckpointConfig));
    EXPECT_TRUE(fs::exists(dir / kCheckpointMetrics));

    const fs::path other = scratch_dir("checkpoint2");
    EXPECT_EQ(write_checkpoint(other, scene, poses, RunConfig{}, {}), h);
    SceneModel nudged = scene;
    nudged[0].opacity_logit = std::nextafter(nudged[0].opacity_logit, 10.0);
    EXPECT_NE(write_checkpoint(other, nudged, poses, RunConfig{}, {}), h);
}

TEST(Checkpoint, MetricsCsvHeader) {
    std::stringstream out;
    MetricsRow row;
    row.iter = 7;
    row.n_gaussians = 3;
    write_metrics_csv(out, {row});
    std::string header, first;
    std::getline(out, header);
    std::getline(out, first);
    EXPECT_EQ(header, "iter,loss,l1,dssim,aniso,sigma,n_gaussians,psnr_train");
    EXPECT_EQ(first.substr(0, 2), "7,");
}
