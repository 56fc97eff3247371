// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/ply.hpp>
#include <splatpose/pose_io.hpp>
#include <splatpose/run_dir.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace splatpose {

namespace fs = std::filesystem;
using nlohmann::json;

void
write_points(const fs::path &path, const std::vector<Vec3> &points,
             const std::vector<Vec3> &colors) {
    if (points.size() != colors.size()) {
        throw InvalidInput("points and colors differ in length");
    }
    std::ofstream out(path);
    if (!out) {
        throw ParseError(path.string(), 0, "cannot open for writing");
    }
    out << "# x y z r g b\n";
    char buf[512];
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g\n", points[i].x(),
                      points[i].y(), points[i].z(), colors[i].x(), colors[i].y(), colors[i].z());
        out << buf;
    }
}

void
read_points(const fs::path &path, std::vector<Vec3> &points, std::vector<Vec3> &colors) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }
    points.clear();
    colors.clear();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream ss(line);
        Vec3 p;
        Vec3 c;
        std::string extra;
        if (!(ss >> p.x() >> p.y() >> p.z() >> c.x() >> c.y() >> c.z()) || (ss >> extra)) {
            throw ParseError(path.string(), line_no, "expected: x y z r g b");
        }
        points.push_back(p);
        colors.push_back(c);
    }
}

namespace {

std::string
image_name(int id, const char *prefix) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "images/%s%05d.png", prefix, id);
    return buf;
}

std::vector<PoseEntry>
entries(const Trajectory &t) {
    std::vector<PoseEntry> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        out.push_back({t.ids[i], t.poses[i]});
    }
    return out;
}

template <typename T>
T
field(const json &j, const char *key, const fs::path &file) {
    if (!j.contains(key)) {
        throw ParseError(file.string(), 0, std::string("missing key '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ParseError(file.string(), 0, std::string("bad value for '") + key + "': " + e.what());
    }
}

} // namespace

void
write_run_dir(const fs::path &dir, const RunData &run) {
    fs::create_directories(dir / "images");
    const FrameSet &fsets = run.frames;
    const CameraIntrinsics &K = fsets.intrinsics;

    json j;
    j["format_version"] = kRunFormatVersion;
    j["intrinsics"] = {{"fx", K.fx},       {"fy", K.fy},        {"cx", K.cx},  {"cy", K.cy},
                       {"width", K.width}, {"height", K.height}, {"near", K.near}};
    j["background"] = {run.background.x(), run.background.y(), run.background.z()};

    json frames = json::array();
    std::vector<PoseEntry> poses;
    for (const Frame &f : fsets.frames) {
        std::string path = f.image_path;
        if (!f.image.empty()) {
            path = image_name(f.id, "");
            write_png(dir / path, f.image);
        }
        frames.push_back({{"id", f.id}, {"image", path}, {"keyframe", f.is_keyframe}});
        if (f.pose) {
            poses.push_back({f.id, *f.pose});
        }
    }
    j["frames"] = frames;
    write_pose_file(dir / "poses.txt", poses);
    j["poses"] = "poses.txt";
    write_points(dir / "points.txt", fsets.points, fsets.colors);
    j["points"] = "points.txt";

    if (run.gt) {
        write_pose_file(dir / "gt_poses.txt", entries(*run.gt));
        j["gt_poses"] = "gt_poses.txt";
    }
    if (run.heldout.size() > 0) {
        if (run.heldout_images.size() != run.heldout.size()) {
            throw InvalidInput("held-out views need one image each");
        }
        write_pose_file(dir / "heldout_poses.txt", entries(run.heldout));
        json images = json::array();
        for (std::size_t i = 0; i < run.heldout.size(); ++i) {
            const std::string path = image_name(run.heldout.ids[i], "heldout_");
            write_png(dir / path, run.heldout_images[i]);
            images.push_back(path);
        }
        j["heldout"] = {{"poses", "heldout_poses.txt"}, {"images", images}};
    }
    if (run.gt_scene) {
        write_ply(dir / "gt_scene.ply", *run.gt_scene);
        j["gt_scene"] = "gt_scene.ply";
    }
    std::ofstream out(dir / "run.json");
    out << j.dump(2) << "\n";
    if (!out) {
        throw ParseError((dir / "run.json").string(), 0, "write failed");
    }
}

RunData
load_run_dir(const fs::path &dir, bool load_images) {
    const fs::path manifest = dir / "run.json";
    std::ifstream in(manifest);
    if (!in) {
        throw ParseError(manifest.string(), 0, "cannot open run manifest");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ParseError(manifest.string(), 0, e.what());
    }
    const int version = field<int>(j, "format_version", manifest);
    if (version != kRunFormatVersion) {
        throw ParseError(manifest.string(), 0,
                         "unsupported run format version " + std::to_string(version));
    }

    RunData run;
    const json &ki = j.at("intrinsics");
    CameraIntrinsics &K = run.frames.intrinsics;
    K.fx = field<double>(ki, "fx", manifest);
    K.fy = field<double>(ki, "fy", manifest);
    K.cx = field<double>(ki, "cx", manifest);
    K.cy = field<double>(ki, "cy", manifest);
    K.width = field<int>(ki, "width", manifest);
    K.height = field<int>(ki, "height", manifest);
    K.near = field<double>(ki, "near", manifest);
    try {
        K.validate();
    } catch (const InvalidInput &e) {
        throw ParseError(manifest.string(), 0, e.what());
    }
    if (j.contains("background")) {
        const auto bg = field<std::vector<double>>(j, "background", manifest);
        if (bg.size() != 3) {
            throw ParseError(manifest.string(), 0, "background needs 3 components");
        }
        run.background = Vec3(bg[0], bg[1], bg[2]);
    }

    std::map<int, CameraPose> poses;
    for (const auto &e : read_pose_file(dir / field<std::string>(j, "poses", manifest))) {
        poses[e.frame_id] = e.pose;
    }
    for (const json &fj : field<json>(j, "frames", manifest)) {
        Frame f;
        f.id = field<int>(fj, "id", manifest);
        f.image_path = field<std::string>(fj, "image", manifest);
        f.is_keyframe = fj.value("keyframe", false);
        if (const auto it = poses.find(f.id); it != poses.end()) {
            f.pose = it->second;
        }
        if (load_images) {
            f.image = read_image(dir / f.image_path);
            if (f.image.width() != K.width || f.image.height() != K.height) {
                throw ParseError((dir / f.image_path).string(), 0,
                                 "image size does not match the intrinsics");
            }
        }
        run.frames.frames.push_back(std::move(f));
    }
    read_points(dir / field<std::string>(j, "points", manifest), run.frames.points,
                run.frames.colors);
    try {
        run.frames.validate();
    } catch (const InvalidInput &e) {
        throw ParseError(manifest.string(), 0, e.what());
    }

    if (j.contains("gt_poses")) {
        run.gt = Trajectory::from_entries(
            read_pose_file(dir / field<std::string>(j, "gt_poses", manifest)));
    }
    if (j.contains("heldout")) {
        const json &hj = j.at("heldout");
        run.heldout =
            Trajectory::from_entries(read_pose_file(dir / field<std::string>(hj, "poses", manifest)));
        const auto images = field<std::vector<std::string>>(hj, "images", manifest);
        if (images.size() != run.heldout.size()) {
            throw ParseError(manifest.string(), 0, "held-out image and pose counts differ");
        }
        if (load_images) {
            for (const auto &p : images) {
                run.heldout_images.push_back(read_image(dir / p));
            }
        }
    }
    if (j.contains("gt_scene")) {
        run.gt_scene = read_ply(dir / field<std::string>(j, "gt_scene", manifest));
    }
    return run;
}

} // namespace splatpose
