// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/pose_io.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace splatpose {

void
write_pose_file(std::ostream &out, const std::vector<PoseEntry> &poses) {
    out << "# frame_id qw qx qy qz tx ty tz (world-to-camera)\n";
    char buf[512];
    for (const auto &e : poses) {
        const Quaternion q = e.pose.quaternion();
        const Vec3 &t = e.pose.translation;
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", e.frame_id,
                      q.w(), q.x(), q.y(), q.z(), t.x(), t.y(), t.z());
        out << buf;
    }
}

void
write_pose_file(const std::filesystem::path &path, const std::vector<PoseEntry> &poses) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError(path.string(), 0, "cannot open for writing");
    }
    write_pose_file(out, poses);
}

std::vector<PoseEntry>
read_pose_file(std::istream &in, const std::string &name) {
    std::vector<PoseEntry> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream ss(line);
        PoseEntry e;
        double v[7];
        ss >> e.frame_id;
        for (double &x : v) {
            ss >> x;
        }
        std::string extra;
        if (!ss || (ss >> extra)) {
            throw ParseError(name, line_no, "expected: frame_id qw qx qy qz tx ty tz");
        }
        try {
            e.pose = CameraPose::from_quaternion(Quaternion(v[0], v[1], v[2], v[3]),
                                                 Vec3(v[4], v[5], v[6]));
        } catch (const InvalidInput &) {
            throw ParseError(name, line_no, "quaternion has zero norm");
        }
        if (!out.empty() && e.frame_id <= out.back().frame_id) {
            throw ParseError(name, line_no, "frame ids must be strictly increasing");
        }
        out.push_back(e);
    }
    return out;
}

std::vector<PoseEntry>
read_pose_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }
    return read_pose_file(in, path.string());
}

} // namespace splatpose
