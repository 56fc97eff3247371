// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/colmap.hpp>
#include <splatpose/error.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace splatpose {

namespace {

std::vector<std::string>
tokenize(const std::string &line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) {
        out.push_back(tok);
    }
    return out;
}

std::string
trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

class LineReader {
  public:
    explicit LineReader(const std::filesystem::path &path) : path_(path), in_(path) {
        if (!in_) {
            throw ParseError(path.string(), 0, "cannot open " + path.filename().string());
        }
    }

    /// Next line that is neither blank nor a comment.
    bool
    next_content(std::string &line) {
        while (next_raw(line)) {
            if (!line.empty() && line[0] != '#') {
                return true;
            }
        }
        return false;
    }

    bool
    next_raw(std::string &line) {
        if (!std::getline(in_, line)) {
            return false;
        }
        ++line_no_;
        line = trim(line);
        return true;
    }

    int
    line() const {
        return line_no_;
    }
    [[noreturn]] void
    fail(const std::string &what) const {
        throw ParseError(path_.string(), line_no_, what);
    }

    double
    number(const std::string &tok) const {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            fail("expected a number, got '" + tok + "'");
        }
        return v;
    }

    long
    integer(const std::string &tok) const {
        long v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            fail("expected an integer, got '" + tok + "'");
        }
        return v;
    }

  private:
    std::filesystem::path path_;
    std::ifstream in_;
    int line_no_ = 0;
};

} // namespace

ColmapModel
parse_colmap_text(const std::filesystem::path &dir) {
    ColmapModel model;
    std::map<long, CameraIntrinsics> cameras;
    {
        LineReader r(dir / "cameras.txt");
        std::string line;
        while (r.next_content(line)) {
            const auto t = tokenize(line);
            if (t.size() < 4) {
                r.fail("camera line needs CAMERA_ID MODEL WIDTH HEIGHT PARAMS[]");
            }
            const long id = r.integer(t[0]);
            const std::string &type = t[1];
            CameraIntrinsics K;
            K.width = static_cast<int>(r.integer(t[2]));
            K.height = static_cast<int>(r.integer(t[3]));
            if (type == "PINHOLE") {
                if (t.size() != 8) {
                    r.fail("PINHOLE camera needs 4 parameters (fx fy cx cy)");
                }
                K.fx = r.number(t[4]);
                K.fy = r.number(t[5]);
                K.cx = r.number(t[6]);
                K.cy = r.number(t[7]);
            } else if (type == "SIMPLE_PINHOLE") {
                if (t.size() != 7) {
                    r.fail("SIMPLE_PINHOLE camera needs 3 parameters (f cx cy)");
                }
                K.fx = K.fy = r.number(t[4]);
                K.cx = r.number(t[5]);
                K.cy = r.number(t[6]);
            } else {
                r.fail("unsupported camera model '" + type + "' (need PINHOLE or SIMPLE_PINHOLE)");
            }
            try {
                K.validate();
            } catch (const InvalidInput &e) {
                r.fail(e.what());
            }
            cameras[id] = K;
        }
    }
    if (cameras.empty()) {
        throw ParseError((dir / "cameras.txt").string(), 0, "no cameras defined");
    }

    {
        LineReader r(dir / "images.txt");
        std::string line;
        bool have_intrinsics = false;
        while (r.next_content(line)) {
            const auto t = tokenize(line);
            if (t.size() != 10) {
                r.fail("image line needs IMAGE_ID QW QX QY QZ TX TY TZ CAMERA_ID NAME, got " +
                       std::to_string(t.size()) + " tokens");
            }
            r.integer(t[0]);
            Quaternion q;
            try {
                q = Quaternion(r.number(t[1]), r.number(t[2]), r.number(t[3]), r.number(t[4]));
            } catch (const InvalidInput &) {
                r.fail("image quaternion has zero norm");
            }
            const Vec3 trans(r.number(t[5]), r.number(t[6]), r.number(t[7]));
            const long cam_id = r.integer(t[8]);
            const auto cam = cameras.find(cam_id);
            if (cam == cameras.end()) {
                r.fail("unknown CAMERA_ID " + std::to_string(cam_id));
            }
            const CameraIntrinsics &K = cam->second;
            if (!have_intrinsics) {
                model.intrinsics = K;
                have_intrinsics = true;
            } else if (K.fx != model.intrinsics.fx || K.fy != model.intrinsics.fy ||
                       K.cx != model.intrinsics.cx || K.cy != model.intrinsics.cy ||
                       K.width != model.intrinsics.width || K.height != model.intrinsics.height) {
                r.fail("all images must share one set of intrinsics");
            }
            if (!model.poses.emplace(t[9], CameraPose::from_quaternion(q, trans)).second) {
                r.fail("duplicate image name '" + t[9] + "'");
            }
            // Every pose line is followed by its POINTS2D line, which may be empty.
            std::string points2d;
            r.next_raw(points2d);
        }
        if (!have_intrinsics) {
            model.intrinsics = cameras.begin()->second;
        }
    }

    {
        LineReader r(dir / "points3D.txt");
        std::string line;
        while (r.next_content(line)) {
            const auto t = tokenize(line);
            if (t.size() < 8) {
                r.fail("point line needs POINT3D_ID X Y Z R G B ERROR TRACK[]");
            }
            r.integer(t[0]);
            model.points.emplace_back(r.number(t[1]), r.number(t[2]), r.number(t[3]));
            Vec3 rgb;
            for (int c = 0; c < 3; ++c) {
                const long v = r.integer(t[4 + c]);
                if (v < 0 || v > 255) {
                    r.fail("point color out of range");
                }
                rgb[c] = static_cast<double>(v) / 255.0;
            }
            model.colors.push_back(rgb);
        }
    }
    return model;
}

} // namespace splatpose
