// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/keyframes.hpp>

namespace splatpose {

void
FrameSet::validate() const {
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].id <= frames[i - 1].id) {
            throw InvalidInput("frame ids must be strictly increasing");
        }
    }
    if (points.size() != colors.size()) {
        throw InvalidInput("seed points and colors differ in length");
    }
    intrinsics.validate();
}

bool
FrameSet::all_posed() const {
    for (const auto &f : frames) {
        if (!f.pose) {
            return false;
        }
    }
    return true;
}

std::vector<std::size_t>
subsample_keyframes(std::size_t n_frames, std::size_t interval) {
    if (n_frames < 2) {
        throw InvalidInput("keyframe subsampling needs at least 2 frames");
    }
    if (interval < 1) {
        throw InvalidInput("keyframe interval must be at least 1");
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_frames; i += interval) {
        out.push_back(i);
    }
    if (out.back() != n_frames - 1) {
        out.push_back(n_frames - 1);
    }
    return out;
}

FrameSet
interpolate_missing(FrameSet set) {
    std::vector<std::size_t> keys;
    for (std::size_t i = 0; i < set.frames.size(); ++i) {
        if (set.frames[i].is_keyframe) {
            if (!set.frames[i].pose) {
                throw InvalidInput("keyframe " + std::to_string(set.frames[i].id) + " has no pose");
            }
            keys.push_back(i);
        }
    }
    if (keys.empty()) {
        throw InvalidInput("interpolation needs at least one keyframe");
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < set.frames.size(); ++i) {
        Frame &f = set.frames[i];
        if (f.is_keyframe) {
            continue;
        }
        while (k + 1 < keys.size() && keys[k + 1] < i) {
            ++k;
        }
        if (i < keys.front()) {
            f.pose = *set.frames[keys.front()].pose;
        } else if (i > keys.back()) {
            f.pose = *set.frames[keys.back()].pose;
        } else {
            const std::size_t a = keys[k];
            const std::size_t b = keys[k + 1];
            const double t = static_cast<double>(i - a) / static_cast<double>(b - a);
            f.pose = interpolate_pose(*set.frames[a].pose, *set.frames[b].pose, t);
        }
    }
    return set;
}

} // namespace splatpose
