// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/scene.hpp>

#include <algorithm>
#include <array>
#include <limits>

namespace splatpose {

Mat3
GaussianPrimitive::covariance() const {
    return assemble_covariance(Quaternion(rotation), scales());
}

SceneModel::SceneModel(std::vector<GaussianPrimitive> primitives)
    : primitives_(std::move(primitives)), stats_(primitives_.size()) {}

void
SceneModel::add(const GaussianPrimitive &g) {
    primitives_.push_back(g);
    stats_.emplace_back();
}

void
SceneModel::retain(std::span<const char> keep) {
    if (keep.size() != primitives_.size()) {
        throw InvalidInput("retain mask length does not match scene size");
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < primitives_.size(); ++i) {
        if (keep[i]) {
            primitives_[out] = primitives_[i];
            stats_[out] = stats_[i];
            ++out;
        }
    }
    primitives_.resize(out);
    stats_.resize(out);
}

void
SceneModel::reset_stats() {
    std::fill(stats_.begin(), stats_.end(), GradientStats{});
}

Mat3
assemble_covariance(const Quaternion &q, const Vec3 &scales) {
    if (!(scales.array() > 0.0).all()) {
        throw InvalidInput("covariance scales must be positive");
    }
    const Mat3 m = rotation_from_quaternion(q) * scales.asDiagonal();
    return m * m.transpose();
}

SceneModel
init_from_points(std::span<const Vec3> points, std::span<const Vec3> colors) {
    if (points.size() < 4) {
        throw InvalidInput("init_from_points needs at least 4 points");
    }
    if (colors.size() != points.size()) {
        throw InvalidInput("init_from_points: one color per point required");
    }
    constexpr double kColorClamp = 1e-3;
    const double init_logit = logit(kInitialOpacity);

    std::vector<GaussianPrimitive> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        // Brute force 3-NN; the three smallest distances kept sorted.
        std::array<double, 3> best;
        best.fill(std::numeric_limits<double>::infinity());
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j == i) {
                continue;
            }
            const double d = (points[i] - points[j]).norm();
            if (d < best[2]) {
                best[2] = d;
                std::sort(best.begin(), best.end());
            }
        }
        const double mean = (best[0] + best[1] + best[2]) / 3.0;
        const double scale = std::max(mean, kMinInitScale);

        GaussianPrimitive &g = out[i];
        g.position = points[i];
        g.log_scales = Vec3::Constant(std::log(scale));
        g.opacity_logit = init_logit;
        for (int c = 0; c < 3; ++c) {
            g.color_logits[c] = logit(std::clamp(colors[i][c], kColorClamp, 1.0 - kColorClamp));
        }
    }
    return SceneModel(std::move(out));
}

} // namespace splatpose
