// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/geometry.hpp>

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace splatpose {

inline double
sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

inline double
logit(double p) {
    return std::log(p / (1.0 - p));
}

/// One 3D Gaussian in its unconstrained (optimizer-facing) parameterization.
///
/// Activated values: scale = exp(log_scales), opacity = sigmoid(opacity_logit),
/// color = sigmoid(color_logits), rotation = rotation / |rotation|.
struct GaussianPrimitive {
    Vec3 position = Vec3::Zero();
    Vec4 rotation = Vec4(1.0, 0.0, 0.0, 0.0); ///< raw (w, x, y, z)
    Vec3 log_scales = Vec3::Zero();
    double opacity_logit = 0.0;
    Vec3 color_logits = Vec3::Zero();

    Vec3
    scales() const {
        return log_scales.array().exp();
    }
    double
    opacity() const {
        return sigmoid(opacity_logit);
    }
    Vec3
    color() const {
        return {sigmoid(color_logits.x()), sigmoid(color_logits.y()), sigmoid(color_logits.z())};
    }
    Mat3 covariance() const;

    /// Number of scalar parameters, in the order used by flat views.
    static constexpr int kParamCount = 14;
};

/// Densification statistics gathered by the backward pass.
struct GradientStats {
    double norm_sum = 0.0;      ///< sum over views of |dL/dmu2d|
    Vec2 abs_sum = Vec2::Zero(); ///< sum over views of per-pixel |dL/dmu2d| components
    int count = 0;              ///< views in which the Gaussian was visible

    /// Mean per-observation absolute gradient, 1-norm over both components.
    double
    mean_abs() const {
        return count > 0 ? (abs_sum.x() + abs_sum.y()) / count : 0.0;
    }
    double
    mean_norm() const {
        return count > 0 ? norm_sum / count : 0.0;
    }
};

/// Ordered Gaussian primitives plus their densification accumulators.
class SceneModel {
  public:
    SceneModel() = default;
    explicit SceneModel(std::vector<GaussianPrimitive> primitives);

    std::size_t
    size() const {
        return primitives_.size();
    }
    bool
    empty() const {
        return primitives_.empty();
    }

    const std::vector<GaussianPrimitive> &
    primitives() const {
        return primitives_;
    }
    std::vector<GaussianPrimitive> &
    primitives() {
        return primitives_;
    }
    const GaussianPrimitive &
    operator[](std::size_t i) const {
        return primitives_[i];
    }
    GaussianPrimitive &
    operator[](std::size_t i) {
        return primitives_[i];
    }

    const std::vector<GradientStats> &
    stats() const {
        return stats_;
    }
    std::vector<GradientStats> &
    stats() {
        return stats_;
    }

    void add(const GaussianPrimitive &g);
    /// Keeps primitive i iff keep[i] is nonzero; preserves order.
    void retain(std::span<const char> keep);
    void reset_stats();

  private:
    std::vector<GaussianPrimitive> primitives_;
    std::vector<GradientStats> stats_;
};

/// Sigma = R S S^T R^T. Throws InvalidInput for non-positive scales.
Mat3 assemble_covariance(const Quaternion &q, const Vec3 &scales);

/// One isotropic primitive per point, scale from the three nearest neighbors.
/// Colors are RGB in [0, 1]. Throws InvalidInput for fewer than 4 points or a
/// color list of a different length.
SceneModel init_from_points(std::span<const Vec3> points, std::span<const Vec3> colors);

inline constexpr double kInitialOpacity = 0.1;
inline constexpr double kMinInitScale = 1e-7;

} // namespace splatpose
