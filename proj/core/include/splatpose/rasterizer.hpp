// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/geometry.hpp>
#include <splatpose/image.hpp>
#include <splatpose/scene.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace splatpose {

/// Pinhole intrinsics. Pixel (col, row) has its center at (col + 0.5, row + 0.5).
struct CameraIntrinsics {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.5;
    double cy = 0.5;
    int width = 1;
    int height = 1;
    double near = 0.01;

    /// Throws InvalidInput when fx, fy, near are not positive or the size is empty.
    void validate() const;
};

inline constexpr double kAntiAliasDilation = 0.3; ///< px^2, always added
inline constexpr double kAlphaCap = 0.99;
inline constexpr double kAlphaSkip = 1.0 / 255.0;
inline constexpr double kTransmittanceStop = 1e-4;
inline constexpr double kScreenCullFactor = 1.3;
inline constexpr double kDegenerateDeterminant = 1e-12;

/// 2D footprint of one Gaussian for one view.
struct ProjectedSplat {
    Vec2 mean = Vec2::Zero();  ///< pixels
    Mat2 cov = Mat2::Identity(); ///< filtered and dilated, pixels^2
    double depth = 0.0;        ///< camera z
    double alpha_scale = 1.0;  ///< sqrt(det(S + 0.3I) / det(S + 0.3I + sigma^2 I))
    std::size_t source_index = 0;

    Vec3 conic = Vec3::Zero(); ///< (a, b, c) of cov^-1 = [[a, b], [b, c]]
    double opacity = 0.0;
    Vec3 color = Vec3::Zero();
    int x_min = 0, x_max = -1, y_min = 0, y_max = -1; ///< inclusive, clipped to the image
};

/// Projects g through apply_pose_delta(delta, pose). Returns nullopt when the
/// Gaussian is behind the near plane or its center falls outside 1.3x the
/// image extent. filter_sigma is in pixels.
std::optional<ProjectedSplat> project_gaussian(const GaussianPrimitive &g, const CameraPose &pose,
                                               const PoseDelta &delta, const CameraIntrinsics &K,
                                               double filter_sigma);

struct BlendRecord {
    std::uint32_t splat = 0; ///< index into RenderBuffers::splats
    double alpha = 0.0;
    double transmittance = 0.0; ///< before this splat
};

struct RenderSettings {
    /// Worker threads. Results do not depend on this value.
    int threads = 1;
};

struct RenderBuffers {
    Image image;
    std::vector<ProjectedSplat> splats; ///< sorted by (depth, source_index)
    std::vector<std::uint32_t> record_offsets; ///< pixel_count + 1 entries
    std::vector<BlendRecord> records;
    std::vector<double> final_transmittance;
    Vec3 background = Vec3::Zero();
    std::size_t degenerate_count = 0;
    std::uint64_t argument_digest = 0;

    std::span<const BlendRecord>
    pixel_records(std::size_t pixel) const {
        return {records.data() + record_offsets[pixel],
                records.data() + record_offsets[pixel + 1]};
    }
};

RenderBuffers render(const SceneModel &scene, const CameraPose &pose, const PoseDelta &delta,
                     const CameraIntrinsics &K, double filter_sigma, const Vec3 &background,
                     const RenderSettings &settings = {});

/// Gradients with respect to the raw parameters of every primitive (zero for
/// primitives that were not visible).
struct GaussianGradients {
    std::vector<Vec3> position;
    std::vector<Vec4> rotation;
    std::vector<Vec3> log_scales;
    std::vector<double> opacity_logit;
    std::vector<Vec3> color_logits;
    std::vector<Vec2> mean2d;     ///< dL/dmu2d summed over pixels
    std::vector<Vec2> mean2d_abs; ///< sum over pixels of |dL/dmu2d| per component
    std::vector<char> visible;

    void resize(std::size_t n);
};

struct BackwardResult {
    GaussianGradients gaussians;
    PoseDelta pose; ///< dL/domega, dL/dtau
};

/// Analytic backward pass of render. Adds this view's densification
/// statistics to scene.stats() for visible primitives. Throws
/// ArgumentMismatch if the arguments differ from those given to render.
BackwardResult render_backward(const RenderBuffers &buffers, SceneModel &scene,
                               const CameraPose &pose, const PoseDelta &delta,
                               const CameraIntrinsics &K, double filter_sigma,
                               const Image &dL_dimage, const RenderSettings &settings = {});

/// Digest of every argument that influences render output.
std::uint64_t render_argument_digest(const SceneModel &scene, const CameraPose &pose,
                                     const PoseDelta &delta, const CameraIntrinsics &K,
                                     double filter_sigma, const Vec3 &background);

} // namespace splatpose
