// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include "parallel.hpp"

#include <splatpose/error.hpp>
#include <splatpose/rasterizer.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace splatpose {

namespace {

// Rows per work item. Fixed so that reductions do not depend on thread count.
constexpr int kChunkRows = 8;

enum class ProjectStatus { kVisible, kCulled, kDegenerate };

struct Projection {
    ProjectStatus status = ProjectStatus::kCulled;
    ProjectedSplat splat;
};

Vec4
normalized_quaternion(const Vec4 &raw) {
    const double n = raw.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidInput("Gaussian rotation quaternion must be finite and nonzero");
    }
    return raw / n;
}

Mat3
rotation_of(const Vec4 &q) {
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Mat3 r;
    r << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
        2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
        2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y);
    return r;
}

Projection
project_with(const GaussianPrimitive &g, const Mat3 &R, const Vec3 &t, const CameraIntrinsics &K,
             double filter_sigma, std::size_t index) {
    Projection out;
    const Vec3 p = R * g.position + t;
    const double z = p.z();
    if (!(z > K.near)) {
        return out;
    }
    const double u = K.fx * p.x() / z + K.cx;
    const double v = K.fy * p.y() / z + K.cy;
    const double half_w = kScreenCullFactor * std::max(K.cx, K.width - K.cx);
    const double half_h = kScreenCullFactor * std::max(K.cy, K.height - K.cy);
    if (!(std::abs(u - K.cx) <= half_w) || !(std::abs(v - K.cy) <= half_h)) {
        return out;
    }

    const Mat3 M = rotation_of(normalized_quaternion(g.rotation)) * g.scales().asDiagonal();
    const Mat3 cov_cam = R * (M * M.transpose()) * R.transpose();
    Eigen::Matrix<double, 2, 3> J;
    J << K.fx / z, 0.0, -K.fx * p.x() / (z * z), 0.0, K.fy / z, -K.fy * p.y() / (z * z);
    const Mat2 cov2d = J * cov_cam * J.transpose();

    Mat2 dilated = cov2d;
    dilated(0, 0) += kAntiAliasDilation;
    dilated(1, 1) += kAntiAliasDilation;
    Mat2 filtered = dilated;
    const double s2 = filter_sigma * filter_sigma;
    filtered(0, 0) += s2;
    filtered(1, 1) += s2;
    // Symmetrize exactly; J * C * J^T can differ in the last bit off-diagonal.
    filtered(1, 0) = filtered(0, 1);
    dilated(1, 0) = dilated(0, 1);

    const double det_f = filtered(0, 0) * filtered(1, 1) - filtered(0, 1) * filtered(0, 1);
    const double det_a = dilated(0, 0) * dilated(1, 1) - dilated(0, 1) * dilated(0, 1);
    if (!(det_f >= kDegenerateDeterminant) || !(det_a >= kDegenerateDeterminant)) {
        out.status = ProjectStatus::kDegenerate;
        return out;
    }

    ProjectedSplat &s = out.splat;
    s.mean = {u, v};
    s.cov = filtered;
    s.depth = z;
    s.alpha_scale = filter_sigma == 0.0 ? 1.0 : std::sqrt(det_a / det_f);
    s.source_index = index;
    s.conic = {filtered(1, 1) / det_f, -filtered(0, 1) / det_f, filtered(0, 0) / det_f};
    s.opacity = g.opacity();
    s.color = g.color();

    const double mid = 0.5 * (filtered(0, 0) + filtered(1, 1));
    const double lambda_max = mid + std::sqrt(std::max(0.1, mid * mid - det_f));
    const double radius = std::ceil(3.0 * std::sqrt(lambda_max));
    s.x_min = std::max(0, static_cast<int>(std::ceil(u - radius - 0.5)));
    s.x_max = std::min(K.width - 1, static_cast<int>(std::floor(u + radius - 0.5)));
    s.y_min = std::max(0, static_cast<int>(std::ceil(v - radius - 0.5)));
    s.y_max = std::min(K.height - 1, static_cast<int>(std::floor(v + radius - 0.5)));
    if (s.x_min > s.x_max || s.y_min > s.y_max) {
        return out;
    }
    out.status = ProjectStatus::kVisible;
    return out;
}

inline void
fnv_mix(std::uint64_t &h, const void *data, std::size_t n) {
    const auto *bytes = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
}

inline void
fnv_mix(std::uint64_t &h, double v) {
    fnv_mix(h, &v, sizeof v);
}

template <typename Derived>
void
fnv_mix_matrix(std::uint64_t &h, const Eigen::MatrixBase<Derived> &m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        fnv_mix(h, m(i));
    }
}

// Screen-space gradient of one splat, accumulated over pixels.
struct SplatGrad {
    double mean[2];
    double mean_abs[2];
    double conic[3];
    double alpha_scale;
    double opacity;
    double color[3];
};

int
chunk_count(int height) {
    return (height + kChunkRows - 1) / kChunkRows;
}

} // namespace

void
CameraIntrinsics::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0) || !(near > 0.0) || width < 1 || height < 1 ||
        !std::isfinite(cx) || !std::isfinite(cy)) {
        throw InvalidInput("invalid camera intrinsics");
    }
}

std::optional<ProjectedSplat>
project_gaussian(const GaussianPrimitive &g, const CameraPose &pose, const PoseDelta &delta,
                 const CameraIntrinsics &K, double filter_sigma) {
    K.validate();
    const CameraPose pred = apply_pose_delta(delta, pose);
    Projection p = project_with(g, pred.rotation, pred.translation, K, filter_sigma, 0);
    if (p.status != ProjectStatus::kVisible) {
        return std::nullopt;
    }
    return p.splat;
}

std::uint64_t
render_argument_digest(const SceneModel &scene, const CameraPose &pose, const PoseDelta &delta,
                       const CameraIntrinsics &K, double filter_sigma, const Vec3 &background) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    fnv_mix_matrix(h, pose.rotation);
    fnv_mix_matrix(h, pose.translation);
    fnv_mix_matrix(h, delta.omega);
    fnv_mix_matrix(h, delta.tau);
    for (double v : {K.fx, K.fy, K.cx, K.cy, K.near, static_cast<double>(K.width),
                     static_cast<double>(K.height), filter_sigma}) {
        fnv_mix(h, v);
    }
    fnv_mix_matrix(h, background);
    const std::uint64_t n = scene.size();
    fnv_mix(h, &n, sizeof n);
    for (const auto &g : scene.primitives()) {
        fnv_mix_matrix(h, g.position);
        fnv_mix_matrix(h, g.rotation);
        fnv_mix_matrix(h, g.log_scales);
        fnv_mix(h, g.opacity_logit);
        fnv_mix_matrix(h, g.color_logits);
    }
    return h;
}

RenderBuffers
render(const SceneModel &scene, const CameraPose &pose, const PoseDelta &delta,
       const CameraIntrinsics &K, double filter_sigma, const Vec3 &background,
       const RenderSettings &settings) {
    K.validate();
    if (!(filter_sigma >= 0.0)) {
        throw InvalidInput("filter_sigma must be non-negative");
    }
    const CameraPose pred = apply_pose_delta(delta, pose);

    RenderBuffers out;
    out.background = background;
    out.argument_digest = render_argument_digest(scene, pose, delta, K, filter_sigma, background);
    out.image = Image(K.width, K.height);
    out.final_transmittance.assign(out.image.pixel_count(), 1.0);

    for (std::size_t i = 0; i < scene.size(); ++i) {
        Projection p = project_with(scene[i], pred.rotation, pred.translation, K, filter_sigma, i);
        if (p.status == ProjectStatus::kVisible) {
            out.splats.push_back(p.splat);
        } else if (p.status == ProjectStatus::kDegenerate) {
            ++out.degenerate_count;
        }
    }
    std::sort(out.splats.begin(), out.splats.end(),
              [](const ProjectedSplat &a, const ProjectedSplat &b) {
                  if (a.depth != b.depth) {
                      return a.depth < b.depth;
                  }
                  return a.source_index < b.source_index;
              });

    const int W = K.width;
    const int H = K.height;
    const int n_chunks = chunk_count(H);
    std::vector<std::vector<BlendRecord>> chunk_records(n_chunks);
    std::vector<std::uint32_t> pixel_counts(out.image.pixel_count(), 0);
    const auto &splats = out.splats;

    // Compact per-splat data for the inner loop. Powers below power_floor give alpha
    // below the skip threshold; the margin keeps the test conservative under rounding.
    struct Packed {
        double mx, my, c0, c1, c2, weight, power_floor;
        int x_min, x_max, y_min, y_max;
    };
    std::vector<Packed> packed(splats.size());
    for (std::size_t s = 0; s < splats.size(); ++s) {
        const ProjectedSplat &sp = splats[s];
        const double weight = sp.alpha_scale * sp.opacity;
        const double floor =
            weight > 0.0 ? std::log(kAlphaSkip / weight) - 1e-9 : -std::numeric_limits<double>::infinity();
        packed[s] = {sp.mean.x(), sp.mean.y(), sp.conic[0], sp.conic[1], sp.conic[2], weight,
                     floor, sp.x_min, sp.x_max, sp.y_min, sp.y_max};
    }

    detail::parallel_for(n_chunks, settings.threads, [&](std::size_t chunk) {
        const int y0 = static_cast<int>(chunk) * kChunkRows;
        const int y1 = std::min(H, y0 + kChunkRows);
        std::vector<std::uint32_t> active;
        for (std::uint32_t s = 0; s < packed.size(); ++s) {
            if (packed[s].y_max >= y0 && packed[s].y_min < y1) {
                active.push_back(s);
            }
        }
        std::vector<std::uint32_t> row;
        auto &records = chunk_records[chunk];
        for (int y = y0; y < y1; ++y) {
            const double py = y + 0.5;
            row.clear();
            for (std::uint32_t s : active) {
                if (y >= packed[s].y_min && y <= packed[s].y_max) {
                    row.push_back(s);
                }
            }
            for (int x = 0; x < W; ++x) {
                const double px = x + 0.5;
                const std::size_t pixel = static_cast<std::size_t>(y) * W + x;
                double T = 1.0;
                double rgb[3] = {0.0, 0.0, 0.0};
                std::uint32_t count = 0;
                for (std::uint32_t s : row) {
                    const Packed &pk = packed[s];
                    if (x < pk.x_min || x > pk.x_max) {
                        continue;
                    }
                    const double dx = px - pk.mx;
                    const double dy = py - pk.my;
                    const double power = -0.5 * (pk.c0 * dx * dx + pk.c2 * dy * dy) - pk.c1 * dx * dy;
                    if (power < pk.power_floor) {
                        continue;
                    }
                    const double alpha = std::min(kAlphaCap, pk.weight * std::exp(power));
                    if (alpha < kAlphaSkip) {
                        continue;
                    }
                    const double next_T = T * (1.0 - alpha);
                    if (next_T < kTransmittanceStop) {
                        break;
                    }
                    records.push_back({s, alpha, T});
                    ++count;
                    const ProjectedSplat &sp = splats[s];
                    const double w = alpha * T;
                    rgb[0] += w * sp.color[0];
                    rgb[1] += w * sp.color[1];
                    rgb[2] += w * sp.color[2];
                    T = next_T;
                }
                pixel_counts[pixel] = count;
                out.final_transmittance[pixel] = T;
                for (int c = 0; c < 3; ++c) {
                    out.image.at(x, y, c) = rgb[c] + T * background[c];
                }
            }
        }
    });

    out.record_offsets.resize(out.image.pixel_count() + 1);
    out.record_offsets[0] = 0;
    for (std::size_t p = 0; p < pixel_counts.size(); ++p) {
        out.record_offsets[p + 1] = out.record_offsets[p] + pixel_counts[p];
    }
    out.records.reserve(out.record_offsets.back());
    for (auto &chunk : chunk_records) {
        out.records.insert(out.records.end(), chunk.begin(), chunk.end());
    }
    return out;
}

void
GaussianGradients::resize(std::size_t n) {
    position.assign(n, Vec3::Zero());
    rotation.assign(n, Vec4::Zero());
    log_scales.assign(n, Vec3::Zero());
    opacity_logit.assign(n, 0.0);
    color_logits.assign(n, Vec3::Zero());
    mean2d.assign(n, Vec2::Zero());
    mean2d_abs.assign(n, Vec2::Zero());
    visible.assign(n, 0);
}

namespace {

// Chains screen-space gradients of one splat back to the primitive's raw
// parameters and to the predicted camera rotation/translation.
void
backprop_splat(const GaussianPrimitive &g, const ProjectedSplat &sp, const SplatGrad &sg,
               const Mat3 &Rp, const Vec3 &tp, const CameraIntrinsics &K, double filter_sigma,
               GaussianGradients &out, std::size_t i, Mat3 &dL_dRp, Vec3 &dL_dtp) {
    const Vec3 p = Rp * g.position + tp;
    const double x = p.x(), y = p.y(), z = p.z();
    const double qnorm = g.rotation.norm();
    const Vec4 qn = g.rotation / qnorm;
    const Mat3 Rq = rotation_of(qn);
    const Vec3 s = g.scales();
    const Mat3 M = Rq * s.asDiagonal();
    const Mat3 sigma = M * M.transpose();
    const Mat3 cov_cam = Rp * sigma * Rp.transpose();
    Eigen::Matrix<double, 2, 3> J;
    J << K.fx / z, 0.0, -K.fx * x / (z * z), 0.0, K.fy / z, -K.fy * y / (z * z);

    // Filtered covariance F and its inverse (the conic).
    const Mat2 &F = sp.cov;
    const double det_f = F(0, 0) * F(1, 1) - F(0, 1) * F(0, 1);
    Mat2 Finv;
    Finv << F(1, 1) / det_f, -F(0, 1) / det_f, -F(0, 1) / det_f, F(0, 0) / det_f;

    Mat2 dconic;
    dconic << sg.conic[0], 0.5 * sg.conic[1], 0.5 * sg.conic[1], sg.conic[2];
    Mat2 dL_dcov2d = -Finv * dconic * Finv;

    if (filter_sigma != 0.0) {
        Mat2 A = F;
        const double s2 = filter_sigma * filter_sigma;
        A(0, 0) -= s2;
        A(1, 1) -= s2;
        const double det_a = A(0, 0) * A(1, 1) - A(0, 1) * A(0, 1);
        Mat2 Ainv;
        Ainv << A(1, 1) / det_a, -A(0, 1) / det_a, -A(0, 1) / det_a, A(0, 0) / det_a;
        dL_dcov2d += (sg.alpha_scale * sp.alpha_scale * 0.5) * (Ainv - Finv);
    }

    const Mat3 dL_dcov_cam = J.transpose() * dL_dcov2d * J;
    const Eigen::Matrix<double, 2, 3> dL_dJ = 2.0 * dL_dcov2d * J * cov_cam;

    Vec3 dL_dp;
    dL_dp.x() = K.fx / z * sg.mean[0] + dL_dJ(0, 2) * (-K.fx / (z * z));
    dL_dp.y() = K.fy / z * sg.mean[1] + dL_dJ(1, 2) * (-K.fy / (z * z));
    dL_dp.z() = -K.fx * x / (z * z) * sg.mean[0] - K.fy * y / (z * z) * sg.mean[1] +
                dL_dJ(0, 0) * (-K.fx / (z * z)) + dL_dJ(0, 2) * (2.0 * K.fx * x / (z * z * z)) +
                dL_dJ(1, 1) * (-K.fy / (z * z)) + dL_dJ(1, 2) * (2.0 * K.fy * y / (z * z * z));

    const Mat3 dL_dsigma = Rp.transpose() * dL_dcov_cam * Rp;
    dL_dRp += 2.0 * dL_dcov_cam * Rp * sigma + dL_dp * g.position.transpose();
    dL_dtp += dL_dp;

    const Mat3 dL_dM = 2.0 * dL_dsigma * M;
    const Mat3 Gr = dL_dM * s.asDiagonal();
    Vec3 dL_ds;
    for (int j = 0; j < 3; ++j) {
        dL_ds[j] = dL_dM.col(j).dot(Rq.col(j));
    }

    const double w = qn[0], qx = qn[1], qy = qn[2], qz = qn[3];
    Vec4 dL_dqn;
    dL_dqn[0] = 2.0 * (-qz * Gr(0, 1) + qy * Gr(0, 2) + qz * Gr(1, 0) - qx * Gr(1, 2) -
                       qy * Gr(2, 0) + qx * Gr(2, 1));
    dL_dqn[1] = 2.0 * (qy * Gr(0, 1) + qz * Gr(0, 2) + qy * Gr(1, 0) - 2.0 * qx * Gr(1, 1) -
                       w * Gr(1, 2) + qz * Gr(2, 0) + w * Gr(2, 1) - 2.0 * qx * Gr(2, 2));
    dL_dqn[2] = 2.0 * (-2.0 * qy * Gr(0, 0) + qx * Gr(0, 1) + w * Gr(0, 2) + qx * Gr(1, 0) +
                       qz * Gr(1, 2) - w * Gr(2, 0) + qz * Gr(2, 1) - 2.0 * qy * Gr(2, 2));
    dL_dqn[3] = 2.0 * (-2.0 * qz * Gr(0, 0) - w * Gr(0, 1) + qx * Gr(0, 2) + w * Gr(1, 0) -
                       2.0 * qz * Gr(1, 1) + qy * Gr(1, 2) + qx * Gr(2, 0) + qy * Gr(2, 1));

    out.position[i] = Rp.transpose() * dL_dp;
    out.rotation[i] = (dL_dqn - qn * qn.dot(dL_dqn)) / qnorm;
    out.log_scales[i] = dL_ds.cwiseProduct(s);
    const double o = sp.opacity;
    out.opacity_logit[i] = sg.opacity * o * (1.0 - o);
    for (int c = 0; c < 3; ++c) {
        out.color_logits[i][c] = sg.color[c] * sp.color[c] * (1.0 - sp.color[c]);
    }
    out.mean2d[i] = {sg.mean[0], sg.mean[1]};
    out.mean2d_abs[i] = {sg.mean_abs[0], sg.mean_abs[1]};
    out.visible[i] = 1;
}

} // namespace

BackwardResult
render_backward(const RenderBuffers &buffers, SceneModel &scene, const CameraPose &pose,
                const PoseDelta &delta, const CameraIntrinsics &K, double filter_sigma,
                const Image &dL_dimage, const RenderSettings &settings) {
    if (buffers.argument_digest !=
        render_argument_digest(scene, pose, delta, K, filter_sigma, buffers.background)) {
        throw ArgumentMismatch("render_backward arguments differ from the ones used by render");
    }
    if (!dL_dimage.same_shape(buffers.image)) {
        throw InvalidInput("dL/dimage shape does not match the rendered image");
    }

    BackwardResult result;
    result.gaussians.resize(scene.size());

    const int W = K.width;
    const int H = K.height;
    const int n_chunks = chunk_count(H);
    const std::size_t n_splats = buffers.splats.size();
    std::vector<std::vector<SplatGrad>> partial(n_chunks);
    const auto &splats = buffers.splats;
    const Vec3 &bg = buffers.background;

    detail::parallel_for(n_chunks, settings.threads, [&](std::size_t chunk) {
        auto &acc = partial[chunk];
        acc.assign(n_splats, SplatGrad{});
        const int y0 = static_cast<int>(chunk) * kChunkRows;
        const int y1 = std::min(H, y0 + kChunkRows);
        for (int y = y0; y < y1; ++y) {
            const double py = y + 0.5;
            for (int x = 0; x < W; ++x) {
                const double px = x + 0.5;
                const std::size_t pixel = static_cast<std::size_t>(y) * W + x;
                const double g[3] = {dL_dimage.at(x, y, 0), dL_dimage.at(x, y, 1),
                                     dL_dimage.at(x, y, 2)};
                if (g[0] == 0.0 && g[1] == 0.0 && g[2] == 0.0) {
                    continue;
                }
                const auto recs = buffers.pixel_records(pixel);
                const double t_final = buffers.final_transmittance[pixel];
                // Color contributed behind the current record, including background.
                double behind[3] = {t_final * bg[0], t_final * bg[1], t_final * bg[2]};
                for (std::size_t k = recs.size(); k-- > 0;) {
                    const BlendRecord &r = recs[k];
                    const ProjectedSplat &sp = splats[r.splat];
                    SplatGrad &sg = acc[r.splat];
                    const double w = r.alpha * r.transmittance;
                    double dot_c = 0.0;
                    double dot_behind = 0.0;
                    for (int c = 0; c < 3; ++c) {
                        sg.color[c] += w * g[c];
                        dot_c += sp.color[c] * g[c];
                        dot_behind += behind[c] * g[c];
                    }
                    const double dL_dalpha =
                        r.transmittance * dot_c - dot_behind / (1.0 - r.alpha);
                    for (int c = 0; c < 3; ++c) {
                        behind[c] += w * sp.color[c];
                    }

                    const double dx = px - sp.mean.x();
                    const double dy = py - sp.mean.y();
                    const double G = std::exp(-0.5 * (sp.conic[0] * dx * dx +
                                                      sp.conic[2] * dy * dy) -
                                              sp.conic[1] * dx * dy);
                    const double raw = sp.alpha_scale * sp.opacity * G;
                    if (raw > kAlphaCap) {
                        continue;
                    }
                    sg.opacity += dL_dalpha * sp.alpha_scale * G;
                    sg.alpha_scale += dL_dalpha * sp.opacity * G;
                    const double dL_dG = dL_dalpha * sp.alpha_scale * sp.opacity;
                    const double gx = dL_dG * G * (sp.conic[0] * dx + sp.conic[1] * dy);
                    const double gy = dL_dG * G * (sp.conic[1] * dx + sp.conic[2] * dy);
                    sg.mean[0] += gx;
                    sg.mean[1] += gy;
                    sg.mean_abs[0] += std::abs(gx);
                    sg.mean_abs[1] += std::abs(gy);
                    sg.conic[0] += -0.5 * dx * dx * G * dL_dG;
                    sg.conic[1] += -dx * dy * G * dL_dG;
                    sg.conic[2] += -0.5 * dy * dy * G * dL_dG;
                }
            }
        }
    });

    std::vector<SplatGrad> total(n_splats, SplatGrad{});
    for (const auto &chunk : partial) {
        for (std::size_t s = 0; s < n_splats; ++s) {
            const SplatGrad &a = chunk[s];
            SplatGrad &t = total[s];
            for (int j = 0; j < 2; ++j) {
                t.mean[j] += a.mean[j];
                t.mean_abs[j] += a.mean_abs[j];
            }
            for (int j = 0; j < 3; ++j) {
                t.conic[j] += a.conic[j];
                t.color[j] += a.color[j];
            }
            t.alpha_scale += a.alpha_scale;
            t.opacity += a.opacity;
        }
    }

    const CameraPose pred = apply_pose_delta(delta, pose);
    Mat3 dL_dRp = Mat3::Zero();
    Vec3 dL_dtp = Vec3::Zero();
    for (std::size_t s = 0; s < n_splats; ++s) {
        const std::size_t i = splats[s].source_index;
        backprop_splat(scene[i], splats[s], total[s], pred.rotation, pred.translation, K,
                       filter_sigma, result.gaussians, i, dL_dRp, dL_dtp);
        GradientStats &st = scene.stats()[i];
        st.norm_sum += result.gaussians.mean2d[i].norm();
        st.abs_sum += result.gaussians.mean2d_abs[i];
        st.count += 1;
    }

    // R_pred = E R, t_pred = E t + tau with E = exp(omega).
    const Mat3 E = exp_so3(delta.omega);
    const Mat3 dL_dE = dL_dRp * pose.rotation.transpose() + dL_dtp * pose.translation.transpose();
    Vec3 g_left;
    for (int k = 0; k < 3; ++k) {
        const Mat3 gen = skew(Vec3::Unit(k)) * E;
        g_left[k] = (dL_dE.array() * gen.array()).sum();
    }
    result.pose.omega = so3_left_jacobian(delta.omega).transpose() * g_left;
    result.pose.tau = dL_dtp;
    return result;
}

} // namespace splatpose
