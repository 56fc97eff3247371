// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/evalmetrics.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace splatpose {

std::vector<Vec3>
Trajectory::centers() const {
    std::vector<Vec3> out;
    out.reserve(poses.size());
    for (const auto &p : poses) {
        out.push_back(p.center());
    }
    return out;
}

Trajectory
Trajectory::from_entries(const std::vector<PoseEntry> &entries) {
    Trajectory t;
    for (const auto &e : entries) {
        t.ids.push_back(e.frame_id);
        t.poses.push_back(e.pose);
    }
    return t;
}

Vec3
Similarity::apply(const Vec3 &x) const {
    return scale * (rotation * x) + translation;
}

Similarity
Similarity::inverse() const {
    Similarity inv;
    inv.scale = 1.0 / scale;
    inv.rotation = rotation.transpose();
    inv.translation = -inv.scale * (inv.rotation * translation);
    return inv;
}

CameraPose
Similarity::apply(const CameraPose &world_to_camera) const {
    // Camera coordinates are rescaled by s so the result stays rigid.
    CameraPose out;
    out.rotation = world_to_camera.rotation * rotation.transpose();
    out.translation = scale * world_to_camera.translation - out.rotation * translation;
    return out;
}

namespace {

void
check_pair(const Trajectory &est, const Trajectory &gt, std::size_t min_size) {
    if (est.size() != gt.size()) {
        throw AlignmentError("trajectories differ in length");
    }
    if (est.size() < min_size) {
        throw AlignmentError("need at least " + std::to_string(min_size) + " poses");
    }
    if (!est.ids.empty() && !gt.ids.empty() && est.ids != gt.ids) {
        throw AlignmentError("trajectory frame ids do not match");
    }
}

} // namespace

Similarity
align_trajectories(const Trajectory &est, const Trajectory &gt) {
    check_pair(est, gt, 3);
    const std::vector<Vec3> x = est.centers();
    const std::vector<Vec3> y = gt.centers();
    const double n = static_cast<double>(x.size());

    Vec3 mx = Vec3::Zero();
    Vec3 my = Vec3::Zero();
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;

    double var_x = 0.0;
    double var_y = 0.0;
    Mat3 cov = Mat3::Zero();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Vec3 dx = x[i] - mx;
        const Vec3 dy = y[i] - my;
        var_x += dx.squaredNorm();
        var_y += dy.squaredNorm();
        cov += dy * dx.transpose();
    }
    var_x /= n;
    var_y /= n;
    cov /= n;
    const double spread = std::max(var_x, var_y);
    if (!(var_x > 1e-24 * std::max(1.0, spread)) || !(var_y > 1e-24 * std::max(1.0, spread))) {
        throw AlignmentError("camera centers have no spread");
    }

    const Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec3 d = svd.singularValues();
    if (!(d[0] > 1e-14 * spread)) {
        throw AlignmentError("rank-deficient center covariance");
    }
    Mat3 S = Mat3::Identity();
    if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) {
        S(2, 2) = -1.0;
    }

    Similarity sim;
    sim.rotation = svd.matrixU() * S * svd.matrixV().transpose();
    sim.scale = (d.asDiagonal() * S).trace() / var_x;
    if (!(sim.scale > 0.0)) {
        throw AlignmentError("alignment produced a non-positive scale");
    }
    sim.translation = my - sim.scale * (sim.rotation * mx);
    return sim;
}

double
ate(const Trajectory &est, const Trajectory &gt) {
    const Similarity sim = align_trajectories(est, gt);
    double sum = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        sum += (sim.apply(est.poses[i].center()) - gt.poses[i].center()).squaredNorm();
    }
    return std::sqrt(sum / static_cast<double>(est.size()));
}

double
rotation_angle(const Mat3 &rotation) {
    const Vec3 axial(rotation(2, 1) - rotation(1, 2), rotation(0, 2) - rotation(2, 0),
                     rotation(1, 0) - rotation(0, 1));
    return std::atan2(0.5 * axial.norm(), 0.5 * (rotation.trace() - 1.0));
}

namespace {

struct CameraToWorld {
    Mat3 rotation;
    Vec3 center;
};

CameraToWorld
camera_to_world(const CameraPose &p) {
    return {p.rotation.transpose(), p.center()};
}

// a^-1 b for camera-to-world transforms.
CameraToWorld
relative(const CameraToWorld &a, const CameraToWorld &b) {
    return {a.rotation.transpose() * b.rotation, a.rotation.transpose() * (b.center - a.center)};
}

} // namespace

RelativePoseError
rpe(const Trajectory &est, const Trajectory &gt, int delta) {
    if (delta < 1) {
        throw InvalidInput("rpe delta must be at least 1");
    }
    check_pair(est, gt, 3);
    if (est.size() <= static_cast<std::size_t>(delta)) {
        throw AlignmentError("trajectory shorter than the rpe delta");
    }
    const Similarity sim = align_trajectories(est, gt);
    std::vector<CameraToWorld> p;
    std::vector<CameraToWorld> q;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const CameraToWorld e = camera_to_world(est.poses[i]);
        p.push_back({sim.rotation * e.rotation, sim.apply(e.center)});
        q.push_back(camera_to_world(gt.poses[i]));
    }
    double sum_t = 0.0;
    double sum_r = 0.0;
    const std::size_t pairs = est.size() - static_cast<std::size_t>(delta);
    for (std::size_t i = 0; i < pairs; ++i) {
        const CameraToWorld dq = relative(q[i], q[i + delta]);
        const CameraToWorld dp = relative(p[i], p[i + delta]);
        // E = dq^-1 dp
        const Mat3 er = dq.rotation.transpose() * dp.rotation;
        const Vec3 et = dq.rotation.transpose() * (dp.center - dq.center);
        sum_t += et.squaredNorm();
        const double a = rotation_angle(er);
        sum_r += a * a;
    }
    RelativePoseError out;
    out.translation = 100.0 * std::sqrt(sum_t / static_cast<double>(pairs));
    out.rotation = std::sqrt(sum_r / static_cast<double>(pairs)) * 180.0 / std::numbers::pi;
    return out;
}

double
mean_rotation_error_deg(const std::vector<CameraPose> &est, const std::vector<CameraPose> &gt) {
    if (est.size() != gt.size() || est.empty()) {
        throw InvalidInput("rotation error needs two equal-length non-empty pose lists");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        sum += rotation_angle(est[i].rotation * gt[i].rotation.transpose());
    }
    return sum / static_cast<double>(est.size()) * 180.0 / std::numbers::pi;
}

double
aligned_rotation_error_deg(const Trajectory &est, const Trajectory &gt) {
    const Similarity sim = align_trajectories(est, gt);
    std::vector<CameraPose> moved;
    moved.reserve(est.size());
    for (const auto &p : est.poses) {
        moved.push_back(sim.apply(p));
    }
    return mean_rotation_error_deg(moved, gt.poses);
}

Mat3
rotation_gauge(const std::vector<CameraPose> &est, const std::vector<CameraPose> &gt) {
    if (est.size() != gt.size() || est.empty()) {
        throw InvalidInput("rotation gauge needs two equal-length non-empty pose lists");
    }
    Mat3 m = Mat3::Zero();
    for (std::size_t i = 0; i < est.size(); ++i) {
        m += est[i].rotation.transpose() * gt[i].rotation;
    }
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 d = Mat3::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) {
        d(2, 2) = -1.0;
    }
    return svd.matrixV() * d * svd.matrixU().transpose();
}

double
gauge_rotation_error_deg(const std::vector<CameraPose> &est, const std::vector<CameraPose> &gt) {
    const Mat3 q = rotation_gauge(est, gt);
    std::vector<CameraPose> moved = est;
    for (auto &p : moved) {
        p.rotation = p.rotation * q.transpose();
    }
    return mean_rotation_error_deg(moved, gt);
}

} // namespace splatpose
