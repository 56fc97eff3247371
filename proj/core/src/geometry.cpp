// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/geometry.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

namespace splatpose {

namespace {

constexpr double kExpTaylorThreshold = 1e-8;
constexpr double kSlerpLinearThreshold = 1e-6;

} // namespace

Quaternion::Quaternion(double w, double x, double y, double z) {
    const double n2 = w * w + x * x + y * y + z * z;
    if (!std::isfinite(n2) || n2 <= 0.0) {
        throw InvalidInput("quaternion must be finite with nonzero norm");
    }
    const double sign = w < 0.0 ? -1.0 : 1.0;
    const double inv = sign / std::sqrt(n2);
    w_ = w * inv;
    x_ = x * inv;
    y_ = y * inv;
    z_ = z * inv;
}

Quaternion::Quaternion(const Vec4 &wxyz) : Quaternion(wxyz[0], wxyz[1], wxyz[2], wxyz[3]) {}

Quaternion
Quaternion::from_axis_angle(const Vec3 &axis, double angle) {
    const double n = axis.norm();
    if (!(n > 0.0)) {
        return identity();
    }
    const Vec3 a = axis / n * std::sin(0.5 * angle);
    return {std::cos(0.5 * angle), a.x(), a.y(), a.z()};
}

Quaternion
Quaternion::from_rotation(const Mat3 &m) {
    // Shepperd: branch on the largest diagonal term for stability.
    const double trace = m.trace();
    double w, x, y, z;
    if (trace > m(0, 0) && trace > m(1, 1) && trace > m(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + trace);
        w = 0.25 * s;
        x = (m(2, 1) - m(1, 2)) / s;
        y = (m(0, 2) - m(2, 0)) / s;
        z = (m(1, 0) - m(0, 1)) / s;
    } else if (m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2));
        w = (m(2, 1) - m(1, 2)) / s;
        x = 0.25 * s;
        y = (m(0, 1) + m(1, 0)) / s;
        z = (m(0, 2) + m(2, 0)) / s;
    } else if (m(1, 1) > m(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2));
        w = (m(0, 2) - m(2, 0)) / s;
        x = (m(0, 1) + m(1, 0)) / s;
        y = 0.25 * s;
        z = (m(1, 2) + m(2, 1)) / s;
    } else {
        const double s = 2.0 * std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1));
        w = (m(1, 0) - m(0, 1)) / s;
        x = (m(0, 2) + m(2, 0)) / s;
        y = (m(1, 2) + m(2, 1)) / s;
        z = 0.25 * s;
    }
    return {w, x, y, z};
}

Quaternion
Quaternion::operator*(const Quaternion &r) const {
    return {w_ * r.w_ - x_ * r.x_ - y_ * r.y_ - z_ * r.z_,
            w_ * r.x_ + x_ * r.w_ + y_ * r.z_ - z_ * r.y_,
            w_ * r.y_ - x_ * r.z_ + y_ * r.w_ + z_ * r.x_,
            w_ * r.z_ + x_ * r.y_ - y_ * r.x_ + z_ * r.w_};
}

double
angle_between(const Quaternion &a, const Quaternion &b) {
    // atan2 form stays accurate for nearly identical rotations.
    const Quaternion rel = a.conjugate() * b;
    const double v = Vec3(rel.x(), rel.y(), rel.z()).norm();
    return 2.0 * std::atan2(v, std::abs(rel.w()));
}

CameraPose
CameraPose::from_quaternion(const Quaternion &q, const Vec3 &translation) {
    return {rotation_from_quaternion(q), translation};
}

CameraPose
CameraPose::inverse() const {
    const Mat3 rt = rotation.transpose();
    return {rt, -rt * translation};
}

CameraPose
CameraPose::operator*(const CameraPose &rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
}

Mat4
CameraPose::matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
}

Mat3
skew(const Vec3 &v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return m;
}

Mat3
rotation_from_quaternion(const Vec4 &wxyz) {
    return rotation_from_quaternion(Quaternion(wxyz));
}

Mat3
rotation_from_quaternion(const Quaternion &q) {
    const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
    Mat3 r;
    r << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
        2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
        2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y);
    return r;
}

Mat3
exp_so3(const Vec3 &omega) {
    const double theta2 = omega.squaredNorm();
    const double theta = std::sqrt(theta2);
    double a, b;
    if (theta < kExpTaylorThreshold) {
        a = 1.0 - theta2 / 6.0;
        b = 0.5 - theta2 / 24.0;
    } else {
        a = std::sin(theta) / theta;
        b = (1.0 - std::cos(theta)) / theta2;
    }
    const Mat3 k = skew(omega);
    return Mat3::Identity() + a * k + b * (k * k);
}

Vec3
log_so3(const Mat3 &r) {
    const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
    const double theta = std::acos(c);
    const Vec3 v(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
    if (theta < 1e-8) {
        return 0.5 * v;
    }
    if (M_PI - theta < 1e-6) {
        // Near a half turn the antisymmetric part vanishes; read the axis off
        // the symmetric part instead.
        const Mat3 s = 0.5 * (r + Mat3::Identity());
        int i = 0;
        s.diagonal().maxCoeff(&i);
        Vec3 axis = s.col(i) / std::sqrt(std::max(s(i, i), 1e-300));
        if (axis.dot(v) < 0.0) {
            axis = -axis;
        }
        return axis.normalized() * theta;
    }
    return v * (0.5 * theta / std::sin(theta));
}

Mat3
so3_left_jacobian(const Vec3 &omega) {
    const double theta2 = omega.squaredNorm();
    const double theta = std::sqrt(theta2);
    double a, b;
    if (theta < 1e-5) {
        a = 0.5 - theta2 / 24.0;
        b = 1.0 / 6.0 - theta2 / 120.0;
    } else {
        a = (1.0 - std::cos(theta)) / theta2;
        b = (theta - std::sin(theta)) / (theta2 * theta);
    }
    const Mat3 k = skew(omega);
    return Mat3::Identity() + a * k + b * (k * k);
}

Quaternion
slerp(const Quaternion &q0, const Quaternion &q1, double t) {
    const Vec4 a = q0.coeffs();
    Vec4 b = q1.coeffs();
    double d = a.dot(b);
    if (d < 0.0) {
        b = -b;
        d = -d;
    }
    d = std::min(d, 1.0);
    const double theta = std::acos(d);
    const double s = std::sin(theta);
    if (s < kSlerpLinearThreshold) {
        return Quaternion((1.0 - t) * a + t * b);
    }
    const double wa = std::sin((1.0 - t) * theta) / s;
    const double wb = std::sin(t * theta) / s;
    return Quaternion(wa * a + wb * b);
}

CameraPose
interpolate_pose(const CameraPose &from, const CameraPose &to, double t) {
    if (t == 0.0) {
        return from;
    }
    if (t == 1.0) {
        return to;
    }
    const Quaternion q = slerp(from.quaternion(), to.quaternion(), t);
    return {rotation_from_quaternion(q), (1.0 - t) * from.translation + t * to.translation};
}

CameraPose
apply_pose_delta(const PoseDelta &delta, const CameraPose &pose) {
    if (delta.is_zero()) {
        return pose;
    }
    const Mat3 e = exp_so3(delta.omega);
    return {e * pose.rotation, e * pose.translation + delta.tau};
}

bool
is_rotation(const Mat3 &m, double tolerance) {
    if (!m.allFinite()) {
        return false;
    }
    return (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() <= tolerance &&
           std::abs(m.determinant() - 1.0) <= tolerance;
}

} // namespace splatpose
