// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace splatpose {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Unit quaternion stored as (w, x, y, z).
///
/// Every constructor normalizes and flips the sign so that w >= 0. The two
/// quaternions q and -q describe the same rotation, so the flip never changes
/// the rotation that is represented.
class Quaternion {
  public:
    Quaternion() = default;

    /// Throws InvalidInput on a non-finite or zero-norm input.
    Quaternion(double w, double x, double y, double z);
    explicit Quaternion(const Vec4 &wxyz);

    static Quaternion
    identity() {
        return {};
    }
    static Quaternion from_axis_angle(const Vec3 &axis, double angle);
    static Quaternion from_rotation(const Mat3 &rotation);

    double
    w() const {
        return w_;
    }
    double
    x() const {
        return x_;
    }
    double
    y() const {
        return y_;
    }
    double
    z() const {
        return z_;
    }
    Vec4
    coeffs() const {
        return {w_, x_, y_, z_};
    }

    double
    dot(const Quaternion &other) const {
        return w_ * other.w_ + x_ * other.x_ + y_ * other.y_ + z_ * other.z_;
    }

    Quaternion operator*(const Quaternion &rhs) const;
    Quaternion
    conjugate() const {
        return {w_, -x_, -y_, -z_};
    }

  private:
    double w_ = 1.0;
    double x_ = 0.0;
    double y_ = 0.0;
    double z_ = 0.0;
};

/// Rotation angle (radians, in [0, pi]) taking a to b.
double angle_between(const Quaternion &a, const Quaternion &b);

/// Rigid world-to-camera transform: x_cam = rotation * x_world + translation.
struct CameraPose {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static CameraPose from_quaternion(const Quaternion &q, const Vec3 &translation);

    Quaternion
    quaternion() const {
        return Quaternion::from_rotation(rotation);
    }
    /// Camera center in world coordinates.
    Vec3
    center() const {
        return -rotation.transpose() * translation;
    }
    Vec3
    transform(const Vec3 &world_point) const {
        return rotation * world_point + translation;
    }
    CameraPose inverse() const;
    /// (*this) after rhs, i.e. x -> this(rhs(x)).
    CameraPose operator*(const CameraPose &rhs) const;
    Mat4 matrix() const;

    bool
    operator==(const CameraPose &other) const {
        return rotation == other.rotation && translation == other.translation;
    }
};

/// Learnable pose correction in so(3) x t(3).
struct PoseDelta {
    Vec3 omega = Vec3::Zero(); ///< axis * angle, radians
    Vec3 tau = Vec3::Zero();   ///< translation correction, world units

    bool
    is_zero() const {
        return omega.isZero(0.0) && tau.isZero(0.0);
    }
};

Mat3 skew(const Vec3 &v);

/// Throws InvalidInput for a zero or non-finite quaternion.
Mat3 rotation_from_quaternion(const Vec4 &wxyz);
Mat3 rotation_from_quaternion(const Quaternion &q);

/// Rodrigues formula; second-order Taylor factors below 1e-8 rad.
Mat3 exp_so3(const Vec3 &omega);

/// Inverse of exp_so3 on the principal branch (angle in [0, pi]).
Vec3 log_so3(const Mat3 &rotation);

/// Left Jacobian of SO(3): exp(omega + d) ~= exp(J_l(omega) d) exp(omega).
Mat3 so3_left_jacobian(const Vec3 &omega);

/// Shortest-arc spherical linear interpolation at constant angular velocity.
/// Falls back to normalized lerp when sin(theta) < 1e-6.
Quaternion slerp(const Quaternion &q0, const Quaternion &q1, double t);

/// Rotation by slerp, translation by lerp. t = 0 and t = 1 return the
/// endpoints unchanged.
CameraPose interpolate_pose(const CameraPose &from, const CameraPose &to, double t);

/// Left composition: R' = exp(omega) R, t' = exp(omega) t + tau.
CameraPose apply_pose_delta(const PoseDelta &delta, const CameraPose &pose);

/// Orthonormality check used by parsers and tests.
bool is_rotation(const Mat3 &m, double tolerance = 1e-10);

} // namespace splatpose
