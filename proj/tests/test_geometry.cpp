// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <splatpose/error.hpp>
#include <splatpose/geometry.hpp>

#include <gtest/gtest.h>

using namespace splatpose;
using splatpose::testing::Gen;
using splatpose::testing::rotation_distance;

TEST(Quaternion, NormalizesAndKeepsNonNegativeW) {
    const Quaternion q(-2.0, 0.0, 0.0, 0.0);
    EXPECT_DOUBLE_EQ(q.w(), 1.0);
    EXPECT_DOUBLE_EQ(q.x(), 0.0);
    const Quaternion r(-1.0, 1.0, -1.0, 1.0);
    EXPECT_NEAR(r.coeffs().norm(), 1.0, 1e-15);
    EXPECT_GE(r.w(), 0.0);
    EXPECT_DOUBLE_EQ(r.x(), -0.5);
}

TEST(Quaternion, RejectsZeroAndNonFinite) {
    EXPECT_THROW(Quaternion(0.0, 0.0, 0.0, 0.0), InvalidInput);
    EXPECT_THROW(Quaternion(std::nan(""), 0.0, 0.0, 1.0), InvalidInput);
    EXPECT_THROW(rotation_from_quaternion(Vec4::Zero()), InvalidInput);
}

TEST(Quaternion, RotationMatricesAreOrthonormal) {
    Gen gen(11);
    for (int i = 0; i < 500; ++i) {
        const Mat3 r = rotation_from_quaternion(gen.quaternion());
        EXPECT_TRUE(is_rotation(r, 1e-12));
    }
}

TEST(Quaternion, MatrixRoundTrip) {
    Gen gen(12);
    for (int i = 0; i < 500; ++i) {
        const Quaternion q = gen.quaternion();
        const Quaternion back = Quaternion::from_rotation(rotation_from_quaternion(q));
        EXPECT_NEAR(std::abs(q.dot(back)), 1.0, 1e-12);
    }
}

TEST(Quaternion, ProductMatchesMatrixProduct) {
    Gen gen(13);
    for (int i = 0; i < 200; ++i) {
        const Quaternion a = gen.quaternion();
        const Quaternion b = gen.quaternion();
        const Mat3 expect = rotation_from_quaternion(a) * rotation_from_quaternion(b);
        EXPECT_LT((rotation_from_quaternion(a * b) - expect).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Quaternion, AngleBetweenKnownValues) {
    const Quaternion a = Quaternion::identity();
    const Quaternion b = Quaternion::from_axis_angle(Vec3::UnitZ(), 0.3);
    EXPECT_NEAR(angle_between(a, b), 0.3, 1e-15);
    EXPECT_NEAR(angle_between(b, a), 0.3, 1e-15);
    const Quaternion tiny = Quaternion::from_axis_angle(Vec3::UnitX(), 1e-9);
    EXPECT_NEAR(angle_between(a, tiny), 1e-9, 1e-20);
}

TEST(So3, ExpLogRoundTrip) {
    Gen gen(21);
    for (int i = 0; i < 500; ++i) {
        const double angle = gen.uniform(0.0, std::numbers::pi - 1e-3);
        const Vec3 omega = gen.unit_vector() * angle;
        const Mat3 r = exp_so3(omega);
        EXPECT_TRUE(is_rotation(r, 1e-12));
        EXPECT_LT((log_so3(r) - omega).norm(), 1e-9);
    }
}

TEST(So3, LogNearHalfTurnAndIdentity) {
    const Vec3 axis = Vec3(1.0, 2.0, -0.5).normalized();
    const Vec3 omega = axis * (std::numbers::pi - 1e-8);
    EXPECT_LT((log_so3(exp_so3(omega)) - omega).norm(), 1e-6);
    EXPECT_EQ(log_so3(Mat3::Identity()), Vec3::Zero());
    const Vec3 small(1e-10, -2e-10, 3e-10);
    EXPECT_LT((log_so3(exp_so3(small)) - small).norm(), 1e-20);
}

TEST(So3, ExpAgreesWithQuaternionAxisAngle) {
    Gen gen(22);
    for (int i = 0; i < 200; ++i) {
        const Vec3 axis = gen.unit_vector();
        const double angle = gen.uniform(-3.0, 3.0);
        const Mat3 a = exp_so3(axis * angle);
        const Mat3 b = rotation_from_quaternion(Quaternion::from_axis_angle(axis, angle));
        EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(So3, LeftJacobianFirstOrder) {
    Gen gen(23);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const Vec3 omega = gen.unit_vector() * gen.uniform(0.0, 2.5);
        const Vec3 d = gen.unit_vector();
        const Mat3 lhs = exp_so3(omega + h * d);
        const Mat3 rhs = exp_so3(h * so3_left_jacobian(omega) * d) * exp_so3(omega);
        EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Slerp, EndpointsAreExact) {
    Gen gen(31);
    for (int i = 0; i < 200; ++i) {
        const Quaternion a = gen.quaternion();
        const Quaternion b = gen.quaternion();
        EXPECT_LT(angle_between(slerp(a, b, 0.0), a), 1e-12);
        EXPECT_LT(angle_between(slerp(a, b, 1.0), b), 1e-12);
    }
}

TEST(Slerp, ConstantAngularVelocity) {
    Gen gen(32);
    for (int i = 0; i < 200; ++i) {
        const Quaternion a = gen.quaternion();
        const Quaternion b = gen.quaternion();
        const double total = angle_between(a, b);
        for (double t : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            const Quaternion q = slerp(a, b, t);
            EXPECT_NEAR(angle_between(a, q), t * total, 1e-9);
            EXPECT_NEAR(angle_between(q, b), (1.0 - t) * total, 1e-9);
        }
    }
}

TEST(Slerp, TakesTheShortArc) {
    const Quaternion a = Quaternion::identity();
    const Quaternion b = Quaternion::from_axis_angle(Vec3::UnitY(), 3.0);
    const Quaternion half = slerp(a, b, 0.5);
    EXPECT_NEAR(angle_between(a, half), 1.5, 1e-12);
    // The sign-flipped twin must interpolate the same way.
    const Quaternion b_neg(-b.w(), -b.x(), -b.y(), -b.z());
    EXPECT_NEAR(angle_between(slerp(a, b_neg, 0.5), half), 0.0, 1e-12);
}

TEST(Slerp, NearlyEqualInputsFallBackSmoothly) {
    const Quaternion a = Quaternion::from_axis_angle(Vec3::UnitX(), 0.2);
    const Quaternion b = Quaternion::from_axis_angle(Vec3::UnitX(), 0.2 + 1e-9);
    const Quaternion q = slerp(a, b, 0.5);
    EXPECT_NEAR(angle_between(a, q), 0.5e-9, 1e-12);
}

TEST(Pose, InterpolateEndpointsReturnInputs) {
    Gen gen(41);
    const CameraPose a = gen.pose();
    const CameraPose b = gen.pose();
    EXPECT_EQ(interpolate_pose(a, b, 0.0), a);
    EXPECT_EQ(interpolate_pose(a, b, 1.0), b);
    const CameraPose mid = interpolate_pose(a, b, 0.5);
    EXPECT_LT((mid.translation - 0.5 * (a.translation + b.translation)).norm(), 1e-15);
    EXPECT_TRUE(is_rotation(mid.rotation, 1e-12));
}

TEST(Pose, InverseAndComposition) {
    Gen gen(42);
    for (int i = 0; i < 100; ++i) {
        const CameraPose p = gen.pose();
        const CameraPose id = p * p.inverse();
        EXPECT_LT((id.rotation - Mat3::Identity()).norm(), 1e-12);
        EXPECT_LT(id.translation.norm(), 1e-12);
        const Vec3 x = gen.vec3(-3.0, 3.0);
        EXPECT_LT((p.inverse().transform(p.transform(x)) - x).norm(), 1e-12);
        EXPECT_LT(p.transform(p.center()).norm(), 1e-12);
    }
}

TEST(Pose, DeltaIsLeftComposition) {
    Gen gen(43);
    for (int i = 0; i < 100; ++i) {
        const CameraPose p = gen.pose();
        PoseDelta d;
        d.omega = gen.vec3(-0.5, 0.5);
        d.tau = gen.vec3(-0.5, 0.5);
        const CameraPose q = apply_pose_delta(d, p);
        const CameraPose expect = CameraPose{exp_so3(d.omega), d.tau} * p;
        EXPECT_LT((q.rotation - expect.rotation).norm(), 1e-14);
        EXPECT_LT((q.translation - expect.translation).norm(), 1e-14);
    }
    const CameraPose p = gen.pose();
    EXPECT_EQ(apply_pose_delta({}, p), p);
}

TEST(Pose, IsRotationRejectsReflectionsAndNaN) {
    Mat3 m = Mat3::Identity();
    m(0, 0) = -1.0;
    EXPECT_FALSE(is_rotation(m));
    m = Mat3::Identity() * 1.01;
    EXPECT_FALSE(is_rotation(m));
    m = Mat3::Identity();
    m(1, 2) = std::nan("");
    EXPECT_FALSE(is_rotation(m));
    EXPECT_TRUE(is_rotation(Mat3::Identity()));
}
