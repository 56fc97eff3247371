// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/geometry.hpp>
#include <splatpose/pose_io.hpp>

#include <vector>

namespace splatpose {

/// Ordered world-to-camera poses with their frame ids.
struct Trajectory {
    std::vector<int> ids;
    std::vector<CameraPose> poses;

    std::size_t
    size() const {
        return poses.size();
    }
    std::vector<Vec3> centers() const;

    static Trajectory from_entries(const std::vector<PoseEntry> &entries);
};

/// x -> scale * rotation * x + translation.
struct Similarity {
    double scale = 1.0;
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3 &x) const;
    Similarity inverse() const;
    /// Moves a world-to-camera pose into the target frame: same camera,
    /// world coordinates transformed by this similarity.
    CameraPose apply(const CameraPose &world_to_camera) const;
};

/// Least-squares similarity taking the estimated camera centers onto the
/// ground truth (Umeyama). Collinear centers are accepted; the rotation about
/// the common line is then arbitrary but the residual is still optimal.
/// Throws AlignmentError for fewer than 3 poses, mismatched ids, or centers
/// without spread.
Similarity align_trajectories(const Trajectory &est, const Trajectory &gt);

/// RMSE of camera-center distances after similarity alignment, in ground
/// truth units.
double ate(const Trajectory &est, const Trajectory &gt);

struct RelativePoseError {
    double translation = 0.0; ///< RMSE of relative translation norms, times 100
    double rotation = 0.0;    ///< RMSE of relative rotation angles, degrees
};

/// Relative pose error over frame pairs (i, i + delta) after similarity
/// alignment of est onto gt.
RelativePoseError rpe(const Trajectory &est, const Trajectory &gt, int delta = 1);

/// Rotation angle of a rotation matrix in radians, from the sine (axial
/// part) and cosine (trace) together. Accurate near 0 and near pi, where
/// acos of the trace alone loses half the digits.
double rotation_angle(const Mat3 &rotation);

/// Mean geodesic angle between corresponding rotations, in degrees.
double mean_rotation_error_deg(const std::vector<CameraPose> &est,
                               const std::vector<CameraPose> &gt);

/// mean_rotation_error_deg after moving est into the gt frame with
/// align_trajectories, which removes the global gauge of a joint
/// reconstruction.
double aligned_rotation_error_deg(const Trajectory &est, const Trajectory &gt);

/// Global rotation Q that best maps est orientations onto gt, i.e. the
/// maximizer of sum_i tr(Q R_est_i^T R_gt_i) over SO(3). Poses are
/// world-to-camera, so est_i is compared against gt_i through R_est_i Q^T.
Mat3 rotation_gauge(const std::vector<CameraPose> &est, const std::vector<CameraPose> &gt);

/// mean_rotation_error_deg after removing only the global rotation gauge.
/// Unlike aligned_rotation_error_deg it does not depend on how well the
/// camera centers pin down the alignment.
double gauge_rotation_error_deg(const std::vector<CameraPose> &est,
                                const std::vector<CameraPose> &gt);

} // namespace splatpose
