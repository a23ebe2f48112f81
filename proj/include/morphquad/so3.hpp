#pragma once

#include <Eigen/Dense>

namespace morph {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

namespace so3 {

/// Skew-symmetric matrix of v, so that hat(v) * w == v.cross(w).
Mat3 hat(const Vec3& v);

/// Inverse of hat. The input is antisymmetrized before extraction;
/// throws std::invalid_argument if its symmetric part exceeds `tol`.
Vec3 vee(const Mat3& m, double tol = 1e-9);

/// Rodrigues exponential map. Falls back to a Taylor expansion below
/// the small-angle threshold to avoid dividing by a vanishing norm.
Mat3 exp(const Vec3& rotation_vector);

/// Logarithm map: rotation matrix -> rotation vector with angle in [0, pi].
Vec3 log(const Mat3& rotation);

/// Attitude error function, 0.5 * tr(I - Rd^T R). Ranges from 0 (aligned)
/// to 2 (rotated 180 degrees about any axis).
double psi_error(const Mat3& rotation, const Mat3& rotation_desired);

/// Max abs entry of R^T R - I plus the determinant defect.
double orthonormality_defect(const Mat3& rotation);

bool is_rotation(const Mat3& rotation, double tol = 1e-9);

/// Nearest rotation matrix in the Frobenius sense (polar projection).
Mat3 project(const Mat3& m);

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// Z-X-Y intrinsic Euler angles: yaw about z, then roll about x, then
/// pitch about y.
struct EulerZxy {
  double yaw = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  /// True when |roll| is at the +-pi/2 singularity and yaw/pitch are not
  /// individually recoverable (pitch is then reported as 0).
  bool degenerate = false;
};

Mat3 euler_zxy_to_rotation(double yaw, double roll, double pitch);
EulerZxy rotation_to_euler_zxy(const Mat3& rotation);

}  // namespace so3
}  // namespace morph
