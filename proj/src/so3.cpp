#include "morphquad/so3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace morph::so3 {

namespace {
constexpr double kSmallAngle = 1e-6;

double clamp_unit(double x) { return std::max(-1.0, std::min(1.0, x)); }
}  // namespace

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m, double tol) {
  const Mat3 sym = 0.5 * (m + m.transpose());
  if (sym.cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("vee: matrix is not antisymmetric within tolerance");
  }
  const Mat3 a = 0.5 * (m - m.transpose());
  return Vec3(a(2, 1), a(0, 2), a(1, 0));
}

Mat3 exp(const Vec3& rotation_vector) {
  const double angle = rotation_vector.norm();
  const Mat3 k = hat(rotation_vector);
  if (angle < kSmallAngle) {
    return Mat3::Identity() + k + 0.5 * k * k;
  }
  const double s = std::sin(angle) / angle;
  const double c = (1.0 - std::cos(angle)) / (angle * angle);
  return Mat3::Identity() + s * k + c * k * k;
}

Vec3 log(const Mat3& rotation) {
  const double cos_angle = clamp_unit(0.5 * (rotation.trace() - 1.0));
  const double angle = std::acos(cos_angle);
  if (angle < kSmallAngle) {
    const Mat3 a = 0.5 * (rotation - rotation.transpose());
    return Vec3(a(2, 1), a(0, 2), a(1, 0));
  }
  if (angle > M_PI - 1e-6) {
    // Near pi the antisymmetric part vanishes; recover the axis from the
    // dominant column of R + I.
    const Mat3 b = rotation + Mat3::Identity();
    int col = 0;
    b.colwise().norm().maxCoeff(&col);
    Vec3 axis = b.col(col).normalized();
    // Fix the sign using the off-diagonal antisymmetric remainder.
    const Mat3 a = 0.5 * (rotation - rotation.transpose());
    const Vec3 w(a(2, 1), a(0, 2), a(1, 0));
    if (w.dot(axis) < 0.0) axis = -axis;
    return angle * axis;
  }
  const Mat3 a = 0.5 * (rotation - rotation.transpose());
  const Vec3 w(a(2, 1), a(0, 2), a(1, 0));
  return (angle / std::sin(angle)) * w;
}

double psi_error(const Mat3& rotation, const Mat3& rotation_desired) {
  const double psi = 0.5 * (3.0 - (rotation_desired.transpose() * rotation).trace());
  return std::max(0.0, psi);
}

double orthonormality_defect(const Mat3& rotation) {
  const Mat3 gram = rotation.transpose() * rotation - Mat3::Identity();
  return gram.cwiseAbs().maxCoeff() + std::abs(rotation.determinant() - 1.0);
}

bool is_rotation(const Mat3& rotation, double tol) {
  return orthonormality_defect(rotation) <= 2.0 * tol;
}

Mat3 project(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

Mat3 rot_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return m;
}

Mat3 rot_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << c, 0, s,
       0, 1, 0,
      -s, 0, c;
  return m;
}

Mat3 rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return m;
}

Mat3 euler_zxy_to_rotation(double yaw, double roll, double pitch) {
  return rot_z(yaw) * rot_x(roll) * rot_y(pitch);
}

EulerZxy rotation_to_euler_zxy(const Mat3& r) {
  EulerZxy e;
  const double s_roll = clamp_unit(r(2, 1));
  e.roll = std::asin(s_roll);
  if (std::abs(s_roll) > 1.0 - 1e-9) {
    e.degenerate = true;
    e.pitch = 0.0;
    e.yaw = std::atan2(r(1, 0), r(0, 0));
    return e;
  }
  e.pitch = std::atan2(-r(2, 0), r(2, 2));
  e.yaw = std::atan2(-r(0, 1), r(1, 1));
  return e;
}

}  // namespace morph::so3
