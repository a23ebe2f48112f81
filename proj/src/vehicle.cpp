#include "morphquad/vehicle.hpp"

#include <cmath>
#include <stdexcept>

namespace morph {

double VehicleParams::arm_radius() const {
  return std::hypot(arm_half_length, arm_half_breadth);
}

Vec3 VehicleParams::arm_position(int arm) const {
  const double lx = arm_half_length;
  const double ly = arm_half_breadth;
  const double lz = arm_height_offset;
  switch (arm) {
    case 0: return Vec3(lx, ly, lz);
    case 1: return Vec3(lx, -ly, lz);
    case 2: return Vec3(-lx, -ly, lz);
    case 3: return Vec3(-lx, ly, lz);
    default: throw std::out_of_range("arm_position: arm index must be 0..3");
  }
}

double VehicleParams::rotor_speed_limit() const {
  if (rotor_speed_max > 0.0) return rotor_speed_max;
  return std::sqrt(thrust_max / thrust_coeff);
}

double VehicleParams::max_inertia_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(inertia);
  return solver.eigenvalues().maxCoeff();
}

void validate(const VehicleParams& p) {
  if (!(p.mass > 0.0)) throw std::invalid_argument("vehicle: mass must be positive");
  if ((p.inertia - p.inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("vehicle: inertia matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> solver(p.inertia);
  if (!(solver.eigenvalues().minCoeff() > 0.0)) {
    throw std::invalid_argument("vehicle: inertia matrix must be positive definite");
  }
  if (!(p.thrust_coeff > 0.0)) throw std::invalid_argument("vehicle: thrust_coeff must be positive");
  if (!(p.arm_half_length > 0.0)) throw std::invalid_argument("vehicle: arm_half_length must be positive");
  if (!(p.arm_half_breadth > 0.0)) throw std::invalid_argument("vehicle: arm_half_breadth must be positive");
  if (!(p.thrust_max > 0.0)) throw std::invalid_argument("vehicle: thrust_max must be positive");
  if (p.rotor_speed_max < 0.0) throw std::invalid_argument("vehicle: rotor_speed_max must be non-negative");
  if (p.servo_rate_max < 0.0) throw std::invalid_argument("vehicle: servo_rate_max must be non-negative");
  if (!p.gravity.allFinite()) throw std::invalid_argument("vehicle: gravity must be finite");
}

Eigen::Matrix<double, 6, 1> Wrench::stacked() const {
  Eigen::Matrix<double, 6, 1> w;
  w << force, torque;
  return w;
}

Mat3 propeller_rotation(double alpha, double beta) {
  return so3::rot_y(alpha) * so3::rot_x(beta);
}

Vec3 thrust_direction(double alpha, double beta) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  return Vec3(sa * cb, -sb, ca * cb);
}

Vec3 arm_thrust_vector(const ArmCommand& cmd, const VehicleParams& params) {
  return params.thrust_coeff * cmd.omega * cmd.omega *
         thrust_direction(cmd.alpha, cmd.beta);
}

Wrench forward_wrench(const ArmCommandSet& cmds, const VehicleParams& params) {
  Wrench w;
  for (int i = 0; i < 4; ++i) {
    const Vec3 t = arm_thrust_vector(cmds[i], params);
    w.force += t;
    w.torque += params.arm_position(i).cross(t);
  }
  return w;
}

Eigen::Matrix<double, 6, 4> wrench_map_matrix(const std::array<double, 4>& alphas,
                                              const std::array<double, 4>& betas,
                                              const VehicleParams& params) {
  Eigen::Matrix<double, 6, 4> map;
  for (int i = 0; i < 4; ++i) {
    const Vec3 dir = thrust_direction(alphas[i], betas[i]);
    map.block<3, 1>(0, i) = dir;
    map.block<3, 1>(3, i) = params.arm_position(i).cross(dir);
  }
  return map;
}

}  // namespace morph
