#pragma once

#include <array>

#include "morphquad/so3.hpp"

namespace morph {

/// Physical vehicle description. Arms are numbered so that arm 1 sits at
/// (+lx, +ly), arm 2 at (+lx, -ly), arm 3 at (-lx, -ly) and arm 4 at
/// (-lx, +ly), all at height arm_height_offset.
struct VehicleParams {
  double mass = 4.0;                      // kg
  Mat3 inertia = Eigen::Vector3d(0.08, 0.08, 0.12).asDiagonal();  // kg m^2
  double thrust_coeff = 1e-5;             // N s^2 / rad^2
  double arm_half_length = 0.25;          // lx, m
  double arm_half_breadth = 0.25;         // ly, m
  double arm_height_offset = 0.0;         // lz, m
  double thrust_max = 20.0;               // per-arm thrust limit, N
  double rotor_speed_max = 0.0;           // rad/s; 0 means derive from thrust_max
  double servo_rate_max = 10.0;           // rad/s
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);   // world frame, m/s^2

  /// Distance from the center of mass to each arm in the i-j plane.
  double arm_radius() const;

  /// Body-frame position of arm i (0-based).
  Vec3 arm_position(int arm) const;

  /// Effective rotor speed limit; sqrt(thrust_max / thrust_coeff) unless
  /// rotor_speed_max is set explicitly.
  double rotor_speed_limit() const;

  /// Largest eigenvalue of the inertia matrix.
  double max_inertia_eigenvalue() const;
};

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const VehicleParams& params);

/// One arm's actuator command: tilt angles and rotor pair speed.
struct ArmCommand {
  double alpha = 0.0;  // rad, about the body j axis, in (-pi, pi]
  double beta = 0.0;   // rad, about the propeller i axis, in [-pi/2, pi/2]
  double omega = 0.0;  // rad/s, >= 0
};

using ArmCommandSet = std::array<ArmCommand, 4>;

/// Body-frame force/torque pair.
struct Wrench {
  Vec3 force = Vec3::Zero();   // N
  Vec3 torque = Vec3::Zero();  // N m

  Eigen::Matrix<double, 6, 1> stacked() const;
  double norm() const { return stacked().norm(); }
};

/// Body-to-propeller rotation R_j(alpha) * R_i(beta).
Mat3 propeller_rotation(double alpha, double beta);

/// Unit thrust direction (sin a cos b, -sin b, cos a cos b) in the body frame.
Vec3 thrust_direction(double alpha, double beta);

/// Thrust vector of one arm, magnitude c_t * omega^2 along the tilted axis.
Vec3 arm_thrust_vector(const ArmCommand& cmd, const VehicleParams& params);

/// Net body wrench of all four arms: f = sum t_i, tau = sum l_i x t_i.
Wrench forward_wrench(const ArmCommandSet& cmds, const VehicleParams& params);

/// The 6x4 map from squared rotor speeds to the wrench (divided by c_t):
/// forward_wrench == thrust_coeff * matrix * omega_squared.
Eigen::Matrix<double, 6, 4> wrench_map_matrix(const std::array<double, 4>& alphas,
                                              const std::array<double, 4>& betas,
                                              const VehicleParams& params);

}  // namespace morph
