#pragma once

#include <array>
#include <vector>

#include "morphquad/vehicle.hpp"

namespace morph {

/// Per-arm body-frame thrust vectors.
struct ThrustSet {
  std::array<Vec3, 4> thrust{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};

  /// 0.5 * sum of squared thrust norms (the allocation energy cost).
  double energy() const;
  double max_norm() const;
};

/// Wrench produced by a thrust set under the arm geometry (the linear map M).
Wrench thrust_set_wrench(const ThrustSet& ts, const VehicleParams& params);

/// Unit vectors in the i-j plane along which each arm contributes yaw
/// torque. Opposite arms carry opposite vectors and every l_i x t_hat_i
/// has z-component equal to the arm radius.
std::array<Vec3, 4> yaw_basis(const VehicleParams& params);

/// Closed-form decomposition of a wrench into per-arm thrusts: equal force
/// split plus vertical roll/pitch differentials plus in-plane yaw
/// components. Exact and minimum-energy for the planar symmetric layout;
/// throws std::invalid_argument when arm_height_offset != 0.
ThrustSet allocate_wrench(const Wrench& w, const VehicleParams& params);

/// Least-squares reference: t = M^T (M M^T)^{-1} w solved by dense linear
/// algebra over the stacked 6x12 geometry map. Independent of the
/// closed-form route. Throws std::domain_error on rank-deficient geometry.
ThrustSet minimum_norm_oracle(const Wrench& w, const VehicleParams& params);

/// Inverts a thrust vector into servo angles and rotor speed. Zero thrust
/// maps to all-zero command. Throws std::invalid_argument when the thrust
/// direction is inconsistent (|t_x| exceeding |cos beta| beyond rounding).
ArmCommand extract_arm_command(const Vec3& thrust, const VehicleParams& params);

struct AllocationResult {
  ThrustSet thrusts;
  bool fallback_active = false;
};

/// Allocation with the hybrid yaw strategy: when the nominal solution
/// would tilt any arm within `gimbal_eps` of beta = +-pi/2, the yaw torque
/// is instead produced by thrust-magnitude differentials along the body j
/// axis (arms on +x gain, arms on -x lose).
AllocationResult allocate_with_gimbal_fallback(const Wrench& w,
                                               const VehicleParams& params,
                                               double gimbal_eps = 0.1);

struct SaturationReport {
  bool saturated = false;
  double scale = 1.0;           // factor applied to every thrust
  double max_norm_before = 0.0; // largest per-arm thrust before scaling
};

/// Uniformly scales the whole set down when any thrust exceeds the per-arm
/// limit, preserving the wrench direction.
std::pair<ThrustSet, SaturationReport> saturate_thrust_set(const ThrustSet& ts,
                                                           const VehicleParams& params);

struct EnvelopeSample {
  Vec3 direction = Vec3::Zero();
  double max_magnitude = 0.0;
};

struct EnvelopeResult {
  std::vector<EnvelopeSample> samples;
  double min_magnitude = 0.0;
  double max_magnitude = 0.0;
  double ratio = 0.0;  // min / max
};

/// Quasi-uniform unit directions (Fibonacci sphere lattice).
std::vector<Vec3> fibonacci_sphere(int n_dirs);

/// Largest feasible pure-force magnitude per direction (torque zero),
/// found by bisection on the per-arm thrust limit.
EnvelopeResult force_envelope(const VehicleParams& params, int n_dirs);

/// Largest feasible pure-torque magnitude per direction (force zero).
EnvelopeResult torque_envelope(const VehicleParams& params, int n_dirs);

}  // namespace morph
