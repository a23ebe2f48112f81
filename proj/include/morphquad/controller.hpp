#pragma once

#include "morphquad/state.hpp"
#include "morphquad/vehicle.hpp"

namespace morph {

/// Positive PD gains for the position and attitude loops.
struct GainSet {
  double kp = 16.0;
  double kv = 5.6;
  double kR = 8.81;
  double kw = 2.54;
};

/// Throws std::invalid_argument unless every gain is strictly positive.
void validate(const GainSet& gains);

struct TrackingError {
  Vec3 e_p = Vec3::Zero();  // m
  Vec3 e_v = Vec3::Zero();  // m/s
  Vec3 e_R = Vec3::Zero();  // attitude error vector
  Vec3 e_w = Vec3::Zero();  // rad/s
};

/// e_p = p - p_d, e_v = v - v_d, e_R = 0.5 (Rd^T R - R^T Rd)^vee,
/// e_w = w - R^T Rd w_d.
TrackingError compute_errors(const RigidState& state, const ReferenceSample& ref);

/// Desired body-frame wrench of the geometric tracking controller:
///   f_d  = R^T (-kp e_p - kv e_v - m g + m a_d)
///   tau_d = -kR e_R - kw e_w + w x J w - J (w x R^T Rd w_d - R^T Rd wdot_d)
Wrench control_wrench(const RigidState& state, const ReferenceSample& ref,
                      const GainSet& gains, const VehicleParams& params);

/// Time derivatives of the closed-loop tracking errors under ideal
/// actuation, used to cross-check the controller against simulation.
struct ErrorRates {
  Vec3 e_p_dot = Vec3::Zero();
  Vec3 e_v_dot = Vec3::Zero();
  Vec3 e_R_dot = Vec3::Zero();
  Vec3 e_w_dot = Vec3::Zero();
};

ErrorRates error_dynamics_rhs(const TrackingError& err, const RigidState& state,
                              const ReferenceSample& ref, const GainSet& gains,
                              const VehicleParams& params);

/// Region-of-attraction test: psi < 2 and |e_w|^2 < (2 kR / lambda_max(J)) (2 - psi),
/// both strict. Margins are reported alongside the verdict.
struct RoaCheck {
  bool inside = false;
  double psi = 0.0;
  double psi_margin = 0.0;     // 2 - psi
  double e_w_sq = 0.0;         // |e_w|^2
  double e_w_bound_sq = 0.0;   // right-hand side of the velocity condition
  double e_w_margin = 0.0;     // bound - |e_w|^2
};

RoaCheck in_region_of_attraction(const RigidState& state, const ReferenceSample& ref,
                                 const GainSet& gains, const VehicleParams& params);

}  // namespace morph
