#include "morphquad/controller.hpp"

#include <stdexcept>

namespace morph {

void validate(const GainSet& gains) {
  if (!(gains.kp > 0.0 && gains.kv > 0.0 && gains.kR > 0.0 && gains.kw > 0.0)) {
    throw std::invalid_argument("gains: all control gains must be strictly positive");
  }
}

TrackingError compute_errors(const RigidState& state, const ReferenceSample& ref) {
  TrackingError err;
  err.e_p = state.position - ref.position;
  err.e_v = state.velocity - ref.velocity;
  const Mat3 rel = ref.rotation.transpose() * state.rotation;
  const Mat3 skew = rel - rel.transpose();
  err.e_R = 0.5 * Vec3(skew(2, 1), skew(0, 2), skew(1, 0));
  err.e_w = state.angular_velocity -
            rel.transpose() * ref.angular_velocity;
  return err;
}

Wrench control_wrench(const RigidState& state, const ReferenceSample& ref,
                      const GainSet& gains, const VehicleParams& params) {
  const TrackingError err = compute_errors(state, ref);
  const Mat3& r = state.rotation;
  const Mat3 rel = r.transpose() * ref.rotation;  // R^T Rd
  const Vec3& w = state.angular_velocity;

  Wrench out;
  out.force = r.transpose() * (-gains.kp * err.e_p - gains.kv * err.e_v -
                               params.mass * params.gravity +
                               params.mass * ref.acceleration);
  out.torque = -gains.kR * err.e_R - gains.kw * err.e_w +
               w.cross(params.inertia * w) -
               params.inertia * (w.cross(rel * ref.angular_velocity) -
                                 rel * ref.angular_acceleration);
  return out;
}

ErrorRates error_dynamics_rhs(const TrackingError& err, const RigidState& state,
                              const ReferenceSample& ref, const GainSet& gains,
                              const VehicleParams& params) {
  ErrorRates rates;
  rates.e_p_dot = err.e_v;
  rates.e_v_dot = (-gains.kp * err.e_p - gains.kv * err.e_v) / params.mass;
  const Mat3 rel = state.rotation.transpose() * ref.rotation;  // R^T Rd
  rates.e_R_dot = 0.5 * (rel.trace() * Mat3::Identity() - rel) * err.e_w;
  rates.e_w_dot = params.inertia.ldlt().solve(-gains.kR * err.e_R - gains.kw * err.e_w);
  return rates;
}

RoaCheck in_region_of_attraction(const RigidState& state, const ReferenceSample& ref,
                                 const GainSet& gains, const VehicleParams& params) {
  RoaCheck check;
  check.psi = so3::psi_error(state.rotation, ref.rotation);
  check.psi_margin = 2.0 - check.psi;
  const TrackingError err = compute_errors(state, ref);
  check.e_w_sq = err.e_w.squaredNorm();
  check.e_w_bound_sq =
      2.0 * gains.kR / params.max_inertia_eigenvalue() * (2.0 - check.psi);
  check.e_w_margin = check.e_w_bound_sq - check.e_w_sq;
  check.inside = check.psi < 2.0 && check.e_w_sq < check.e_w_bound_sq;
  return check;
}

}  // namespace morph
