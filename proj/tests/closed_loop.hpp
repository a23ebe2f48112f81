#pragma once

// Test-only continuous-feedback integrator: RK4 on the rigid-body dynamics
// with the control wrench recomputed at every stage. This integrates the
// ideal closed-loop ODE itself, as opposed to the simulator's per-step
// zero-order hold, and is what the error-dynamics checks difference.

#include <functional>

#include "morphquad/controller.hpp"
#include "morphquad/state.hpp"

namespace morph::testing {

using RefFn = std::function<ReferenceSample(double)>;

struct StateDeriv {
  Vec3 dp, dv, dth, dw;
};

inline StateDeriv closed_loop_deriv(const RigidState& state, const ReferenceSample& ref,
                                    const GainSet& gains, const VehicleParams& params) {
  const Wrench w = control_wrench(state, ref, gains, params);
  StateDeriv d;
  d.dp = state.velocity;
  d.dv = params.gravity + state.rotation * w.force / params.mass;
  d.dth = state.angular_velocity;
  d.dw = params.inertia.inverse() *
         (w.torque - state.angular_velocity.cross(params.inertia * state.angular_velocity));
  return d;
}

inline RigidState closed_loop_step(const RigidState& state, double t, double dt,
                                   const RefFn& ref, const GainSet& gains,
                                   const VehicleParams& params) {
  const auto advance = [&](const StateDeriv& k, double h) {
    RigidState s;
    s.position = state.position + h * k.dp;
    s.velocity = state.velocity + h * k.dv;
    s.rotation = state.rotation * so3::exp(h * k.dth);
    s.angular_velocity = state.angular_velocity + h * k.dw;
    return s;
  };

  const StateDeriv k1 = closed_loop_deriv(state, ref(t), gains, params);
  const StateDeriv k2 =
      closed_loop_deriv(advance(k1, 0.5 * dt), ref(t + 0.5 * dt), gains, params);
  const StateDeriv k3 =
      closed_loop_deriv(advance(k2, 0.5 * dt), ref(t + 0.5 * dt), gains, params);
  const StateDeriv k4 = closed_loop_deriv(advance(k3, dt), ref(t + dt), gains, params);

  RigidState next;
  next.position =
      state.position + dt / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  next.velocity =
      state.velocity + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
  next.angular_velocity = state.angular_velocity +
                          dt / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw);
  next.rotation = state.rotation *
                  so3::exp(dt / 6.0 * (k1.dth + 2.0 * k2.dth + 2.0 * k3.dth + k4.dth));
  if (so3::orthonormality_defect(next.rotation) > 1e-9) {
    next.rotation = so3::project(next.rotation);
  }
  return next;
}

}  // namespace morph::testing
