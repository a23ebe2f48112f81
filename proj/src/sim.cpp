#include "morphquad/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace morph {

void validate(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("sim: dt must be positive");
  if (!(cfg.duration >= cfg.dt)) throw std::invalid_argument("sim: duration must be >= dt");
  if (!(cfg.servo_tau > 0.0)) throw std::invalid_argument("sim: servo_tau must be positive");
  if (!(cfg.rotor_tau > 0.0)) throw std::invalid_argument("sim: rotor_tau must be positive");
  if (!(cfg.gimbal_eps >= 0.0)) throw std::invalid_argument("sim: gimbal_eps must be non-negative");
  if (!(cfg.divergence_bound > 0.0)) {
    throw std::invalid_argument("sim: divergence_bound must be positive");
  }
}

namespace {

struct Deriv {
  Vec3 dp, dv, dth, dw;
};

Deriv dynamics(const Vec3& v, const Mat3& rotation, const Vec3& w,
               const Wrench& applied, const VehicleParams& params,
               const Mat3& inertia_inv) {
  Deriv d;
  d.dp = v;
  d.dv = params.gravity + rotation * applied.force / params.mass;
  d.dth = w;
  d.dw = inertia_inv * (applied.torque - w.cross(params.inertia * w));
  return d;
}

/// Nearest representative of `angle` modulo 2*pi to `reference`.
double unwrap_near(double angle, double reference) {
  const double two_pi = 2.0 * M_PI;
  return angle + two_pi * std::round((reference - angle) / two_pi);
}

}  // namespace

RigidState step(const RigidState& state, const Wrench& applied,
                const VehicleParams& params, double dt) {
  const Mat3 inertia_inv = params.inertia.inverse();
  const Mat3& r0 = state.rotation;

  const Deriv k1 = dynamics(state.velocity, r0, state.angular_velocity, applied,
                            params, inertia_inv);
  const Deriv k2 = dynamics(state.velocity + 0.5 * dt * k1.dv,
                            r0 * so3::exp(0.5 * dt * k1.dth),
                            state.angular_velocity + 0.5 * dt * k1.dw, applied,
                            params, inertia_inv);
  const Deriv k3 = dynamics(state.velocity + 0.5 * dt * k2.dv,
                            r0 * so3::exp(0.5 * dt * k2.dth),
                            state.angular_velocity + 0.5 * dt * k2.dw, applied,
                            params, inertia_inv);
  const Deriv k4 = dynamics(state.velocity + dt * k3.dv, r0 * so3::exp(dt * k3.dth),
                            state.angular_velocity + dt * k3.dw, applied, params,
                            inertia_inv);

  RigidState next;
  next.position = state.position + dt / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  next.velocity = state.velocity + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
  next.angular_velocity =
      state.angular_velocity + dt / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw);
  const Vec3 mean_rate = (k1.dth + 2.0 * k2.dth + 2.0 * k3.dth + k4.dth) / 6.0;
  next.rotation = r0 * so3::exp(dt * mean_rate);

  if (so3::orthonormality_defect(next.rotation) > 1e-9) {
    next.rotation = so3::project(next.rotation);
  }
  if (!next.all_finite()) {
    throw std::runtime_error("step: state became non-finite");
  }
  return next;
}

RigidState initial_state_from_reference(const Trajectory& trajectory) {
  const ReferenceSample ref = trajectory.sample(0.0);
  RigidState state;
  state.position = ref.position;
  state.velocity = ref.velocity;
  state.rotation = ref.rotation;
  state.angular_velocity = ref.angular_velocity;
  return state;
}

SimResult run_scenario(const SimConfig& cfg, const VehicleParams& params,
                       const GainSet& gains, const Trajectory& trajectory,
                       const std::optional<RigidState>& initial) {
  validate(cfg);
  validate(params);
  validate(gains);

  const long n_steps = std::lround(cfg.duration / cfg.dt);
  SimResult result;
  result.records.reserve(n_steps);

  RigidState state = initial ? *initial : initial_state_from_reference(trajectory);
  ActuatorState actuators;
  const double rotor_limit = params.rotor_speed_limit();
  const bool skip_allocation = cfg.detail == TelemetryDetail::ErrorsOnly &&
                               cfg.actuator_mode == ActuatorMode::IdealWrench;

  for (long k = 0; k < n_steps; ++k) {
    const double t = k * cfg.dt;
    const ReferenceSample ref = trajectory.sample(t);

    TelemetryRecord rec;
    rec.t = t;
    rec.state = state;
    rec.ref = ref;
    rec.psi = so3::psi_error(state.rotation, ref.rotation);
    rec.ep_norm = (state.position - ref.position).norm();
    rec.commanded = control_wrench(state, ref, gains, params);

    if (skip_allocation) {
      rec.applied = rec.commanded;
    } else {
      const AllocationResult alloc =
          allocate_with_gimbal_fallback(rec.commanded, params, cfg.gimbal_eps);
      const auto [thrusts, sat] = saturate_thrust_set(alloc.thrusts, params);
      rec.fallback_active = alloc.fallback_active;
      rec.sat_scale = sat.scale;
      rec.saturated = sat.saturated;
      rec.energy = thrusts.energy();
      if (cfg.detail == TelemetryDetail::Full) {
        rec.oracle_energy = minimum_norm_oracle(rec.commanded, params).energy();
      }
      if (sat.saturated) ++result.saturated_steps;

      ArmCommandSet cmds;
      for (int i = 0; i < 4; ++i) {
        cmds[i] = extract_arm_command(thrusts.thrust[i], params);
      }

      if (!actuators.initialized) {
        for (int i = 0; i < 4; ++i) {
          actuators.alpha[i] = actuators.alpha_target[i] = cmds[i].alpha;
          actuators.beta[i] = actuators.beta_target[i] = cmds[i].beta;
          actuators.omega[i] = actuators.omega_target[i] =
              std::min(cmds[i].omega, rotor_limit);
        }
        actuators.initialized = true;
      }

      // Unwrap the servo target so each arm takes the short way around.
      for (int i = 0; i < 4; ++i) {
        actuators.alpha_target[i] = unwrap_near(cmds[i].alpha, actuators.alpha[i]);
        actuators.beta_target[i] = cmds[i].beta;
        actuators.omega_target[i] = std::min(cmds[i].omega, rotor_limit);
      }

      if (cfg.actuator_mode == ActuatorMode::RateLimitedActuators) {
        const double servo_gain = 1.0 - std::exp(-cfg.dt / cfg.servo_tau);
        const double rotor_gain = 1.0 - std::exp(-cfg.dt / cfg.rotor_tau);
        const double max_travel = params.servo_rate_max * cfg.dt;
        for (int i = 0; i < 4; ++i) {
          double da = (actuators.alpha_target[i] - actuators.alpha[i]) * servo_gain;
          double db = (actuators.beta_target[i] - actuators.beta[i]) * servo_gain;
          if (params.servo_rate_max > 0.0) {
            da = std::clamp(da, -max_travel, max_travel);
            db = std::clamp(db, -max_travel, max_travel);
          }
          actuators.alpha[i] += da;
          actuators.beta[i] += db;
          actuators.omega[i] +=
              (actuators.omega_target[i] - actuators.omega[i]) * rotor_gain;
          actuators.omega[i] = std::clamp(actuators.omega[i], 0.0, rotor_limit);
        }
      } else {
        actuators.alpha = actuators.alpha_target;
        actuators.beta = actuators.beta_target;
        actuators.omega = actuators.omega_target;
      }

      for (int i = 0; i < 4; ++i) {
        rec.commands[i] = ArmCommand{actuators.alpha[i], actuators.beta[i],
                                     actuators.omega[i]};
      }
      rec.applied = cfg.actuator_mode == ActuatorMode::IdealWrench
                        ? rec.commanded
                        : forward_wrench(rec.commands, params);
    }

    if (const auto target = trajectory.aim_target(t)) {
      const Vec3 to_target = *target - state.position;
      if (to_target.norm() > 1e-9) {
        const Vec3 camera = state.rotation.col(0);
        const double cos_err =
            std::clamp(camera.dot(to_target.normalized()), -1.0, 1.0);
        rec.aim_error = std::acos(cos_err);
      }
    }

    result.records.push_back(rec);

    if (rec.ep_norm > cfg.divergence_bound) {
      result.status = RunStatus::Diverged;
      result.message =
          "position error exceeded divergence bound at t = " + std::to_string(t);
      return result;
    }

    try {
      state = step(state, rec.applied, params, cfg.dt);
    } catch (const std::runtime_error& e) {
      result.status = RunStatus::NonFinite;
      result.message = e.what();
      return result;
    }
  }
  return result;
}

}  // namespace morph
