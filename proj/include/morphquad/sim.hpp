#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morphquad/allocation.hpp"
#include "morphquad/controller.hpp"
#include "morphquad/state.hpp"
#include "morphquad/trajectories.hpp"
#include "morphquad/vehicle.hpp"

namespace morph {

enum class ActuatorMode {
  IdealWrench,           // commanded wrench applied directly
  InstantActuators,      // commands realized through the rotor/servo model instantly
  RateLimitedActuators,  // first-order lags plus servo rate limits
};

/// Per-arm actuator state for the transient model.
struct ActuatorState {
  std::array<double, 4> alpha{};   // rad, unwrapped (may exceed +-pi)
  std::array<double, 4> beta{};    // rad
  std::array<double, 4> omega{};   // rad/s
  std::array<double, 4> alpha_target{};
  std::array<double, 4> beta_target{};
  std::array<double, 4> omega_target{};
  bool initialized = false;
};

enum class TelemetryDetail {
  Full,        // allocation, commands and oracle energy every step
  ErrorsOnly,  // tracking errors only (fast Monte-Carlo runs)
};

struct SimConfig {
  double dt = 1e-3;            // s
  double duration = 10.0;      // s
  ActuatorMode actuator_mode = ActuatorMode::InstantActuators;
  double servo_tau = 0.03;     // s
  double rotor_tau = 0.02;     // s
  double gimbal_eps = 0.1;     // rad
  double divergence_bound = 50.0;  // m
  TelemetryDetail detail = TelemetryDetail::Full;
  std::uint64_t seed = 0;
};

void validate(const SimConfig& cfg);

/// One RK4 step of the rigid-body dynamics under a constant body wrench.
/// The attitude advances on the manifold through the exponential of the
/// RK4-averaged body rate and is re-orthonormalized when drift exceeds 1e-9.
/// Throws std::runtime_error if the state goes non-finite.
RigidState step(const RigidState& state, const Wrench& applied,
                const VehicleParams& params, double dt);

struct TelemetryRecord {
  double t = 0.0;
  RigidState state;
  ReferenceSample ref;
  Wrench commanded;  // controller output
  Wrench applied;    // what the dynamics actually received
  ArmCommandSet commands{};
  double sat_scale = 1.0;
  bool saturated = false;
  bool fallback_active = false;
  double psi = 0.0;
  double ep_norm = 0.0;
  double energy = 0.0;         // 0.5 * sum |t_i|^2 of the commanded set
  double oracle_energy = 0.0;  // same cost for the pseudo-inverse solution
  std::optional<double> aim_error;  // rad, when the trajectory has a target
};

enum class RunStatus { Ok, Diverged, NonFinite };

struct SimResult {
  std::vector<TelemetryRecord> records;
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::size_t saturated_steps = 0;
};

/// Closed-loop run: reference -> controller -> allocation (with gimbal
/// fallback and saturation) -> actuator model -> forward wrench -> RK4.
/// Starts from `initial` when given, otherwise from the reference state at
/// t = 0. Deterministic for fixed inputs.
SimResult run_scenario(const SimConfig& cfg, const VehicleParams& params,
                       const GainSet& gains, const Trajectory& trajectory,
                       const std::optional<RigidState>& initial = std::nullopt);

/// Reference state at t = 0 (used as the default initial condition).
RigidState initial_state_from_reference(const Trajectory& trajectory);

}  // namespace morph
