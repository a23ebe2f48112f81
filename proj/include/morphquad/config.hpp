#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "morphquad/controller.hpp"
#include "morphquad/sim.hpp"
#include "morphquad/trajectories.hpp"
#include "morphquad/vehicle.hpp"

namespace morph {

/// Scenario file problem: parse failure or schema violation. The message
/// names the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TrajectoryKind { Hover, Watertower, Pipe, Corkscrew };

struct TrajectoryConfig {
  TrajectoryKind kind = TrajectoryKind::Hover;
  // hover
  Vec3 hover_position = Vec3(0.0, 0.0, 1.0);
  Vec3 hover_euler_zxy_deg = Vec3::Zero();  // yaw, roll, pitch
  double hover_hold_time = 10.0;
  // watertower
  double tower_radius = 2.0;
  double tower_height = 4.0;
  double tower_ascent_rate = 0.5;
  double tower_standoff = 1.0;
  // pipe
  std::vector<PoseWaypoint> pipe_waypoints;
  double pipe_speed = 1.0;
  // corkscrew
  Vec3 screw_center = Vec3::Zero();
  double screw_radius = 2.0;
  double screw_pitch_per_turn = 0.5;
  double screw_turns = 3.0;
  double screw_period_per_turn = 6.0;
};

/// Initial-state perturbation relative to the reference at t = 0.
struct InitialPerturbation {
  double attitude_angle = 0.0;       // rad
  Vec3 attitude_axis = Vec3::UnitZ();
  Vec3 angular_velocity_offset = Vec3::Zero();  // adds to e_w
  Vec3 position_offset = Vec3::Zero();
  Vec3 velocity_offset = Vec3::Zero();
};

struct RoaConfig {
  int samples = 100;
  double angle_min_deg = 0.0;
  double angle_max_deg = 179.0;
  double e_w_fraction = 0.9;       // of the angular-velocity bound
  double converge_psi = 1e-3;
};

struct EnvelopeConfig {
  int n_dirs = 1000;
};

struct ScenarioConfig {
  VehicleParams vehicle;
  GainSet gains;
  SimConfig sim;
  std::optional<TrajectoryConfig> trajectory;
  std::optional<InitialPerturbation> initial;
  RoaConfig roa;
  EnvelopeConfig envelope;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

/// Parses and schema-checks a scenario file. Unknown keys anywhere in the
/// tree are rejected. Throws ConfigError with a field diagnostic.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text);

std::unique_ptr<Trajectory> build_trajectory(const TrajectoryConfig& cfg,
                                             double fd_step);

/// Applies the perturbation block on top of the reference start state.
RigidState apply_initial_perturbation(const Trajectory& trajectory,
                                      const InitialPerturbation& init);

}  // namespace morph
