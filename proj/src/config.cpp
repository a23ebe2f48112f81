#include "morphquad/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace morph {

namespace {

using nlohmann::json;

constexpr double kDegToRad = M_PI / 180.0;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) fail(path, "unknown key '" + key + "'");
  }
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double get_positive(const json& obj, const std::string& path, const char* key,
                    double fallback) {
  const double x = get_number(obj, path, key, fallback);
  if (!(x > 0.0)) fail(path + "." + key, "expected a positive number");
  return x;
}

Vec3 get_vec3(const json& obj, const std::string& path, const char* key,
              const Vec3& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number()) {
    fail(path + "." + key, "expected an array of 3 numbers");
  }
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

Mat3 get_inertia(const json& obj, const std::string& path, const Mat3& fallback) {
  if (!obj.contains("inertia")) return fallback;
  const json& v = obj.at("inertia");
  if (!v.is_array() || (v.size() != 3 && v.size() != 9)) {
    fail(path + ".inertia", "expected 3 (diagonal) or 9 (row-major) numbers");
  }
  for (const auto& e : v) {
    if (!e.is_number()) fail(path + ".inertia", "expected numeric entries");
  }
  Mat3 inertia = Mat3::Zero();
  if (v.size() == 3) {
    inertia.diagonal() << v[0].get<double>(), v[1].get<double>(), v[2].get<double>();
  } else {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) inertia(r, c) = v[3 * r + c].get<double>();
    }
  }
  return inertia;
}

VehicleParams parse_vehicle(const json& obj) {
  const std::string path = "vehicle";
  check_keys(obj, path,
             {"mass", "inertia", "thrust_coeff", "arm_half_length",
              "arm_half_breadth", "arm_height_offset", "thrust_max",
              "rotor_speed_max", "servo_rate_max", "gravity"});
  VehicleParams p;
  p.mass = get_positive(obj, path, "mass", p.mass);
  p.inertia = get_inertia(obj, path, p.inertia);
  p.thrust_coeff = get_positive(obj, path, "thrust_coeff", p.thrust_coeff);
  p.arm_half_length = get_positive(obj, path, "arm_half_length", p.arm_half_length);
  p.arm_half_breadth = get_positive(obj, path, "arm_half_breadth", p.arm_half_breadth);
  p.arm_height_offset = get_number(obj, path, "arm_height_offset", p.arm_height_offset);
  p.thrust_max = get_positive(obj, path, "thrust_max", p.thrust_max);
  p.rotor_speed_max = get_number(obj, path, "rotor_speed_max", p.rotor_speed_max);
  p.servo_rate_max = get_number(obj, path, "servo_rate_max", p.servo_rate_max);
  p.gravity = get_vec3(obj, path, "gravity", p.gravity);
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

GainSet parse_gains(const json& obj) {
  const std::string path = "gains";
  check_keys(obj, path, {"kp", "kv", "kR", "kw"});
  GainSet g;
  g.kp = get_positive(obj, path, "kp", g.kp);
  g.kv = get_positive(obj, path, "kv", g.kv);
  g.kR = get_positive(obj, path, "kR", g.kR);
  g.kw = get_positive(obj, path, "kw", g.kw);
  return g;
}

ActuatorMode parse_mode(const json& obj, const std::string& path) {
  if (!obj.contains("actuator_mode")) return ActuatorMode::InstantActuators;
  const json& v = obj.at("actuator_mode");
  if (!v.is_string()) fail(path + ".actuator_mode", "expected a string");
  const std::string s = v.get<std::string>();
  if (s == "ideal-wrench") return ActuatorMode::IdealWrench;
  if (s == "instant-actuators") return ActuatorMode::InstantActuators;
  if (s == "rate-limited-actuators") return ActuatorMode::RateLimitedActuators;
  fail(path + ".actuator_mode",
       "expected one of ideal-wrench, instant-actuators, rate-limited-actuators");
}

SimConfig parse_sim(const json& obj) {
  const std::string path = "sim";
  check_keys(obj, path,
             {"dt", "duration", "actuator_mode", "servo_tau", "rotor_tau",
              "gimbal_eps", "divergence_bound"});
  SimConfig s;
  s.dt = get_positive(obj, path, "dt", s.dt);
  s.duration = get_positive(obj, path, "duration", s.duration);
  s.actuator_mode = parse_mode(obj, path);
  s.servo_tau = get_positive(obj, path, "servo_tau", s.servo_tau);
  s.rotor_tau = get_positive(obj, path, "rotor_tau", s.rotor_tau);
  s.gimbal_eps = get_number(obj, path, "gimbal_eps", s.gimbal_eps);
  s.divergence_bound = get_positive(obj, path, "divergence_bound", s.divergence_bound);
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

Mat3 euler_deg_to_rotation(const Vec3& yaw_roll_pitch_deg) {
  return so3::euler_zxy_to_rotation(yaw_roll_pitch_deg.x() * kDegToRad,
                                    yaw_roll_pitch_deg.y() * kDegToRad,
                                    yaw_roll_pitch_deg.z() * kDegToRad);
}

TrajectoryConfig parse_trajectory(const json& obj) {
  const std::string path = "trajectory";
  if (!obj.contains("kind") || !obj.at("kind").is_string()) {
    fail(path + ".kind", "expected a string");
  }
  const std::string kind = obj.at("kind").get<std::string>();
  TrajectoryConfig t;
  if (kind == "hover") {
    t.kind = TrajectoryKind::Hover;
    check_keys(obj, path, {"kind", "position", "euler_zxy_deg", "hold_time"});
    t.hover_position = get_vec3(obj, path, "position", t.hover_position);
    t.hover_euler_zxy_deg = get_vec3(obj, path, "euler_zxy_deg", t.hover_euler_zxy_deg);
    t.hover_hold_time = get_positive(obj, path, "hold_time", t.hover_hold_time);
  } else if (kind == "watertower") {
    t.kind = TrajectoryKind::Watertower;
    check_keys(obj, path, {"kind", "radius", "height", "ascent_rate", "standoff"});
    t.tower_radius = get_positive(obj, path, "radius", t.tower_radius);
    t.tower_height = get_positive(obj, path, "height", t.tower_height);
    t.tower_ascent_rate = get_positive(obj, path, "ascent_rate", t.tower_ascent_rate);
    t.tower_standoff = get_positive(obj, path, "standoff", t.tower_standoff);
  } else if (kind == "pipe") {
    t.kind = TrajectoryKind::Pipe;
    check_keys(obj, path, {"kind", "speed", "waypoints"});
    t.pipe_speed = get_positive(obj, path, "speed", t.pipe_speed);
    if (!obj.contains("waypoints") || !obj.at("waypoints").is_array() ||
        obj.at("waypoints").size() < 2) {
      fail(path + ".waypoints", "expected an array of at least 2 waypoints");
    }
    int index = 0;
    for (const json& wp : obj.at("waypoints")) {
      const std::string wp_path = path + ".waypoints[" + std::to_string(index++) + "]";
      if (!wp.is_object()) fail(wp_path, "expected an object");
      check_keys(wp, wp_path, {"position", "euler_zxy_deg"});
      PoseWaypoint pose;
      if (!wp.contains("position")) fail(wp_path + ".position", "required");
      pose.position = get_vec3(wp, wp_path, "position", Vec3::Zero());
      pose.rotation = euler_deg_to_rotation(
          get_vec3(wp, wp_path, "euler_zxy_deg", Vec3::Zero()));
      t.pipe_waypoints.push_back(pose);
    }
  } else if (kind == "corkscrew") {
    t.kind = TrajectoryKind::Corkscrew;
    check_keys(obj, path,
               {"kind", "center", "radius", "pitch_per_turn", "turns",
                "period_per_turn"});
    t.screw_center = get_vec3(obj, path, "center", t.screw_center);
    t.screw_radius = get_positive(obj, path, "radius", t.screw_radius);
    t.screw_pitch_per_turn =
        get_number(obj, path, "pitch_per_turn", t.screw_pitch_per_turn);
    t.screw_turns = get_positive(obj, path, "turns", t.screw_turns);
    t.screw_period_per_turn =
        get_positive(obj, path, "period_per_turn", t.screw_period_per_turn);
  } else {
    fail(path + ".kind", "expected one of hover, watertower, pipe, corkscrew");
  }
  return t;
}

InitialPerturbation parse_initial(const json& obj) {
  const std::string path = "initial";
  check_keys(obj, path,
             {"attitude_angle_deg", "attitude_axis", "angular_velocity_offset",
              "position_offset", "velocity_offset"});
  InitialPerturbation init;
  init.attitude_angle = get_number(obj, path, "attitude_angle_deg", 0.0) * kDegToRad;
  init.attitude_axis = get_vec3(obj, path, "attitude_axis", init.attitude_axis);
  if (init.attitude_axis.norm() < 1e-12) {
    fail(path + ".attitude_axis", "expected a nonzero axis");
  }
  init.angular_velocity_offset =
      get_vec3(obj, path, "angular_velocity_offset", Vec3::Zero());
  init.position_offset = get_vec3(obj, path, "position_offset", Vec3::Zero());
  init.velocity_offset = get_vec3(obj, path, "velocity_offset", Vec3::Zero());
  return init;
}

RoaConfig parse_roa(const json& obj) {
  const std::string path = "roa";
  check_keys(obj, path,
             {"samples", "angle_min_deg", "angle_max_deg", "e_w_fraction",
              "converge_psi"});
  RoaConfig r;
  r.samples = static_cast<int>(get_positive(obj, path, "samples", r.samples));
  r.angle_min_deg = get_number(obj, path, "angle_min_deg", r.angle_min_deg);
  r.angle_max_deg = get_number(obj, path, "angle_max_deg", r.angle_max_deg);
  if (r.angle_min_deg < 0.0 || r.angle_max_deg < r.angle_min_deg) {
    fail(path, "angle range must satisfy 0 <= min <= max");
  }
  r.e_w_fraction = get_number(obj, path, "e_w_fraction", r.e_w_fraction);
  if (r.e_w_fraction < 0.0) fail(path + ".e_w_fraction", "expected >= 0");
  r.converge_psi = get_positive(obj, path, "converge_psi", r.converge_psi);
  return r;
}

EnvelopeConfig parse_envelope(const json& obj) {
  const std::string path = "envelope";
  check_keys(obj, path, {"n_dirs"});
  EnvelopeConfig e;
  e.n_dirs = static_cast<int>(get_positive(obj, path, "n_dirs", e.n_dirs));
  return e;
}

json expect_object(const json& root, const char* key) {
  const json& v = root.at(key);
  if (!v.is_object()) fail(key, "expected an object");
  return v;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("top level: expected an object");
  check_keys(root, "top level",
             {"vehicle", "gains", "sim", "trajectory", "initial", "roa",
              "envelope", "output", "seed"});

  ScenarioConfig cfg;
  if (root.contains("vehicle")) cfg.vehicle = parse_vehicle(expect_object(root, "vehicle"));
  if (root.contains("gains")) cfg.gains = parse_gains(expect_object(root, "gains"));
  if (root.contains("sim")) cfg.sim = parse_sim(expect_object(root, "sim"));
  if (root.contains("trajectory")) {
    cfg.trajectory = parse_trajectory(expect_object(root, "trajectory"));
  }
  if (root.contains("initial")) cfg.initial = parse_initial(expect_object(root, "initial"));
  if (root.contains("roa")) cfg.roa = parse_roa(expect_object(root, "roa"));
  if (root.contains("envelope")) cfg.envelope = parse_envelope(expect_object(root, "envelope"));
  if (root.contains("output")) {
    const json out = expect_object(root, "output");
    check_keys(out, "output", {"dir"});
    if (out.contains("dir")) {
      if (!out.at("dir").is_string()) fail("output.dir", "expected a string");
      cfg.output_dir = out.at("dir").get<std::string>();
    }
  }
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned()) fail("seed", "expected a non-negative integer");
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::unique_ptr<Trajectory> build_trajectory(const TrajectoryConfig& cfg,
                                             double fd_step) {
  switch (cfg.kind) {
    case TrajectoryKind::Hover:
      return std::make_unique<HoverRef>(cfg.hover_position,
                                        euler_deg_to_rotation(cfg.hover_euler_zxy_deg),
                                        cfg.hover_hold_time);
    case TrajectoryKind::Watertower:
      return std::make_unique<WatertowerRef>(cfg.tower_radius, cfg.tower_height,
                                             cfg.tower_ascent_rate, cfg.tower_standoff);
    case TrajectoryKind::Pipe:
      return std::make_unique<PipeRef>(cfg.pipe_waypoints, cfg.pipe_speed);
    case TrajectoryKind::Corkscrew:
      return std::make_unique<CorkscrewRef>(cfg.screw_center, cfg.screw_radius,
                                            cfg.screw_pitch_per_turn, cfg.screw_turns,
                                            cfg.screw_period_per_turn, fd_step);
  }
  throw ConfigError("trajectory.kind: unknown kind");
}

RigidState apply_initial_perturbation(const Trajectory& trajectory,
                                      const InitialPerturbation& init) {
  RigidState state = initial_state_from_reference(trajectory);
  const ReferenceSample ref = trajectory.sample(0.0);
  state.position += init.position_offset;
  state.velocity += init.velocity_offset;
  state.rotation =
      ref.rotation * so3::exp(init.attitude_angle * init.attitude_axis.normalized());
  // Transport the reference rate into the perturbed body frame, then add
  // the requested angular-velocity error on top.
  state.angular_velocity = state.rotation.transpose() * ref.rotation * ref.angular_velocity +
                           init.angular_velocity_offset;
  return state;
}

}  // namespace morph
