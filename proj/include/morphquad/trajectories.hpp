#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "morphquad/state.hpp"

namespace morph {

/// Time-parameterized reference stream. Samplers are pure functions of
/// time once constructed.
class Trajectory {
 public:
  virtual ~Trajectory() = default;

  virtual ReferenceSample sample(double t) const = 0;

  /// Natural length of the maneuver; sample() clamps beyond it.
  virtual double duration() const = 0;

  /// World point the body x axis is required to aim at, when the maneuver
  /// defines one (camera or tool target).
  virtual std::optional<Vec3> aim_target(double /*t*/) const { return std::nullopt; }
};

/// C2 smoothstep: 0 -> 1 with zero velocity and acceleration at both ends.
struct QuinticBlend {
  double value = 0.0;
  double rate = 0.0;
  double accel = 0.0;
};
QuinticBlend quintic_blend(double u);

/// Right-handed look-at frame: body x along `aim`, body z as close to
/// `up_hint` as possible. Throws std::invalid_argument when aim is
/// (anti)parallel to the hint within tolerance.
Mat3 look_at_rotation(const Vec3& aim, const Vec3& up_hint = Vec3::UnitZ());

/// Constant pose, zero derivatives.
class HoverRef : public Trajectory {
 public:
  HoverRef(const Vec3& position, const Mat3& rotation, double hold_time = 10.0);
  ReferenceSample sample(double t) const override;
  double duration() const override { return hold_time_; }

 private:
  ReferenceSample ref_;
  double hold_time_;
};

/// Contact-inspection pass over a cylindrical tower: a vertical ascent at
/// fixed standoff with the tool (body x) held against the wall, then a
/// helical descent that orbits the tower once while yawing so the tool
/// stays normal to the surface. Scalar profiles are quintic-blended, so
/// position and attitude streams are C2.
class WatertowerRef : public Trajectory {
 public:
  WatertowerRef(double radius, double height, double ascent_rate, double standoff);

  ReferenceSample sample(double t) const override;
  double duration() const override { return 2.0 * phase_time_; }
  std::optional<Vec3> aim_target(double t) const override;

  /// Outward surface normal at the tower point faced at time t.
  Vec3 surface_normal(double t) const;

 private:
  struct Profile {
    double z, z_dot, z_ddot;        // altitude
    double azim, azim_dot, azim_ddot;  // orbit angle
  };
  Profile profile(double t) const;

  double radius_;
  double height_;
  double standoff_;
  double phase_time_;
};

/// Pose waypoint for conduit-style paths.
struct PoseWaypoint {
  Vec3 position = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();
};

/// C2 natural cubic spline through the positions, with per-segment
/// geodesic attitude interpolation eased to zero rate at each waypoint.
class PipeRef : public Trajectory {
 public:
  PipeRef(std::vector<PoseWaypoint> waypoints, double speed);

  ReferenceSample sample(double t) const override;
  double duration() const override { return times_.back(); }

 private:
  int segment_index(double t) const;

  std::vector<PoseWaypoint> waypoints_;
  std::vector<double> times_;
  // Spline second derivatives per axis and knot.
  std::vector<Vec3> second_derivs_;
  // Per-segment rotation increments log(Ri^T Ri+1).
  std::vector<Vec3> rot_increments_;
};

/// Helix around a vertical axis through `center`, with the body x axis
/// (camera) aimed at the center point throughout. Angular references come
/// from central differences of the look-at attitude.
class CorkscrewRef : public Trajectory {
 public:
  CorkscrewRef(const Vec3& center, double radius, double pitch_per_turn,
               double turns, double period_per_turn, double fd_step = 1e-3);

  ReferenceSample sample(double t) const override;
  double duration() const override;
  std::optional<Vec3> aim_target(double /*t*/) const override { return center_; }

 private:
  Vec3 helix_position(double t) const;
  Mat3 attitude(double t) const;

  Vec3 center_;
  double radius_;
  double pitch_per_turn_;
  double turns_;
  double period_;
  double fd_step_;
};

}  // namespace morph
