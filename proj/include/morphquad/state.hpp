#pragma once

#include "morphquad/so3.hpp"

namespace morph {

/// Rigid-body state: world-frame position/velocity, body-to-world rotation,
/// body-frame angular velocity.
struct RigidState {
  Vec3 position = Vec3::Zero();       // m
  Vec3 velocity = Vec3::Zero();       // m/s
  Mat3 rotation = Mat3::Identity();   // body -> world
  Vec3 angular_velocity = Vec3::Zero();  // rad/s, body frame

  bool all_finite() const {
    return position.allFinite() && velocity.allFinite() &&
           rotation.allFinite() && angular_velocity.allFinite();
  }
};

/// One instant of a reference trajectory.
struct ReferenceSample {
  Vec3 position = Vec3::Zero();          // m
  Vec3 velocity = Vec3::Zero();          // m/s
  Vec3 acceleration = Vec3::Zero();      // m/s^2
  Mat3 rotation = Mat3::Identity();      // desired body -> world
  Vec3 angular_velocity = Vec3::Zero();  // rad/s, desired body frame
  Vec3 angular_acceleration = Vec3::Zero();  // rad/s^2
};

}  // namespace morph
