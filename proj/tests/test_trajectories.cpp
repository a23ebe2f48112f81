#include <gtest/gtest.h>

#include <cmath>

#include "morphquad/so3.hpp"
#include "morphquad/trajectories.hpp"

using namespace morph;

namespace {

constexpr double kDt = 1e-3;
// Stated constant for the kinematic-consistency scans: finite differences
// of each stream must match the next derivative within kC * dt.
constexpr double kC = 20.0;

Vec3 antisym_vee(const Mat3& m) {
  const Mat3 a = 0.5 * (m - m.transpose());
  return Vec3(a(2, 1), a(0, 2), a(1, 0));
}

/// Central-difference scan of a sampler over [t0, t1].
void expect_kinematic_consistency(const Trajectory& traj, double t0, double t1) {
  for (double t = t0 + kDt; t < t1 - kDt; t += 0.01) {
    const ReferenceSample prev = traj.sample(t - kDt);
    const ReferenceSample curr = traj.sample(t);
    const ReferenceSample next = traj.sample(t + kDt);

    const Vec3 fd_v = (next.position - prev.position) / (2.0 * kDt);
    const Vec3 fd_a = (next.velocity - prev.velocity) / (2.0 * kDt);
    EXPECT_LT((fd_v - curr.velocity).norm(), kC * kDt) << "t=" << t;
    EXPECT_LT((fd_a - curr.acceleration).norm(), kC * kDt) << "t=" << t;

    const Mat3 fd_r = (next.rotation - prev.rotation) / (2.0 * kDt);
    const Vec3 fd_w = antisym_vee(curr.rotation.transpose() * fd_r);
    const Vec3 fd_wdot = (next.angular_velocity - prev.angular_velocity) / (2.0 * kDt);
    EXPECT_LT((fd_w - curr.angular_velocity).norm(), kC * kDt) << "t=" << t;
    EXPECT_LT((fd_wdot - curr.angular_acceleration).norm(), kC * kDt) << "t=" << t;

    EXPECT_LT(so3::orthonormality_defect(curr.rotation), 1e-9) << "t=" << t;
  }
}

}  // namespace

TEST(QuinticBlendFn, EndpointsAndMonotone) {
  const QuinticBlend b0 = quintic_blend(0.0);
  const QuinticBlend b1 = quintic_blend(1.0);
  EXPECT_DOUBLE_EQ(b0.value, 0.0);
  EXPECT_DOUBLE_EQ(b0.rate, 0.0);
  EXPECT_DOUBLE_EQ(b0.accel, 0.0);
  EXPECT_DOUBLE_EQ(b1.value, 1.0);
  EXPECT_DOUBLE_EQ(b1.rate, 0.0);
  EXPECT_DOUBLE_EQ(b1.accel, 0.0);
  double last = 0.0;
  for (double u = 0.0; u <= 1.0; u += 0.01) {
    const QuinticBlend b = quintic_blend(u);
    EXPECT_GE(b.value, last - 1e-15);
    last = b.value;
  }
}

TEST(QuinticBlendFn, DerivativesMatchFiniteDifferences) {
  const double h = 1e-6;
  for (int i = 1; i <= 9; ++i) {
    const double u = 0.1 * i;
    const QuinticBlend b = quintic_blend(u);
    const double fd_rate = (quintic_blend(u + h).value - quintic_blend(u - h).value) / (2 * h);
    const double fd_accel = (quintic_blend(u + h).rate - quintic_blend(u - h).rate) / (2 * h);
    EXPECT_NEAR(b.rate, fd_rate, 1e-6);
    EXPECT_NEAR(b.accel, fd_accel, 1e-6);
  }
}

TEST(LookAt, AimsBodyXAtTarget) {
  const Vec3 aim(1.0, -2.0, 0.5);
  const Mat3 r = look_at_rotation(aim);
  EXPECT_LT((r.col(0) - aim.normalized()).norm(), 1e-12);
  EXPECT_LT(so3::orthonormality_defect(r), 1e-12);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
  // Body z stays as upward as the aim allows.
  EXPECT_GT(r.col(2).z(), 0.0);
  EXPECT_NEAR(r.col(2).dot(r.col(0)), 0.0, 1e-12);
}

TEST(LookAt, ThrowsWhenAimParallelToUp) {
  EXPECT_THROW(look_at_rotation(Vec3::UnitZ()), std::invalid_argument);
  EXPECT_THROW(look_at_rotation(Vec3::Zero()), std::invalid_argument);
}

TEST(Hover, ConstantPoseZeroDerivatives) {
  const Mat3 r0 = so3::rot_z(0.6);
  const HoverRef traj(Vec3(1, 2, 3), r0);
  for (double t : {0.0, 0.5, 3.0, 100.0}) {
    const ReferenceSample s = traj.sample(t);
    EXPECT_TRUE(s.position.isApprox(Vec3(1, 2, 3)));
    EXPECT_TRUE(s.rotation.isApprox(r0));
    EXPECT_LT(s.velocity.norm() + s.acceleration.norm() + s.angular_velocity.norm() +
                  s.angular_acceleration.norm(),
              1e-15);
  }
  expect_kinematic_consistency(traj, 0.0, 2.0);
}

TEST(Watertower, ToolStartsHorizontalAtSurface) {
  const WatertowerRef traj(2.0, 4.0, 0.5, 1.0);
  const ReferenceSample s = traj.sample(0.0);
  const Vec3 tool = s.rotation.col(0);
  EXPECT_NEAR(tool.z(), 0.0, 1e-15);
  // Vehicle sits at (+3, 0, 0); the tool must point back at the wall.
  EXPECT_LT((tool - Vec3(-1, 0, 0)).norm(), 1e-12);
  EXPECT_TRUE(s.position.isApprox(Vec3(3, 0, 0), 1e-12));
}

TEST(Watertower, ToolNormalToSurfaceEverywhere) {
  const WatertowerRef traj(2.0, 4.0, 0.5, 1.0);
  for (double t = 0.0; t <= traj.duration(); t += 0.05) {
    const ReferenceSample s = traj.sample(t);
    const Vec3 tool = s.rotation.col(0);
    const Vec3 normal = traj.surface_normal(t);
    // Tool exactly anti-parallel to the outward normal.
    EXPECT_LT((tool + normal).norm(), 1e-12) << "t=" << t;
  }
}

TEST(Watertower, ApexAttitudeContinuity) {
  const WatertowerRef traj(2.0, 4.0, 0.5, 1.0);
  const double apex = traj.duration() / 2.0;
  for (double t = apex - 0.05; t <= apex + 0.05; t += kDt) {
    const double psi_step =
        so3::psi_error(traj.sample(t + kDt).rotation, traj.sample(t).rotation);
    EXPECT_LT(psi_step, 0.01) << "t=" << t;
  }
}

TEST(Watertower, AscentClimbsDescentOrbits) {
  const WatertowerRef traj(2.0, 4.0, 0.5, 1.0);
  const double T = traj.duration() / 2.0;
  EXPECT_NEAR(traj.sample(T).position.z(), 4.0, 1e-12);
  EXPECT_NEAR(traj.sample(2 * T).position.z(), 0.0, 1e-12);
  // Descent sweeps one full orbit back to the starting azimuth.
  EXPECT_TRUE(traj.sample(2 * T).position.isApprox(traj.sample(0.0).position, 1e-9));
  // Halfway down the vehicle is on the far side of the tower.
  const Vec3 mid = traj.sample(1.5 * T).position;
  EXPECT_NEAR(std::hypot(mid.x(), mid.y()), 3.0, 1e-12);
  EXPECT_LT(mid.x(), 0.0);
}

TEST(Watertower, KinematicConsistency) {
  const WatertowerRef traj(2.0, 4.0, 0.5, 1.0);
  expect_kinematic_consistency(traj, 0.0, traj.duration());
}

TEST(Pipe, EndpointInterpolationExact) {
  std::vector<PoseWaypoint> wps(3);
  wps[0] = {Vec3(0, 0, 0), so3::rot_z(0.0)};
  wps[1] = {Vec3(2, 1, 0.5), so3::rot_z(0.8)};
  wps[2] = {Vec3(4, 0, 1.0), so3::rot_z(0.8) * so3::rot_x(0.5)};
  const PipeRef traj(wps, 1.0);
  EXPECT_TRUE(traj.sample(0.0).position.isApprox(wps[0].position, 1e-12));
  EXPECT_TRUE(traj.sample(traj.duration()).position.isApprox(wps[2].position, 1e-12));
  EXPECT_TRUE(traj.sample(0.0).rotation.isApprox(wps[0].rotation, 1e-12));
  EXPECT_TRUE(traj.sample(traj.duration()).rotation.isApprox(wps[2].rotation, 1e-12));
}

TEST(Pipe, RejectsDegenerateWaypoints) {
  std::vector<PoseWaypoint> wps(2);
  wps[0].position = Vec3(1, 1, 1);
  wps[1].position = Vec3(1, 1, 1);
  EXPECT_THROW(PipeRef(wps, 1.0), std::invalid_argument);
  EXPECT_THROW(PipeRef({wps[0]}, 1.0), std::invalid_argument);
}

TEST(Pipe, KinematicConsistency) {
  std::vector<PoseWaypoint> wps(4);
  wps[0] = {Vec3(0, 0, 0), Mat3::Identity()};
  wps[1] = {Vec3(1.5, 0.5, 0.2), so3::rot_z(0.5)};
  wps[2] = {Vec3(3, -0.5, 0.8), so3::rot_z(0.9) * so3::rot_y(0.4)};
  wps[3] = {Vec3(4, 0, 2.0), so3::rot_z(0.9) * so3::rot_y(0.9)};
  const PipeRef traj(wps, 0.8);
  expect_kinematic_consistency(traj, 0.0, traj.duration());
}

TEST(Pipe, AttitudeContinuityAcrossWaypoints) {
  std::vector<PoseWaypoint> wps(3);
  wps[0] = {Vec3(0, 0, 0), Mat3::Identity()};
  wps[1] = {Vec3(1, 0, 0), so3::rot_x(1.0)};
  wps[2] = {Vec3(2, 0, 0), so3::rot_x(1.0) * so3::rot_z(-0.7)};
  const PipeRef traj(wps, 1.0);
  for (double t = kDt; t < traj.duration() - kDt; t += kDt) {
    const double psi_step =
        so3::psi_error(traj.sample(t + kDt).rotation, traj.sample(t).rotation);
    EXPECT_LT(psi_step, 0.01) << "t=" << t;
  }
}

TEST(Corkscrew, CameraAimedAtCenterEverywhere) {
  const Vec3 center(1.0, -2.0, 0.5);
  const CorkscrewRef traj(center, 2.0, 0.5, 3.0, 6.0);
  for (double t = 0.0; t <= traj.duration(); t += 0.05) {
    const ReferenceSample s = traj.sample(t);
    const Vec3 aim = (center - s.position).normalized();
    EXPECT_LT((s.rotation.col(0) - aim).norm(), 1e-12) << "t=" << t;
  }
}

TEST(Corkscrew, HelixGeometry) {
  const Vec3 center(0, 0, 0);
  const double pitch = 0.5;
  const CorkscrewRef traj(center, 2.0, pitch, 3.0, 6.0);
  const ReferenceSample start = traj.sample(0.0);
  for (int turn = 1; turn <= 3; ++turn) {
    const ReferenceSample s = traj.sample(6.0 * turn);
    EXPECT_NEAR(s.position.x(), start.position.x(), 1e-9);
    EXPECT_NEAR(s.position.y(), start.position.y(), 1e-9);
    EXPECT_NEAR(s.position.z(), start.position.z() + pitch * turn, 1e-9);
  }
}

TEST(Corkscrew, FlatCircleAngularRate) {
  const double period = 6.0;
  const CorkscrewRef traj(Vec3::Zero(), 2.0, 0.0, 2.0, period);
  for (double t = 0.3; t < traj.duration(); t += 0.61) {
    const ReferenceSample s = traj.sample(t);
    EXPECT_NEAR(s.angular_velocity.norm(), 2.0 * M_PI / period, 1e-6) << "t=" << t;
    EXPECT_LT(s.angular_acceleration.norm(), 1e-6) << "t=" << t;
  }
}

TEST(Corkscrew, KinematicConsistency) {
  const CorkscrewRef traj(Vec3(0.5, 0.5, 0.0), 2.0, 0.5, 2.0, 6.0);
  expect_kinematic_consistency(traj, 0.0, traj.duration());
}
