#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "morphquad/so3.hpp"

using namespace morph;

namespace {

std::mt19937_64 rng(42);

Vec3 random_vec3(double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  return Vec3(dist(rng), dist(rng), dist(rng));
}

Mat3 random_rotation() { return so3::exp(random_vec3(M_PI)); }

}  // namespace

TEST(Hat, ZeroVector) {
  EXPECT_TRUE(so3::hat(Vec3::Zero()).isZero(0.0));
}

TEST(Hat, BasisVector) {
  Mat3 expected;
  expected << 0, 0, 0,
              0, 0, -1,
              0, 1, 0;
  EXPECT_TRUE(so3::hat(Vec3::UnitX()).isApprox(expected, 1e-15));
}

TEST(Hat, MatchesCrossProduct) {
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = random_vec3(10.0);
    const Vec3 w = random_vec3(10.0);
    EXPECT_LT((so3::hat(v) * w - v.cross(w)).norm(), 1e-12);
  }
}

TEST(Hat, Antisymmetric) {
  const Mat3 h = so3::hat(random_vec3());
  EXPECT_TRUE(h.isApprox(-h.transpose(), 1e-15));
}

TEST(Vee, InverseOfHat) {
  EXPECT_TRUE(so3::vee(so3::hat(Vec3(1, 2, 3))).isApprox(Vec3(1, 2, 3), 1e-15));
  EXPECT_TRUE(so3::vee(Mat3::Zero()).isZero(0.0));
}

TEST(Vee, RoundtripSweep) {
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = random_vec3(100.0);
    EXPECT_LT((so3::vee(so3::hat(v), 1e-6) - v).norm(), 1e-12);
  }
}

TEST(Vee, RejectsSymmetricPart) {
  Mat3 m = so3::hat(Vec3(1, 2, 3));
  m(0, 0) = 1e-6;
  EXPECT_THROW(so3::vee(m), std::invalid_argument);
}

TEST(ExpSo3, Identity) {
  EXPECT_TRUE(so3::exp(Vec3::Zero()).isIdentity(0.0));
}

TEST(ExpSo3, QuarterTurnYaw) {
  Mat3 expected;
  expected << 0, -1, 0,
              1, 0, 0,
              0, 0, 1;
  EXPECT_TRUE(so3::exp(Vec3(0, 0, M_PI / 2)).isApprox(expected, 1e-12));
}

TEST(ExpSo3, InverseProperty) {
  for (int i = 0; i < 200; ++i) {
    const Vec3 v = random_vec3(M_PI);
    EXPECT_TRUE((so3::exp(v) * so3::exp(-v)).isIdentity(1e-10));
  }
}

TEST(ExpSo3, OutputIsRotation) {
  for (int i = 0; i < 200; ++i) {
    EXPECT_LT(so3::orthonormality_defect(so3::exp(random_vec3(2.0 * M_PI))), 1e-10);
  }
}

TEST(ExpSo3, SmallAngleBranch) {
  const Vec3 tiny(1e-9, -2e-9, 3e-10);
  const Mat3 r = so3::exp(tiny);
  EXPECT_LT(so3::orthonormality_defect(r), 1e-15);
  EXPECT_LT((so3::log(r) - tiny).norm(), 1e-15);
}

TEST(LogSo3, RoundtripSweep) {
  for (int i = 0; i < 1000; ++i) {
    Vec3 v = random_vec3(1.0).normalized() *
             std::uniform_real_distribution<double>(0.0, M_PI - 1e-3)(rng);
    EXPECT_LT((so3::log(so3::exp(v)) - v).norm(), 1e-9) << v.transpose();
  }
}

TEST(EulerZxy, Identity) {
  EXPECT_TRUE(so3::euler_zxy_to_rotation(0, 0, 0).isIdentity(0.0));
}

TEST(EulerZxy, PureYaw) {
  EXPECT_TRUE(so3::euler_zxy_to_rotation(M_PI / 2, 0, 0)
                  .isApprox(so3::rot_z(M_PI / 2), 1e-15));
}

TEST(EulerZxy, RoundtripSweep) {
  std::uniform_real_distribution<double> angle(-M_PI + 1e-3, M_PI - 1e-3);
  std::uniform_real_distribution<double> roll_dist(-1.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const double yaw = angle(rng), roll = roll_dist(rng), pitch = angle(rng);
    const auto e = so3::rotation_to_euler_zxy(so3::euler_zxy_to_rotation(yaw, roll, pitch));
    EXPECT_FALSE(e.degenerate);
    EXPECT_NEAR(e.yaw, yaw, 1e-10);
    EXPECT_NEAR(e.roll, roll, 1e-10);
    EXPECT_NEAR(e.pitch, pitch, 1e-10);
  }
}

TEST(EulerZxy, DegenerateAtGimbal) {
  const auto e = so3::rotation_to_euler_zxy(so3::euler_zxy_to_rotation(0.3, M_PI / 2, 0.2));
  EXPECT_TRUE(e.degenerate);
  EXPECT_NEAR(e.roll, M_PI / 2, 1e-9);
}

TEST(PsiError, IdenticalRotations) {
  const Mat3 r = random_rotation();
  EXPECT_NEAR(so3::psi_error(r, r), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(so3::psi_error(Mat3::Identity(), Mat3::Identity()), 0.0);
}

TEST(PsiError, HalfTurnYawIsTwo) {
  EXPECT_NEAR(so3::psi_error(so3::rot_z(M_PI), Mat3::Identity()), 2.0, 1e-12);
}

TEST(PsiError, QuarterTurnRollIsOne) {
  EXPECT_NEAR(so3::psi_error(so3::rot_x(M_PI / 2), Mat3::Identity()), 1.0, 1e-12);
}

TEST(PsiError, LeftInvariance) {
  for (int i = 0; i < 200; ++i) {
    const Mat3 q = random_rotation();
    const Mat3 r = random_rotation();
    const Mat3 rd = random_rotation();
    EXPECT_NEAR(so3::psi_error(q * r, q * rd), so3::psi_error(r, rd), 1e-10);
  }
}

TEST(PsiError, UpperBoundAtHalfTurn) {
  for (int i = 0; i < 100; ++i) {
    const Vec3 axis = random_vec3().normalized();
    EXPECT_NEAR(so3::psi_error(so3::exp(M_PI * axis), Mat3::Identity()), 2.0, 1e-9);
  }
}

TEST(Project, RestoresDriftedRotation) {
  Mat3 drifted = random_rotation();
  drifted(0, 1) += 1e-6;
  const Mat3 fixed = so3::project(drifted);
  EXPECT_LT(so3::orthonormality_defect(fixed), 1e-12);
  EXPECT_TRUE(fixed.isApprox(drifted, 1e-5));
}
