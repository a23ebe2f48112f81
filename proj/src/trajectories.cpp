#include "morphquad/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace morph {

QuinticBlend quintic_blend(double u) {
  u = std::max(0.0, std::min(1.0, u));
  QuinticBlend b;
  b.value = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  b.rate = 30.0 * u * u * (1.0 - u) * (1.0 - u);
  b.accel = 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
  return b;
}

Mat3 look_at_rotation(const Vec3& aim, const Vec3& up_hint) {
  const double aim_norm = aim.norm();
  if (aim_norm < 1e-12) {
    throw std::invalid_argument("look_at_rotation: aim direction is zero");
  }
  const Vec3 x_axis = aim / aim_norm;
  Vec3 z_axis = up_hint - up_hint.dot(x_axis) * x_axis;
  const double z_norm = z_axis.norm();
  if (z_norm < 1e-9) {
    throw std::invalid_argument("look_at_rotation: aim is parallel to the up hint");
  }
  z_axis /= z_norm;
  const Vec3 y_axis = z_axis.cross(x_axis);
  Mat3 r;
  r.col(0) = x_axis;
  r.col(1) = y_axis;
  r.col(2) = z_axis;
  return r;
}

HoverRef::HoverRef(const Vec3& position, const Mat3& rotation, double hold_time)
    : hold_time_(hold_time) {
  ref_.position = position;
  ref_.rotation = rotation;
}

ReferenceSample HoverRef::sample(double) const { return ref_; }

WatertowerRef::WatertowerRef(double radius, double height, double ascent_rate,
                             double standoff)
    : radius_(radius), height_(height), standoff_(standoff) {
  if (!(radius > 0.0 && height > 0.0 && ascent_rate > 0.0 && standoff > 0.0)) {
    throw std::invalid_argument("watertower: geometry parameters must be positive");
  }
  phase_time_ = height / ascent_rate;
}

WatertowerRef::Profile WatertowerRef::profile(double t) const {
  Profile p{};
  const double T = phase_time_;
  if (t <= T) {
    // Ascent along the wall at azimuth zero.
    const QuinticBlend b = quintic_blend(t / T);
    p.z = height_ * b.value;
    p.z_dot = height_ * b.rate / T;
    p.z_ddot = height_ * b.accel / (T * T);
  } else {
    // Helical descent: one full orbit while yawing with the azimuth.
    const QuinticBlend b = quintic_blend((t - T) / T);
    p.z = height_ * (1.0 - b.value);
    p.z_dot = -height_ * b.rate / T;
    p.z_ddot = -height_ * b.accel / (T * T);
    p.azim = 2.0 * M_PI * b.value;
    p.azim_dot = 2.0 * M_PI * b.rate / T;
    p.azim_ddot = 2.0 * M_PI * b.accel / (T * T);
  }
  return p;
}

ReferenceSample WatertowerRef::sample(double t) const {
  const Profile p = profile(std::max(0.0, std::min(t, duration())));
  const double rho = radius_ + standoff_;
  const double c = std::cos(p.azim), s = std::sin(p.azim);

  ReferenceSample ref;
  ref.position = Vec3(rho * c, rho * s, p.z);
  ref.velocity = Vec3(-rho * s * p.azim_dot, rho * c * p.azim_dot, p.z_dot);
  ref.acceleration =
      Vec3(-rho * (c * p.azim_dot * p.azim_dot + s * p.azim_ddot),
           rho * (-s * p.azim_dot * p.azim_dot + c * p.azim_ddot), p.z_ddot);
  // Tool on body x faces the wall: yaw of pi puts it on the inward normal,
  // and the descent yaw tracks the azimuth.
  ref.rotation = so3::rot_z(M_PI + p.azim);
  ref.angular_velocity = Vec3(0.0, 0.0, p.azim_dot);
  ref.angular_acceleration = Vec3(0.0, 0.0, p.azim_ddot);
  return ref;
}

std::optional<Vec3> WatertowerRef::aim_target(double t) const {
  const Profile p = profile(std::max(0.0, std::min(t, duration())));
  return Vec3(radius_ * std::cos(p.azim), radius_ * std::sin(p.azim), p.z);
}

Vec3 WatertowerRef::surface_normal(double t) const {
  const Profile p = profile(std::max(0.0, std::min(t, duration())));
  return Vec3(std::cos(p.azim), std::sin(p.azim), 0.0);
}

PipeRef::PipeRef(std::vector<PoseWaypoint> waypoints, double speed)
    : waypoints_(std::move(waypoints)) {
  const std::size_t n = waypoints_.size();
  if (n < 2) throw std::invalid_argument("pipe: at least two waypoints required");
  if (!(speed > 0.0)) throw std::invalid_argument("pipe: speed must be positive");

  times_.resize(n);
  times_[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double chord = (waypoints_[i].position - waypoints_[i - 1].position).norm();
    if (chord < 1e-9) {
      throw std::invalid_argument("pipe: coincident consecutive waypoints");
    }
    times_[i] = times_[i - 1] + chord / speed;
  }

  // Natural cubic spline second derivatives: tridiagonal solve per axis.
  second_derivs_.assign(n, Vec3::Zero());
  if (n > 2) {
    const std::size_t m = n - 2;
    std::vector<double> diag(m), upper(m), lower(m);
    std::vector<Vec3> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double h0 = times_[i + 1] - times_[i];
      const double h1 = times_[i + 2] - times_[i + 1];
      lower[i] = h0;
      diag[i] = 2.0 * (h0 + h1);
      upper[i] = h1;
      rhs[i] = 6.0 * ((waypoints_[i + 2].position - waypoints_[i + 1].position) / h1 -
                      (waypoints_[i + 1].position - waypoints_[i].position) / h0);
    }
    // Thomas algorithm.
    for (std::size_t i = 1; i < m; ++i) {
      const double w = lower[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    second_derivs_[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i >= 1; --i) {
      second_derivs_[i] = (rhs[i - 1] - upper[i - 1] * second_derivs_[i + 1]) / diag[i - 1];
    }
  }

  rot_increments_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    rot_increments_[i] =
        so3::log(waypoints_[i].rotation.transpose() * waypoints_[i + 1].rotation);
  }
}

int PipeRef::segment_index(double t) const {
  int lo = 0, hi = int(times_.size()) - 2;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (times_[mid] <= t) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

ReferenceSample PipeRef::sample(double t) const {
  ReferenceSample ref;
  if (t <= 0.0) t = 0.0;
  if (t >= times_.back()) {
    ref.position = waypoints_.back().position;
    ref.rotation = waypoints_.back().rotation;
    return ref;
  }

  const int i = segment_index(t);
  const double h = times_[i + 1] - times_[i];
  const double a = times_[i + 1] - t;
  const double b = t - times_[i];
  const Vec3& m0 = second_derivs_[i];
  const Vec3& m1 = second_derivs_[i + 1];
  const Vec3& p0 = waypoints_[i].position;
  const Vec3& p1 = waypoints_[i + 1].position;

  ref.position = m0 * (a * a * a) / (6.0 * h) + m1 * (b * b * b) / (6.0 * h) +
                 (p0 / h - m0 * h / 6.0) * a + (p1 / h - m1 * h / 6.0) * b;
  ref.velocity = -m0 * (a * a) / (2.0 * h) + m1 * (b * b) / (2.0 * h) -
                 (p0 / h - m0 * h / 6.0) + (p1 / h - m1 * h / 6.0);
  ref.acceleration = (m0 * a + m1 * b) / h;

  const QuinticBlend s = quintic_blend(b / h);
  const Vec3& xi = rot_increments_[i];
  ref.rotation = waypoints_[i].rotation * so3::exp(s.value * xi);
  ref.angular_velocity = xi * (s.rate / h);
  ref.angular_acceleration = xi * (s.accel / (h * h));
  return ref;
}

CorkscrewRef::CorkscrewRef(const Vec3& center, double radius, double pitch_per_turn,
                           double turns, double period_per_turn, double fd_step)
    : center_(center),
      radius_(radius),
      pitch_per_turn_(pitch_per_turn),
      turns_(turns),
      period_(period_per_turn),
      fd_step_(fd_step) {
  if (!(radius > 0.0)) throw std::invalid_argument("corkscrew: radius must be positive");
  if (!(period_per_turn > 0.0)) {
    throw std::invalid_argument("corkscrew: period_per_turn must be positive");
  }
  if (!(turns > 0.0)) throw std::invalid_argument("corkscrew: turns must be positive");
  if (!(fd_step > 0.0)) throw std::invalid_argument("corkscrew: fd_step must be positive");
}

double CorkscrewRef::duration() const { return turns_ * period_; }

Vec3 CorkscrewRef::helix_position(double t) const {
  const double theta = 2.0 * M_PI * t / period_;
  return center_ + Vec3(radius_ * std::cos(theta), radius_ * std::sin(theta),
                        pitch_per_turn_ * theta / (2.0 * M_PI));
}

Mat3 CorkscrewRef::attitude(double t) const {
  return look_at_rotation(center_ - helix_position(t));
}

ReferenceSample CorkscrewRef::sample(double t) const {
  const double rate = 2.0 * M_PI / period_;
  const double theta = rate * t;
  const double c = std::cos(theta), s = std::sin(theta);

  ReferenceSample ref;
  ref.position = helix_position(t);
  ref.velocity = Vec3(-radius_ * rate * s, radius_ * rate * c,
                      pitch_per_turn_ * rate / (2.0 * M_PI));
  ref.acceleration = Vec3(-radius_ * rate * rate * c, -radius_ * rate * rate * s, 0.0);
  ref.rotation = attitude(t);

  const double h = fd_step_;
  const auto body_rate = [&](double at) {
    return so3::log(attitude(at - h).transpose() * attitude(at + h)) / (2.0 * h);
  };
  ref.angular_velocity = body_rate(t);
  ref.angular_acceleration = (body_rate(t + h) - body_rate(t - h)) / (2.0 * h);
  return ref;
}

}  // namespace morph
