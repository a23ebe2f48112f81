#include "morphquad/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "morphquad/parallel.hpp"

namespace morph {

namespace {

double clamp_unit(double x) { return std::max(-1.0, std::min(1.0, x)); }

void require_planar_layout(const VehicleParams& params) {
  if (std::abs(params.arm_height_offset) > 1e-12) {
    throw std::invalid_argument(
        "allocation: closed-form allocation requires a planar arm layout "
        "(arm_height_offset == 0)");
  }
}

/// Signs of the roll and pitch differentials per arm.
constexpr double kRollSign[4] = {+1.0, -1.0, -1.0, +1.0};
constexpr double kPitchSign[4] = {-1.0, -1.0, +1.0, +1.0};

}  // namespace

double ThrustSet::energy() const {
  double e = 0.0;
  for (const Vec3& t : thrust) e += t.squaredNorm();
  return 0.5 * e;
}

double ThrustSet::max_norm() const {
  double m = 0.0;
  for (const Vec3& t : thrust) m = std::max(m, t.norm());
  return m;
}

Wrench thrust_set_wrench(const ThrustSet& ts, const VehicleParams& params) {
  Wrench w;
  for (int i = 0; i < 4; ++i) {
    w.force += ts.thrust[i];
    w.torque += params.arm_position(i).cross(ts.thrust[i]);
  }
  return w;
}

std::array<Vec3, 4> yaw_basis(const VehicleParams& params) {
  const double r = params.arm_radius();
  const double lx = params.arm_half_length / r;
  const double ly = params.arm_half_breadth / r;
  return {Vec3(-ly, lx, 0.0), Vec3(ly, lx, 0.0), Vec3(ly, -lx, 0.0), Vec3(-ly, -lx, 0.0)};
}

ThrustSet allocate_wrench(const Wrench& w, const VehicleParams& params) {
  require_planar_layout(params);
  const double lx = params.arm_half_length;
  const double ly = params.arm_half_breadth;
  const double r = params.arm_radius();
  const auto basis = yaw_basis(params);

  ThrustSet ts;
  for (int i = 0; i < 4; ++i) {
    ts.thrust[i] = 0.25 * w.force +
                   (kRollSign[i] * w.torque.x() / (4.0 * ly)) * Vec3::UnitZ() +
                   (kPitchSign[i] * w.torque.y() / (4.0 * lx)) * Vec3::UnitZ() +
                   (w.torque.z() / (4.0 * r)) * basis[i];
  }
  return ts;
}

ThrustSet minimum_norm_oracle(const Wrench& w, const VehicleParams& params) {
  Eigen::Matrix<double, 6, 12> m;
  for (int i = 0; i < 4; ++i) {
    m.block<3, 3>(0, 3 * i) = Mat3::Identity();
    m.block<3, 3>(3, 3 * i) = so3::hat(params.arm_position(i));
  }
  const Eigen::Matrix<double, 6, 6> gram = m * m.transpose();
  Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(gram);
  if (!lu.isInvertible()) {
    throw std::domain_error("minimum_norm_oracle: arm geometry is rank-deficient");
  }
  const Eigen::Matrix<double, 12, 1> t = m.transpose() * lu.solve(w.stacked());
  ThrustSet ts;
  for (int i = 0; i < 4; ++i) ts.thrust[i] = t.segment<3>(3 * i);
  return ts;
}

ArmCommand extract_arm_command(const Vec3& thrust, const VehicleParams& params) {
  ArmCommand cmd;
  const double norm = thrust.norm();
  if (norm == 0.0) return cmd;

  cmd.omega = std::sqrt(norm / params.thrust_coeff);
  const Vec3 dir = thrust / norm;
  cmd.beta = -std::asin(clamp_unit(dir.y())) + 0.0;  // +0.0 drops negative zero

  const double cos_beta = std::cos(cmd.beta);
  if (cos_beta < 1e-12) {
    // Thrust along +-j: alpha has no effect on the direction.
    if (std::abs(dir.x()) > 1e-9 || std::abs(dir.z()) > 1e-9) {
      throw std::invalid_argument("extract_arm_command: inconsistent thrust direction at beta = +-pi/2");
    }
    cmd.alpha = 0.0;
    return cmd;
  }

  const double ratio = dir.x() / cos_beta;
  if (std::abs(ratio) > 1.0 + 1e-9) {
    throw std::invalid_argument("extract_arm_command: |t_x| exceeds |cos beta|");
  }
  const double asin_term = std::asin(clamp_unit(ratio));
  if (thrust.z() < 0.0 && thrust.x() >= 0.0) {
    cmd.alpha = M_PI - asin_term;
  } else if (thrust.z() < 0.0 && thrust.x() < 0.0) {
    cmd.alpha = -M_PI - asin_term;
  } else {
    cmd.alpha = asin_term;
  }
  return cmd;
}

AllocationResult allocate_with_gimbal_fallback(const Wrench& w,
                                               const VehicleParams& params,
                                               double gimbal_eps) {
  AllocationResult result;
  result.thrusts = allocate_wrench(w, params);
  if (w.torque.z() == 0.0) return result;

  // Tilt angle of each nominal thrust: |beta| approaches pi/2 as the
  // direction approaches +-j and yaw authority through the servos is lost.
  bool near_lock = false;
  for (const Vec3& t : result.thrusts.thrust) {
    const double norm = t.norm();
    if (norm == 0.0) continue;
    const double beta = std::asin(clamp_unit(std::abs(t.y()) / norm));
    if (beta > M_PI / 2.0 - gimbal_eps) {
      near_lock = true;
      break;
    }
  }
  if (!near_lock) return result;

  result.fallback_active = true;
  const double lx = params.arm_half_length;
  const double ly = params.arm_half_breadth;
  const double delta = w.torque.z() / (4.0 * lx);
  for (int i = 0; i < 4; ++i) {
    const double sign_lx = params.arm_position(i).x() > 0.0 ? 1.0 : -1.0;
    result.thrusts.thrust[i] =
        0.25 * w.force +
        (kRollSign[i] * w.torque.x() / (4.0 * ly)) * Vec3::UnitZ() +
        (kPitchSign[i] * w.torque.y() / (4.0 * lx)) * Vec3::UnitZ() +
        (sign_lx * delta) * Vec3::UnitY();
  }
  return result;
}

std::pair<ThrustSet, SaturationReport> saturate_thrust_set(const ThrustSet& ts,
                                                           const VehicleParams& params) {
  SaturationReport report;
  report.max_norm_before = ts.max_norm();
  if (report.max_norm_before <= params.thrust_max) {
    return {ts, report};
  }
  report.saturated = true;
  report.scale = params.thrust_max / report.max_norm_before;
  ThrustSet scaled = ts;
  for (Vec3& t : scaled.thrust) t *= report.scale;
  return {scaled, report};
}

std::vector<Vec3> fibonacci_sphere(int n_dirs) {
  if (n_dirs < 1) throw std::invalid_argument("fibonacci_sphere: n_dirs must be >= 1");
  std::vector<Vec3> dirs;
  dirs.reserve(n_dirs);
  const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n_dirs; ++i) {
    const double z = n_dirs == 1 ? 0.0 : 1.0 - 2.0 * i / double(n_dirs - 1);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * i;
    dirs.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return dirs;
}

namespace {

/// Largest s such that allocate_wrench(s * unit_wrench) stays within the
/// per-arm limit, by bisection. The allocation is linear in the wrench, so
/// feasibility is monotone in s.
double bisect_envelope(const Vec3& dir, bool force_dir, const VehicleParams& params) {
  const auto feasible = [&](double s) {
    Wrench w;
    if (force_dir) {
      w.force = s * dir;
    } else {
      w.torque = s * dir;
    }
    return allocate_wrench(w, params).max_norm() <= params.thrust_max;
  };

  double lo = 0.0;
  double hi = 8.0 * params.thrust_max * std::max(1.0, params.arm_radius());
  while (feasible(hi)) hi *= 2.0;
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

EnvelopeResult scan_envelope(const VehicleParams& params, int n_dirs, bool force_dir) {
  require_planar_layout(params);
  const std::vector<Vec3> dirs = fibonacci_sphere(n_dirs);
  EnvelopeResult result;
  result.samples.resize(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t i) {
    result.samples[i].direction = dirs[i];
    result.samples[i].max_magnitude = bisect_envelope(dirs[i], force_dir, params);
  });
  result.min_magnitude = result.samples.front().max_magnitude;
  result.max_magnitude = result.samples.front().max_magnitude;
  for (const auto& s : result.samples) {
    result.min_magnitude = std::min(result.min_magnitude, s.max_magnitude);
    result.max_magnitude = std::max(result.max_magnitude, s.max_magnitude);
  }
  result.ratio = result.max_magnitude > 0.0 ? result.min_magnitude / result.max_magnitude : 0.0;
  return result;
}

}  // namespace

EnvelopeResult force_envelope(const VehicleParams& params, int n_dirs) {
  return scan_envelope(params, n_dirs, true);
}

EnvelopeResult torque_envelope(const VehicleParams& params, int n_dirs) {
  return scan_envelope(params, n_dirs, false);
}

}  // namespace morph
