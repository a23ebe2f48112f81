#include "morphquad/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <Eigen/Geometry>

namespace morph {

namespace {

using Quat = Eigen::Quaterniond;

/// Continuity-aware quaternion extraction: flips the sign whenever the dot
/// product with the previous sample goes negative.
Quat continuous_quat(const Mat3& rotation, const Quat* previous) {
  Quat q(rotation);
  if (previous) {
    if (previous->coeffs().dot(q.coeffs()) < 0.0) q.coeffs() = -q.coeffs();
  } else if (q.w() < 0.0) {
    q.coeffs() = -q.coeffs();
  }
  return q;
}

void append(std::string& row, double x) {
  row += ',';
  row += format_g17(x);
}

}  // namespace

std::string format_g17(double x) {
  if (x == 0.0) return "0";  // canonicalize negative zero
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

std::string telemetry_csv_header() {
  return "t,px,py,pz,vx,vy,vz,qw,qx,qy,qz,wx,wy,wz,"
         "pdx,pdy,pdz,qdw,qdx,qdy,qdz,psi,ep_norm,"
         "fdx,fdy,fdz,taudx,taudy,taudz,fx,fy,fz,taux,tauy,tauz,"
         "alpha1,alpha2,alpha3,alpha4,beta1,beta2,beta3,beta4,"
         "omega1,omega2,omega3,omega4,sat_scale";
}

void write_telemetry_csv(const SimResult& result, std::ostream& out) {
  out << telemetry_csv_header() << '\n';
  const Quat* prev_q = nullptr;
  const Quat* prev_qd = nullptr;
  Quat q_store, qd_store;
  for (const TelemetryRecord& rec : result.records) {
    const Quat q = continuous_quat(rec.state.rotation, prev_q);
    const Quat qd = continuous_quat(rec.ref.rotation, prev_qd);
    q_store = q;
    qd_store = qd;
    prev_q = &q_store;
    prev_qd = &qd_store;

    std::string row = format_g17(rec.t);
    for (int i = 0; i < 3; ++i) append(row, rec.state.position[i]);
    for (int i = 0; i < 3; ++i) append(row, rec.state.velocity[i]);
    append(row, q.w());
    append(row, q.x());
    append(row, q.y());
    append(row, q.z());
    for (int i = 0; i < 3; ++i) append(row, rec.state.angular_velocity[i]);
    for (int i = 0; i < 3; ++i) append(row, rec.ref.position[i]);
    append(row, qd.w());
    append(row, qd.x());
    append(row, qd.y());
    append(row, qd.z());
    append(row, rec.psi);
    append(row, rec.ep_norm);
    for (int i = 0; i < 3; ++i) append(row, rec.commanded.force[i]);
    for (int i = 0; i < 3; ++i) append(row, rec.commanded.torque[i]);
    for (int i = 0; i < 3; ++i) append(row, rec.applied.force[i]);
    for (int i = 0; i < 3; ++i) append(row, rec.applied.torque[i]);
    for (int i = 0; i < 4; ++i) append(row, rec.commands[i].alpha);
    for (int i = 0; i < 4; ++i) append(row, rec.commands[i].beta);
    for (int i = 0; i < 4; ++i) append(row, rec.commands[i].omega);
    append(row, rec.sat_scale);
    out << row << '\n';
  }
}

RunSummary summarize(const SimResult& result) {
  RunSummary s;
  s.diverged = result.status != RunStatus::Ok;
  if (result.records.empty()) return s;

  double sum_ep_sq = 0.0;
  double sum_energy = 0.0;
  double sum_aim_sq = 0.0;
  std::size_t aim_count = 0;
  for (const TelemetryRecord& rec : result.records) {
    sum_ep_sq += rec.ep_norm * rec.ep_norm;
    s.max_ep = std::max(s.max_ep, rec.ep_norm);
    s.max_psi = std::max(s.max_psi, rec.psi);
    sum_energy += rec.energy;
    if (rec.aim_error) {
      ++aim_count;
      sum_aim_sq += *rec.aim_error * *rec.aim_error;
      s.max_aim_error = std::max(s.max_aim_error, *rec.aim_error);
    }
  }
  const double n = double(result.records.size());
  s.rms_ep = std::sqrt(sum_ep_sq / n);
  s.mean_energy = sum_energy / n;
  s.saturation_fraction = double(result.saturated_steps) / n;
  if (aim_count > 0) {
    s.has_aim = true;
    s.rms_aim_error = std::sqrt(sum_aim_sq / double(aim_count));
  }
  return s;
}

nlohmann::json summary_json(const RunSummary& s) {
  nlohmann::json j{{"rms_ep", s.rms_ep},
                   {"max_ep", s.max_ep},
                   {"max_psi", s.max_psi},
                   {"mean_energy", s.mean_energy},
                   {"saturation_fraction", s.saturation_fraction},
                   {"diverged", s.diverged}};
  if (s.has_aim) {
    j["max_aim_error"] = s.max_aim_error;
    j["rms_aim_error"] = s.rms_aim_error;
  }
  return j;
}

nlohmann::json envelope_json(const EnvelopeResult& envelope) {
  nlohmann::json samples = nlohmann::json::array();
  for (const EnvelopeSample& s : envelope.samples) {
    samples.push_back(
        {{"direction", {s.direction.x(), s.direction.y(), s.direction.z()}},
         {"max_magnitude", s.max_magnitude}});
  }
  return nlohmann::json{{"samples", samples},
                        {"summary",
                         {{"min", envelope.min_magnitude},
                          {"max", envelope.max_magnitude},
                          {"ratio", envelope.ratio}}}};
}

}  // namespace morph
