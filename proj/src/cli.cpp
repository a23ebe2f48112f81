#include "morphquad/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "morphquad/parallel.hpp"
#include "morphquad/telemetry.hpp"

namespace morph {

namespace {

namespace fs = std::filesystem;

ScenarioConfig load_with_overrides(const std::string& path, const CliOverrides& ov) {
  ScenarioConfig cfg = load_scenario(path);
  if (ov.out_dir) cfg.output_dir = *ov.out_dir;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.n_dirs) {
    if (*ov.n_dirs < 1) throw ConfigError("--n-dirs: expected a positive count");
    cfg.envelope.n_dirs = *ov.n_dirs;
  }
  if (ov.samples) {
    if (*ov.samples < 1) throw ConfigError("--samples: expected a positive count");
    cfg.roa.samples = *ov.samples;
  }
  return cfg;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << contents;
}

Vec3 random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

}  // namespace

void fit_decay(const std::vector<double>& times, const std::vector<double>& psi,
               double& slope, double& r2) {
  slope = 0.0;
  r2 = 1.0;

  double peak = 0.0;
  std::size_t peak_idx = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (psi[i] > peak) {
      peak = psi[i];
      peak_idx = i;
    }
  }
  const double upper = std::min(0.1, 0.5 * peak);
  constexpr double kLower = 1e-9;
  if (peak <= kLower) return;

  std::vector<double> xs, ys;
  for (std::size_t i = peak_idx; i < psi.size(); ++i) {
    if (psi[i] < upper && psi[i] > kLower) {
      xs.push_back(times[i]);
      ys.push_back(std::log(psi[i]));
    }
  }
  if (xs.size() < 10) return;

  const double n = double(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) return;
  slope = (n * sxy - sx * sy) / denom;
  const double ss_tot = syy - sy * sy / n;
  if (ss_tot < 1e-12) {
    r2 = 1.0;
    return;
  }
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double fit = intercept + slope * xs[i];
    ss_res += (ys[i] - fit) * (ys[i] - fit);
  }
  r2 = 1.0 - ss_res / ss_tot;
}

std::vector<InitialPerturbation> roa_initial_conditions(const ScenarioConfig& cfg,
                                                        int samples,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle_dist(
      cfg.roa.angle_min_deg * M_PI / 180.0, cfg.roa.angle_max_deg * M_PI / 180.0);
  const double gain_ratio = 2.0 * cfg.gains.kR / cfg.vehicle.max_inertia_eigenvalue();

  std::vector<InitialPerturbation> inits;
  inits.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    InitialPerturbation init;
    init.attitude_angle = angle_dist(rng);
    init.attitude_axis = random_unit_vector(rng);
    const double psi0 = 1.0 - std::cos(init.attitude_angle);
    const double bound = std::sqrt(gain_ratio * (2.0 - psi0));
    init.angular_velocity_offset =
        cfg.roa.e_w_fraction * bound * random_unit_vector(rng);
    inits.push_back(init);
  }
  return inits;
}

std::vector<RoaOutcome> run_roa_sweep(const ScenarioConfig& cfg, int samples,
                                      std::uint64_t seed) {
  const std::vector<InitialPerturbation> inits = roa_initial_conditions(cfg, samples, seed);

  TrajectoryConfig traj_cfg = cfg.trajectory.value_or(TrajectoryConfig{});
  SimConfig sim_cfg = cfg.sim;
  sim_cfg.detail = TelemetryDetail::ErrorsOnly;

  std::vector<RoaOutcome> outcomes(inits.size());
  parallel_for(inits.size(), [&](std::size_t i) {
    const auto trajectory = build_trajectory(traj_cfg, sim_cfg.dt);
    const RigidState start = apply_initial_perturbation(*trajectory, inits[i]);
    const ReferenceSample ref0 = trajectory->sample(0.0);

    RoaOutcome& o = outcomes[i];
    o.sample = int(i);
    o.angle = inits[i].attitude_angle;
    const RoaCheck check = in_region_of_attraction(start, ref0, cfg.gains, cfg.vehicle);
    o.psi0 = check.psi;
    o.e_w0 = std::sqrt(check.e_w_sq);
    o.e_w_bound = std::sqrt(std::max(0.0, check.e_w_bound_sq));
    o.inside_roa = check.inside;

    const SimResult result = run_scenario(sim_cfg, cfg.vehicle, cfg.gains, *trajectory, start);

    std::vector<double> times, psi;
    times.reserve(result.records.size());
    psi.reserve(result.records.size());
    for (const TelemetryRecord& rec : result.records) {
      times.push_back(rec.t);
      psi.push_back(rec.psi);
      o.max_psi = std::max(o.max_psi, rec.psi);
    }
    o.final_psi = psi.empty() ? 0.0 : psi.back();
    o.converged = result.status == RunStatus::Ok && o.final_psi < cfg.roa.converge_psi;

    // First time psi drops below threshold for good.
    o.t_converge = -1.0;
    for (std::size_t k = psi.size(); k-- > 0;) {
      if (psi[k] >= cfg.roa.converge_psi) {
        if (k + 1 < psi.size()) o.t_converge = times[k + 1];
        break;
      }
      if (k == 0) o.t_converge = times.front();
    }
    if (!o.converged) o.t_converge = -1.0;

    fit_decay(times, psi, o.decay_slope, o.decay_r2);
  });
  return outcomes;
}

std::string roa_csv_header() {
  return "sample,angle_rad,psi0,ew0,ew_bound,inside_roa,converged,t_converge,"
         "decay_slope,decay_r2,final_psi,max_psi";
}

void write_roa_csv(const std::vector<RoaOutcome>& outcomes, std::ostream& out) {
  out << roa_csv_header() << '\n';
  for (const RoaOutcome& o : outcomes) {
    out << o.sample << ',' << format_g17(o.angle) << ',' << format_g17(o.psi0) << ','
        << format_g17(o.e_w0) << ',' << format_g17(o.e_w_bound) << ','
        << (o.inside_roa ? 1 : 0) << ',' << (o.converged ? 1 : 0) << ','
        << format_g17(o.t_converge) << ',' << format_g17(o.decay_slope) << ','
        << format_g17(o.decay_r2) << ',' << format_g17(o.final_psi) << ','
        << format_g17(o.max_psi) << '\n';
  }
}

int cmd_simulate(const std::string& config_path, const CliOverrides& overrides,
                 std::ostream& err) {
  ScenarioConfig cfg;
  try {
    cfg = load_with_overrides(config_path, overrides);
    if (!cfg.trajectory) throw ConfigError("trajectory: block required for simulate");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const auto trajectory = build_trajectory(*cfg.trajectory, cfg.sim.dt);
    std::optional<RigidState> start;
    if (cfg.initial) start = apply_initial_perturbation(*trajectory, *cfg.initial);

    const SimResult result =
        run_scenario(cfg.sim, cfg.vehicle, cfg.gains, *trajectory, start);

    fs::create_directories(cfg.output_dir);
    {
      std::ofstream csv(fs::path(cfg.output_dir) / "telemetry.csv", std::ios::binary);
      if (!csv) throw std::runtime_error("cannot open telemetry.csv for writing");
      write_telemetry_csv(result, csv);
    }
    const RunSummary summary = summarize(result);
    write_file(fs::path(cfg.output_dir) / "summary.json",
               summary_json(summary).dump(2) + "\n");

    if (result.status != RunStatus::Ok) {
      err << "simulation failed: " << result.message << '\n';
      return kExitDiverged;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_envelope(const std::string& config_path, const CliOverrides& overrides,
                 std::ostream& err) {
  ScenarioConfig cfg;
  try {
    cfg = load_with_overrides(config_path, overrides);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const EnvelopeResult force = force_envelope(cfg.vehicle, cfg.envelope.n_dirs);
    const EnvelopeResult torque = torque_envelope(cfg.vehicle, cfg.envelope.n_dirs);
    nlohmann::json doc{{"force", envelope_json(force)}, {"torque", envelope_json(torque)}};
    fs::create_directories(cfg.output_dir);
    write_file(fs::path(cfg.output_dir) / "envelope.json", doc.dump(2) + "\n");
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_roa(const std::string& config_path, const CliOverrides& overrides,
            std::ostream& err) {
  ScenarioConfig cfg;
  try {
    cfg = load_with_overrides(config_path, overrides);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const std::vector<RoaOutcome> outcomes = run_roa_sweep(cfg, cfg.roa.samples, cfg.seed);
    fs::create_directories(cfg.output_dir);
    std::ofstream csv(fs::path(cfg.output_dir) / "roa.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open roa.csv for writing");
    write_roa_csv(outcomes, csv);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_allocate(const std::array<double, 3>& force, const std::array<double, 3>& torque,
                 const std::string& config_path, const CliOverrides& overrides,
                 std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  try {
    cfg = load_with_overrides(config_path, overrides);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    Wrench w;
    w.force = Vec3(force[0], force[1], force[2]);
    w.torque = Vec3(torque[0], torque[1], torque[2]);

    const AllocationResult alloc =
        allocate_with_gimbal_fallback(w, cfg.vehicle, cfg.sim.gimbal_eps);
    const auto [thrusts, sat] = saturate_thrust_set(alloc.thrusts, cfg.vehicle);
    const ThrustSet oracle = minimum_norm_oracle(w, cfg.vehicle);

    double oracle_diff = 0.0;
    for (int i = 0; i < 4; ++i) {
      oracle_diff += (alloc.thrusts.thrust[i] - oracle.thrust[i]).squaredNorm();
    }
    oracle_diff = std::sqrt(oracle_diff);

    out << "arm        tx            ty            tz          alpha       beta       omega\n";
    for (int i = 0; i < 4; ++i) {
      const ArmCommand cmd = extract_arm_command(thrusts.thrust[i], cfg.vehicle);
      char line[160];
      std::snprintf(line, sizeof(line),
                    "%3d %13.6f %13.6f %13.6f %11.6f %10.6f %11.3f\n", i + 1,
                    thrusts.thrust[i].x(), thrusts.thrust[i].y(),
                    thrusts.thrust[i].z(), cmd.alpha, cmd.beta, cmd.omega);
      out << line;
    }
    out << "energy: " << format_g17(thrusts.energy()) << '\n';
    out << "oracle_diff: " << format_g17(oracle_diff) << '\n';
    out << "saturated: " << (sat.saturated ? "yes" : "no")
        << " (scale " << format_g17(sat.scale) << ")\n";
    out << "gimbal_fallback: " << (alloc.fallback_active ? "yes" : "no") << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace morph
