#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "morphquad/config.hpp"

namespace morph {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDiverged = 3;

/// Command-line overrides applied on top of the scenario file.
struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_dirs;
  std::optional<int> samples;
};

/// Outcome of one region-of-attraction Monte-Carlo run.
struct RoaOutcome {
  int sample = 0;
  double angle = 0.0;      // initial rotation angle, rad
  double psi0 = 0.0;
  double e_w0 = 0.0;       // |e_w(0)|
  double e_w_bound = 0.0;  // norm bound from the attraction condition
  bool inside_roa = false;
  bool converged = false;
  double t_converge = -1.0;  // first time psi stays below the threshold
  double decay_slope = 0.0;  // d ln(psi) / dt over the decay window
  double decay_r2 = 0.0;
  double final_psi = 0.0;
  double max_psi = 0.0;
};

/// Log-linear fit of psi(t) over its decay window (after the peak, between
/// psi = min(0.1, peak/2) and 1e-9). r2 reports the fit quality; runs with
/// no usable window come back with slope 0 and r2 1.
void fit_decay(const std::vector<double>& times, const std::vector<double>& psi,
               double& slope, double& r2);

/// Draws the deterministic Monte-Carlo initial conditions for cmd_roa.
std::vector<InitialPerturbation> roa_initial_conditions(const ScenarioConfig& cfg,
                                                        int samples,
                                                        std::uint64_t seed);

/// Runs every sample and collects outcomes in order.
std::vector<RoaOutcome> run_roa_sweep(const ScenarioConfig& cfg, int samples,
                                      std::uint64_t seed);

std::string roa_csv_header();
void write_roa_csv(const std::vector<RoaOutcome>& outcomes, std::ostream& out);

// Subcommands. Each returns a process exit code; diagnostics go to `err`.
int cmd_simulate(const std::string& config_path, const CliOverrides& overrides,
                 std::ostream& err);
int cmd_envelope(const std::string& config_path, const CliOverrides& overrides,
                 std::ostream& err);
int cmd_roa(const std::string& config_path, const CliOverrides& overrides,
            std::ostream& err);
int cmd_allocate(const std::array<double, 3>& force, const std::array<double, 3>& torque,
                 const std::string& config_path, const CliOverrides& overrides,
                 std::ostream& out, std::ostream& err);

}  // namespace morph
