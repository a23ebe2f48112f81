#include <array>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "morphquad/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"morphquad: morphable co-axial quadrotor simulator and allocation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  morph::CliOverrides overrides;
  std::string out_dir;
  std::uint64_t seed = 0;
  int n_dirs = 0;
  int samples = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario config file")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", seed, "rng seed (overrides config)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run a closed-loop scenario");
  add_common(simulate);

  CLI::App* envelope = app.add_subcommand("envelope", "compute force/torque envelopes");
  add_common(envelope);
  envelope->add_option("--n-dirs", n_dirs, "number of sampled directions");

  CLI::App* roa = app.add_subcommand("roa", "Monte-Carlo region-of-attraction sweep");
  add_common(roa);
  roa->add_option("--samples", samples, "number of Monte-Carlo samples");

  CLI::App* allocate = app.add_subcommand("allocate", "print the allocation for one wrench");
  std::array<double, 3> force{0.0, 0.0, 0.0};
  std::array<double, 3> torque{0.0, 0.0, 0.0};
  allocate->add_option("force", force, "desired force fx fy fz [N]")->required();
  allocate->add_option("torque", torque, "desired torque tx ty tz [N m]")->required();
  add_common(allocate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : morph::kExitConfig;
  }

  if (simulate->count("--out") || envelope->count("--out") || roa->count("--out") ||
      allocate->count("--out")) {
    overrides.out_dir = out_dir;
  }
  if (simulate->count("--seed") || envelope->count("--seed") || roa->count("--seed") ||
      allocate->count("--seed")) {
    overrides.seed = seed;
  }
  if (envelope->count("--n-dirs")) overrides.n_dirs = n_dirs;
  if (roa->count("--samples")) overrides.samples = samples;

  if (simulate->parsed()) return morph::cmd_simulate(config_path, overrides, std::cerr);
  if (envelope->parsed()) return morph::cmd_envelope(config_path, overrides, std::cerr);
  if (roa->parsed()) return morph::cmd_roa(config_path, overrides, std::cerr);
  if (allocate->parsed()) {
    return morph::cmd_allocate(force, torque, config_path, overrides, std::cout, std::cerr);
  }
  return morph::kExitFailure;
}
