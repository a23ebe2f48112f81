#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "morphquad/allocation.hpp"
#include "morphquad/sim.hpp"

namespace morph {

/// Frozen telemetry column set. Order and names are part of the output
/// contract; do not reorder.
std::string telemetry_csv_header();

/// Writes one row per record with 17-significant-digit formatting.
/// Quaternions are emitted w,x,y,z and kept hemisphere-continuous in time.
void write_telemetry_csv(const SimResult& result, std::ostream& out);

struct RunSummary {
  double rms_ep = 0.0;
  double max_ep = 0.0;
  double max_psi = 0.0;
  double mean_energy = 0.0;
  double saturation_fraction = 0.0;
  bool diverged = false;
  bool has_aim = false;
  double max_aim_error = 0.0;
  double rms_aim_error = 0.0;
};

RunSummary summarize(const SimResult& result);
nlohmann::json summary_json(const RunSummary& summary);

nlohmann::json envelope_json(const EnvelopeResult& envelope);

/// %.17g rendering used for every CSV number.
std::string format_g17(double x);

}  // namespace morph
