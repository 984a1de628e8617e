#pragma once

#include <string>

#include "nlkg/evolve.hpp"
#include "nlkg/final_data.hpp"
#include "nlkg/profiles.hpp"
#include "nlkg/residual.hpp"

// Run configuration as dotted-key text, one `key = value` per line, with
// `#` comments. Unknown keys and out-of-range values are rejected with the
// offending line number or key name. An empty file yields the defaults
// below, and parse(echo(c)) reproduces c exactly.

namespace nlkg {

struct EmitSet {
  bool csv = true;
  bool json = true;
  bool gnuplot = true;
};

struct RunConfig {
  FinalState data;             // phi0.amplitude/width, phi1.amplitude/width
  double data_weight = 0.0;    // data.weight; > 0 rescales to this sup norm
  ProfileConfig profile;       // profile.*, nonlinearity.*
  ScanConfig residual;         // residual.*
  TrackConfig evolve;          // evolve.*
  std::string output_dir = ".";
  EmitSet emit;
};

// Throws std::runtime_error naming the line ("line 3: ...") for malformed
// or unknown keys and the key for range violations.
RunConfig parse_config(const std::string& text);

// Reads and parses; throws std::runtime_error if the file cannot be read.
RunConfig load_config(const std::string& path);

// Canonical text covering every key; parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& config);

// Scattering data from the configured final state, rescaled to data.weight
// when that is positive.
ScatteringData configured_data(const RunConfig& config);

}  // namespace nlkg
