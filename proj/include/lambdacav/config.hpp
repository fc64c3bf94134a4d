#pragma once

// Run configuration: a flat "key = value" document ('#' starts a comment) plus
// command-line overrides, resolved against the default parameter set.
//
// Keys under the "diag." prefix are diagnostics written into manifests; they are
// accepted and ignored so that a manifest can be fed back as a config.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lambdacav/sweeps.hpp"

namespace lambdacav {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& message);
  const std::string& key() const { return key_; }
  int line() const { return line_; }  // 0 for command-line overrides

 private:
  std::string key_;
  int line_;
};

enum class Subcommand { spectrum, response, rcurve, probe };

const char* to_string(Subcommand s);
Subcommand parse_subcommand(std::string_view name);

struct RunConfig {
  Subcommand subcommand = Subcommand::probe;
  SystemParams params;  // Omega_p / Omega_c are derived from drive and epsilon
  DriveMap drive;
  double epsilon = 1.0;
  TruncationPolicy policy;
  std::vector<double> grid;
  NestedResponseGrid nested;
  double refine_resolution = 1e-3;
  bool delta_p_explicit = false;
  std::string out;
  unsigned workers = 1;

  /// Sweep specification for spectrum/response/rcurve runs.
  SweepSpec sweep_spec() const;
  /// Fully resolved parameters of a probe run.
  SystemParams probe_params() const;
};

/// key=value override from the command line.
using Override = std::pair<std::string, std::string>;

RunConfig parse_config(std::string_view text, Subcommand subcommand,
                       const std::vector<Override>& overrides = {});

/// Every key the config schema recognizes.
const std::vector<std::string>& config_keys();

/// Shortest decimal string that round-trips to the same binary64 value.
std::string format_double(double v);

/// Resolved config as a parseable document (no diagnostics).
std::string config_to_text(const RunConfig& config);

}  // namespace lambdacav
