#pragma once

#include <ostream>
#include <string>

#include "lambdacav/config.hpp"

namespace lambdacav {

struct RunOutput {
  int exit_status = 0;
  std::string csv;
  std::string manifest;
  std::string report;  // human-readable summary (probe observables)
};

/// Executes a run without touching the filesystem.
RunOutput execute(const RunConfig& config);

/// Executes and writes <out> and <out>.manifest. Probe runs write files only when
/// an output path is set. Returns the process exit status.
int run(const RunConfig& config, std::ostream& log);

std::string sweep_csv(const SweepResult& result);
std::string rcurve_csv(const RCurveResult& result);

}  // namespace lambdacav
