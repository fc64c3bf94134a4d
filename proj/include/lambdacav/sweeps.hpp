#pragma once

// Parameter sweeps over steady states: transmission spectra versus probe
// detuning, output response versus input intensity, and the negative-response
// percentage R versus cooperativity.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lambdacav/model.hpp"
#include "lambdacav/observables.hpp"
#include "lambdacav/steady.hpp"

namespace lambdacav {

enum class SweepKind { spectrum, response, rcurve };

const char* to_string(SweepKind kind);

/// Per-C epsilon^2 grid of the nested response sweeps of an R curve: geometric,
/// from clamp(1e-3 C, 1e-3, 0.25) to max(hi_floor, hi_per_C * C).
struct NestedResponseGrid {
  int points = 200;
  double hi_floor = 40.0;
  double hi_per_C = 0.15;

  std::vector<double> grid_for(double C) const;
};

struct SweepSpec {
  SweepKind kind = SweepKind::spectrum;
  SystemParams base;
  DriveMap drive = DriveMap::standard();
  double epsilon = 1.0;  // fixed input amplitude of a spectrum sweep
  std::vector<double> grid;
  TruncationPolicy policy;
  // rcurve only: recompute Delta_p = 1.1 g for every C.
  bool tie_delta_p = true;
  NestedResponseGrid nested;
  unsigned workers = 1;
  // Relative control-axis resolution of extremum refinement.
  double refine_resolution = 1e-3;

  void validate() const;
};

struct SweepRow {
  double control = 0.0;
  std::optional<ObservableSet> observables;  // empty on failure
  int fock_n = 0;
  int verified_against = 0;
  double residual = 0.0;
  double residual_bound = 0.0;
  double hermiticity_correction = 0.0;
  double trace_correction = 0.0;
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  std::string error;  // solver error code; empty on success

  bool ok() const { return error.empty(); }
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
};

struct Extremum {
  double control = 0.0;
  double height = 0.0;
};

struct NegativeResponsePair {
  Extremum max;
  Extremum min;
};

struct ExtremaReport {
  std::vector<Extremum> maxima;
  std::vector<Extremum> minima;
  // The series decreases from its first point: the leftmost peak sits on the grid edge.
  bool left_edge_max = false;

  /// (max, next min to its right) of the k-th peak counted from the left, k >= 1.
  /// A left-edge peak counts as peak 1 but never yields a pair.
  std::optional<NegativeResponsePair> pair(int peak_index) const;
};

/// Parameters of a single point of a spectrum or response sweep.
SystemParams point_params(const SweepSpec& spec, double control);

/// Solves one parameter set, catching solver failures into the row's error field.
SweepRow solve_row(const SystemParams& params, const TruncationPolicy& policy, double control);

SweepRow solve_point(const SweepSpec& spec, double control);

SweepResult run_spectrum(const SweepSpec& spec);
SweepResult run_response(const SweepSpec& spec);

/// Discrete strict three-point extrema of y over x, each refined by golden-section
/// search of `objective` between its grid neighbours (skipped if objective is empty).
ExtremaReport find_extrema(std::span<const double> x, std::span<const double> y,
                           const std::function<double(double)>& objective,
                           double rel_resolution = 1e-3, unsigned workers = 1);

/// Extrema of n_out; refinement re-solves the full steady state.
ExtremaReport find_extrema(const SweepResult& result);

/// 100 (h_max - h_min) / h_max for the requested peak; nullopt if the pair is missing.
std::optional<double> negative_response_R(const ExtremaReport& report, int peak_index);

struct RCurveRow {
  double C = 0.0;
  double g = 0.0;
  double Delta_p = 0.0;
  std::optional<double> R1;
  std::optional<double> R2;
  ExtremaReport extrema;
  SweepResult nested;
  std::string error;
};

struct RCurveResult {
  SweepSpec spec;
  std::vector<RCurveRow> rows;
};

/// Response sweep used for the R curve at cooperativity C.
SweepSpec nested_response_spec(const SweepSpec& spec, double C);

RCurveResult run_rcurve(const SweepSpec& spec);

/// Runs body(i) for i in [0, n) on at most `workers` threads.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace lambdacav
