#include "lambdacav/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace lambdacav {

const char* to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::spectrum: return "spectrum";
    case SweepKind::response: return "response";
    case SweepKind::rcurve: return "rcurve";
  }
  return "unknown";
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  const std::size_t nthreads = std::min<std::size_t>(std::max(1u, workers), n);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> NestedResponseGrid::grid_for(double C) const {
  if (points < 2) throw std::domain_error("NestedResponseGrid: points must be >= 2");
  const double lo = std::clamp(1e-3 * C, 1e-3, 0.25);
  const double hi = std::max(hi_floor, hi_per_C * C);
  std::vector<double> grid(points);
  const double ratio = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = lo * std::exp(ratio * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

void SweepSpec::validate() const {
  base.validate();
  policy.validate();
  if (grid.size() < 2) throw std::domain_error("SweepSpec: grid needs at least 2 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw std::domain_error("SweepSpec: grid values must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::domain_error("SweepSpec: grid must be strictly increasing");
  }
  if (kind != SweepKind::spectrum && grid.front() < 0.0)
    throw std::domain_error("SweepSpec: grid values must be >= 0 for this sweep kind");
  if (!(epsilon >= 0.0)) throw std::domain_error("SweepSpec: epsilon must be >= 0");
}

SystemParams point_params(const SweepSpec& spec, double control) {
  SystemParams p = spec.base;
  Drive drive{};
  switch (spec.kind) {
    case SweepKind::spectrum:
      drive = drive_from_input(spec.epsilon, spec.drive);
      p.Delta_p = control;
      break;
    case SweepKind::response:
      drive = drive_from_input(std::sqrt(control), spec.drive);
      break;
    case SweepKind::rcurve:
      throw std::domain_error("point_params: rcurve points are nested response sweeps");
  }
  p.Omega_p = drive.Omega_p;
  p.Omega_c = drive.Omega_c;
  return p;
}

SweepRow solve_point(const SweepSpec& spec, double control) {
  return solve_row(point_params(spec, control), spec.policy, control);
}

SweepRow solve_row(const SystemParams& p, const TruncationPolicy& policy, double control) {
  SweepRow row;
  row.control = control;
  try {
    const DensityMatrix state = adaptive_truncation(p, policy);
    row.observables = measure(state, p);
    row.fock_n = state.trunc_used.N;
    row.verified_against = state.verified_against;
    row.residual = state.residual;
    row.residual_bound = state.residual_bound;
    row.hermiticity_correction = state.hermiticity_correction;
    row.trace_correction = state.trace_correction;
    row.trace_error = state.trace_error;
    row.hermiticity_error = state.hermiticity_error;
    row.min_eigenvalue = state.min_eigenvalue;
  } catch (const TruncationNotConverged& e) {
    row.error = e.code();
    row.fock_n = e.best_state().trunc_used.N;
    row.residual = e.best_state().residual;
  } catch (const SolverError& e) {
    row.error = e.code();
  }
  return row;
}

namespace {

SweepResult run_grid(const SweepSpec& spec, SweepKind expected) {
  if (spec.kind != expected)
    throw std::domain_error(std::string("sweep: expected kind ") + to_string(expected));
  spec.validate();
  SweepResult result{spec, std::vector<SweepRow>(spec.grid.size())};
  parallel_for(spec.grid.size(), spec.workers,
               [&](std::size_t i) { result.rows[i] = solve_point(spec, spec.grid[i]); });
  return result;
}

constexpr double kInvPhi = 0.6180339887498949;

// Golden-section maximization of f on [a, b]; `best` holds the grid sample.
Extremum golden_maximize(const std::function<double(double)>& f, double a, double b, Extremum best,
                         double resolution) {
  auto consider = [&](double x, double fx) {
    if (fx > best.height) best = Extremum{x, fx};
  };
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  consider(c, fc);
  consider(d, fd);
  while (b - a > resolution) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  return best;
}

}  // namespace

SweepResult run_spectrum(const SweepSpec& spec) { return run_grid(spec, SweepKind::spectrum); }

SweepResult run_response(const SweepSpec& spec) { return run_grid(spec, SweepKind::response); }

ExtremaReport find_extrema(std::span<const double> x, std::span<const double> y,
                           const std::function<double(double)>& objective, double rel_resolution,
                           unsigned workers) {
  if (x.size() != y.size()) throw std::domain_error("find_extrema: x and y sizes differ");
  ExtremaReport report;
  if (x.size() < 5) throw std::domain_error("find_extrema: needs at least 5 samples");
  report.left_edge_max = y[0] > y[1];

  struct Candidate {
    std::size_t index;
    bool is_max;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) candidates.push_back({i, true});
    if (y[i] < y[i - 1] && y[i] < y[i + 1]) candidates.push_back({i, false});
  }

  std::vector<Extremum> refined(candidates.size());
  parallel_for(candidates.size(), workers, [&](std::size_t k) {
    const auto [i, is_max] = candidates[k];
    Extremum grid_point{x[i], y[i]};
    if (!objective) {
      refined[k] = grid_point;
      return;
    }
    const double resolution = rel_resolution * std::max(std::abs(x[i]), 1e-12);
    const double sign = is_max ? 1.0 : -1.0;
    auto f = [&](double c) {
      const double v = objective(c);
      return std::isfinite(v) ? sign * v : -std::numeric_limits<double>::infinity();
    };
    Extremum best = golden_maximize(f, x[i - 1], x[i + 1], {x[i], sign * y[i]}, resolution);
    refined[k] = Extremum{best.control, sign * best.height};
  });

  for (std::size_t k = 0; k < candidates.size(); ++k)
    (candidates[k].is_max ? report.maxima : report.minima).push_back(refined[k]);
  return report;
}

ExtremaReport find_extrema(const SweepResult& result) {
  std::vector<double> x, y;
  for (const SweepRow& row : result.rows) {
    if (!row.ok()) continue;
    x.push_back(row.control);
    y.push_back(row.observables->n_out);
  }
  const SweepSpec& spec = result.spec;
  auto objective = [&spec](double control) {
    const SweepRow row = solve_point(spec, control);
    return row.ok() ? row.observables->n_out : std::numeric_limits<double>::quiet_NaN();
  };
  return find_extrema(x, y, objective, spec.refine_resolution, spec.workers);
}

std::optional<NegativeResponsePair> ExtremaReport::pair(int peak_index) const {
  if (peak_index < 1) return std::nullopt;
  const int idx = left_edge_max ? peak_index - 2 : peak_index - 1;
  if (idx < 0 || idx >= static_cast<int>(maxima.size())) return std::nullopt;
  const Extremum& mx = maxima[idx];
  for (const Extremum& mn : minima)
    if (mn.control > mx.control) return NegativeResponsePair{mx, mn};
  return std::nullopt;
}

std::optional<double> negative_response_R(const ExtremaReport& report, int peak_index) {
  const auto p = report.pair(peak_index);
  if (!p || !(p->max.height > 0.0)) return std::nullopt;
  return 100.0 * (p->max.height - p->min.height) / p->max.height;
}

SweepSpec nested_response_spec(const SweepSpec& spec, double C) {
  SweepSpec nested = spec;
  nested.kind = SweepKind::response;
  nested.base.g = g_from_C(C, spec.base.Gamma());
  if (spec.tie_delta_p) nested.base.Delta_p = 1.1 * nested.base.g;
  nested.grid = spec.nested.grid_for(C);
  return nested;
}

RCurveResult run_rcurve(const SweepSpec& spec) {
  if (spec.kind != SweepKind::rcurve) throw std::domain_error("run_rcurve: expected kind rcurve");
  spec.validate();
  RCurveResult result{spec, {}};
  result.rows.reserve(spec.grid.size());
  // Outer loop is serial; the nested sweeps and refinements use the worker bound.
  for (double C : spec.grid) {
    RCurveRow row;
    row.C = C;
    const SweepSpec nested = nested_response_spec(spec, C);
    row.g = nested.base.g;
    row.Delta_p = nested.base.Delta_p;
    row.nested = run_response(nested);
    const auto failed = std::count_if(row.nested.rows.begin(), row.nested.rows.end(),
                                      [](const SweepRow& r) { return !r.ok(); });
    if (failed > 0) row.error = "nested:" + std::to_string(failed) + "_failed_points";
    if (row.nested.rows.size() - failed >= 5) {
      row.extrema = find_extrema(row.nested);
      row.R1 = negative_response_R(row.extrema, 1);
      row.R2 = negative_response_R(row.extrema, 2);
    } else {
      row.error = "nested:insufficient_points";
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace lambdacav
