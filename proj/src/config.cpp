#include "lambdacav/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace lambdacav {

namespace {

struct Entry {
  std::string value;
  int line;
};

const std::vector<double> kDefaultCGrid = {0, 10, 25, 50, 85, 100, 150, 200, 250, 350, 500, 750, 1000};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const Entry& e) {
  const std::string_view s = trim(e.value);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(key, e.line, "expected a real number, got '" + e.value + "'");
  if (!std::isfinite(v)) throw ConfigError(key, e.line, "value must be finite");
  return v;
}

// Accepts "p/q" as well as decimals.
double parse_ratio(const std::string& key, const Entry& e) {
  const auto slash = e.value.find('/');
  if (slash == std::string::npos) return parse_real(key, e);
  const double num = parse_real(key, Entry{e.value.substr(0, slash), e.line});
  const double den = parse_real(key, Entry{e.value.substr(slash + 1), e.line});
  if (den == 0.0) throw ConfigError(key, e.line, "zero denominator");
  return num / den;
}

long parse_int(const std::string& key, const Entry& e) {
  const std::string_view s = trim(e.value);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(key, e.line, "expected an integer, got '" + e.value + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const Entry& e) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_real(key, Entry{std::string(rest.substr(0, comma)), e.line}));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, long points) {
  std::vector<double> g(points);
  for (long i = 0; i < points; ++i) g[i] = lo + (hi - lo) * double(i) / double(points - 1);
  g.back() = hi;
  return g;
}

void check_grid(const std::vector<double>& grid, const std::string& key, int line) {
  if (grid.size() < 2) throw ConfigError(key, line, "grid needs at least 2 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError(key, line, "grid must be strictly increasing");
}

}  // namespace

ConfigError::ConfigError(const std::string& key, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string("override: ")) +
                         "key '" + key + "': " + message),
      key_(key),
      line_(line) {}

const char* to_string(Subcommand s) {
  switch (s) {
    case Subcommand::spectrum: return "spectrum";
    case Subcommand::response: return "response";
    case Subcommand::rcurve: return "rcurve";
    case Subcommand::probe: return "probe";
  }
  return "unknown";
}

Subcommand parse_subcommand(std::string_view name) {
  if (name == "spectrum") return Subcommand::spectrum;
  if (name == "response") return Subcommand::response;
  if (name == "rcurve") return Subcommand::rcurve;
  if (name == "probe") return Subcommand::probe;
  throw ConfigError("subcommand", 0, "unknown subcommand '" + std::string(name) + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "subcommand", "g",          "C",          "Delta_1",     "Delta_c",     "Delta_p",
      "kappa_A",    "kappa_B",    "Gamma_31",   "Gamma_32",    "gamma_2",     "gamma_3",
      "c_p_re",     "c_p_im",     "c_c_re",     "c_c_im",      "epsilon",     "N_start",
      "growth",     "rel_tol",    "tail_tol",   "N_max",       "grid",        "grid_min",
      "grid_max",   "grid_points", "rc_points", "rc_hi_floor", "rc_hi_per_C", "refine_resolution",
      "workers",    "out"};
  return keys;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

RunConfig parse_config(std::string_view text, Subcommand subcommand,
                       const std::vector<Override>& overrides) {
  const auto& keys = config_keys();
  std::map<std::string, Entry> entries;

  auto accept = [&](std::string key, std::string value, int line, bool is_override) {
    if (key.rfind("diag.", 0) == 0) return;
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError(key, line, "unknown key");
    if (!is_override && entries.count(key)) throw ConfigError(key, line, "duplicate key");
    entries[key] = Entry{std::move(value), line};
  };

  int line_no = 0;
  std::string_view rest = text;
  while (!rest.empty()) {
    ++line_no;
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(line), line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (value.empty()) throw ConfigError(key, line_no, "missing value");
    accept(key, value, line_no, false);
  }
  for (const auto& [key, value] : overrides) accept(key, value, 0, true);

  auto has = [&](const char* k) { return entries.count(k) > 0; };
  auto real = [&](const char* k, double& dst) {
    if (has(k)) dst = parse_real(k, entries.at(k));
  };

  RunConfig cfg;
  cfg.subcommand = subcommand;
  if (has("subcommand")) {
    const Entry& e = entries.at("subcommand");
    if (trim(e.value) != to_string(subcommand))
      throw ConfigError("subcommand", e.line,
                        "document is for '" + e.value + "', run requested '" + to_string(subcommand) + "'");
  }

  SystemParams& p = cfg.params;
  real("Delta_1", p.Delta_1);
  real("Delta_c", p.Delta_c);
  real("kappa_A", p.kappa_A);
  real("kappa_B", p.kappa_B);
  real("Gamma_31", p.Gamma_31);
  real("Gamma_32", p.Gamma_32);
  real("gamma_2", p.gamma_2);
  real("gamma_3", p.gamma_3);
  real("g", p.g);
  if (has("C")) {
    if (has("g")) throw ConfigError("C", entries.at("C").line, "conflicts with explicit g");
    const double C = parse_real("C", entries.at("C"));
    if (C < 0.0) throw ConfigError("C", entries.at("C").line, "must be >= 0");
    if (!(p.Gamma() > 0.0))
      throw ConfigError("C", entries.at("C").line, "needs Gamma_31 + Gamma_32 > 0");
    p.g = g_from_C(C, p.Gamma());
  }
  if (has("Delta_p")) {
    if (subcommand == Subcommand::spectrum)
      throw ConfigError("Delta_p", entries.at("Delta_p").line, "spectrum sweeps Delta_p over the grid");
    p.Delta_p = parse_real("Delta_p", entries.at("Delta_p"));
    cfg.delta_p_explicit = true;
  } else {
    p.Delta_p = 1.1 * p.g;
  }

  cfg.drive = DriveMap::standard(p.kappa_A);
  if (has("c_p_re") || has("c_p_im")) {
    double re = 0.0, im = 0.0;
    real("c_p_re", re);
    real("c_p_im", im);
    cfg.drive.c_p = cplx(re, im);
  }
  if (has("c_c_re") || has("c_c_im")) {
    double re = 0.0, im = 0.0;
    real("c_c_re", re);
    real("c_c_im", im);
    cfg.drive.c_c = cplx(re, im);
  }

  real("epsilon", cfg.epsilon);
  if (cfg.epsilon < 0.0) throw ConfigError("epsilon", entries.at("epsilon").line, "must be >= 0");

  TruncationPolicy& pol = cfg.policy;
  if (has("N_start")) pol.N_start = static_cast<int>(parse_int("N_start", entries.at("N_start")));
  if (has("N_max")) pol.N_max = static_cast<int>(parse_int("N_max", entries.at("N_max")));
  if (has("growth")) pol.growth = parse_ratio("growth", entries.at("growth"));
  real("rel_tol", pol.rel_tol);
  real("tail_tol", pol.tail_tol);
  try {
    pol.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError("N_start/N_max/growth/rel_tol/tail_tol", 0, e.what());
  }

  if (has("rc_points"))
    cfg.nested.points = static_cast<int>(parse_int("rc_points", entries.at("rc_points")));
  real("rc_hi_floor", cfg.nested.hi_floor);
  real("rc_hi_per_C", cfg.nested.hi_per_C);
  if (cfg.nested.points < 5) throw ConfigError("rc_points", entries.at("rc_points").line, "must be >= 5");

  const bool explicit_grid = has("grid");
  const bool range_grid = has("grid_min") || has("grid_max") || has("grid_points");
  if (subcommand == Subcommand::probe && (explicit_grid || range_grid))
    throw ConfigError("grid", 0, "probe runs a single point");
  if (explicit_grid && range_grid)
    throw ConfigError("grid", entries.at("grid").line, "conflicts with grid_min/grid_max/grid_points");
  if (explicit_grid) {
    cfg.grid = parse_list("grid", entries.at("grid"));
    check_grid(cfg.grid, "grid", entries.at("grid").line);
  } else if (subcommand != Subcommand::probe) {
    double lo = 0, hi = 0;
    long points = 0;
    switch (subcommand) {
      case Subcommand::spectrum: lo = -35.0, hi = 35.0, points = 281; break;
      case Subcommand::response: lo = 0.25, hi = 40.0, points = 160; break;
      default: break;
    }
    if (subcommand == Subcommand::rcurve && !range_grid) {
      cfg.grid = kDefaultCGrid;
    } else {
      real("grid_min", lo);
      real("grid_max", hi);
      if (has("grid_points")) points = parse_int("grid_points", entries.at("grid_points"));
      if (points < 2) throw ConfigError("grid_points", 0, "needs at least 2 points");
      cfg.grid = linspace(lo, hi, points);
      check_grid(cfg.grid, "grid_min/grid_max", 0);
    }
  }
  if (subcommand != Subcommand::spectrum && !cfg.grid.empty() && cfg.grid.front() < 0.0)
    throw ConfigError("grid", 0, "values must be >= 0 for this subcommand");

  if (has("workers")) {
    const long w = parse_int("workers", entries.at("workers"));
    if (w < 1) throw ConfigError("workers", entries.at("workers").line, "must be >= 1");
    cfg.workers = static_cast<unsigned>(w);
  }
  if (has("out")) cfg.out = entries.at("out").value;
  real("refine_resolution", cfg.refine_resolution);
  if (!(cfg.refine_resolution > 0.0))
    throw ConfigError("refine_resolution", entries.at("refine_resolution").line, "must be positive");

  try {
    p.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError("params", 0, e.what());
  }
  return cfg;
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec spec;
  switch (subcommand) {
    case Subcommand::spectrum: spec.kind = SweepKind::spectrum; break;
    case Subcommand::response: spec.kind = SweepKind::response; break;
    case Subcommand::rcurve: spec.kind = SweepKind::rcurve; break;
    case Subcommand::probe: throw std::domain_error("sweep_spec: probe is not a sweep");
  }
  spec.base = params;
  spec.drive = drive;
  spec.epsilon = epsilon;
  spec.grid = grid;
  spec.policy = policy;
  spec.tie_delta_p = !delta_p_explicit;
  spec.nested = nested;
  spec.workers = workers;
  spec.refine_resolution = refine_resolution;
  return spec;
}

SystemParams RunConfig::probe_params() const {
  SystemParams p = params;
  const Drive d = drive_from_input(epsilon, drive);
  p.Omega_p = d.Omega_p;
  p.Omega_c = d.Omega_c;
  return p;
}

std::string config_to_text(const RunConfig& cfg) {
  std::ostringstream os;
  auto kv = [&](const char* key, const std::string& value) { os << key << " = " << value << "\n"; };
  auto num = [&](const char* key, double v) { kv(key, format_double(v)); };
  const SystemParams& p = cfg.params;
  kv("subcommand", to_string(cfg.subcommand));
  num("g", p.g);
  num("Delta_1", p.Delta_1);
  num("Delta_c", p.Delta_c);
  if (cfg.delta_p_explicit) num("Delta_p", p.Delta_p);
  num("kappa_A", p.kappa_A);
  num("kappa_B", p.kappa_B);
  num("Gamma_31", p.Gamma_31);
  num("Gamma_32", p.Gamma_32);
  num("gamma_2", p.gamma_2);
  num("gamma_3", p.gamma_3);
  num("c_p_re", cfg.drive.c_p.real());
  num("c_p_im", cfg.drive.c_p.imag());
  num("c_c_re", cfg.drive.c_c.real());
  num("c_c_im", cfg.drive.c_c.imag());
  if (cfg.subcommand == Subcommand::spectrum || cfg.subcommand == Subcommand::probe)
    num("epsilon", cfg.epsilon);
  kv("N_start", std::to_string(cfg.policy.N_start));
  num("growth", cfg.policy.growth);
  num("rel_tol", cfg.policy.rel_tol);
  num("tail_tol", cfg.policy.tail_tol);
  kv("N_max", std::to_string(cfg.policy.N_max));
  if (cfg.subcommand != Subcommand::probe) {
    std::string list;
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) list += (i ? "," : "") + format_double(cfg.grid[i]);
    kv("grid", list);
    num("refine_resolution", cfg.refine_resolution);
  }
  if (cfg.subcommand == Subcommand::rcurve) {
    kv("rc_points", std::to_string(cfg.nested.points));
    num("rc_hi_floor", cfg.nested.hi_floor);
    num("rc_hi_per_C", cfg.nested.hi_per_C);
  }
  kv("workers", std::to_string(cfg.workers));
  return os.str();
}

}  // namespace lambdacav
