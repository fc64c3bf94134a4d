#include "lambdacav/run.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace lambdacav {

namespace {

std::string fmt_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("nan");
}

void write_row(std::ostringstream& os, const SweepRow& row) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  os << format_double(row.control);
  if (row.observables) {
    const ObservableSet& o = *row.observables;
    os << ',' << format_double(o.n_intracavity) << ',' << format_double(o.n_out) << ','
       << fmt_optional(o.g2_zero) << ',' << format_double(o.absorption);
  } else {
    for (int i = 0; i < 4; ++i) os << ',' << format_double(nan);
  }
  os << ',' << row.fock_n << ',' << format_double(row.residual) << ',' << row.error << '\n';
}

void point_diagnostics(std::ostringstream& os, const std::string& prefix, std::size_t i,
                       const SweepRow& row) {
  const std::string key = prefix + "point." + std::to_string(i) + ".";
  os << key << "control = " << format_double(row.control) << '\n'
     << key << "fock_n = " << row.fock_n << '\n'
     << key << "verified_against = " << row.verified_against << '\n'
     << key << "residual = " << format_double(row.residual) << '\n'
     << key << "residual_bound = " << format_double(row.residual_bound) << '\n'
     << key << "hermiticity_correction = " << format_double(row.hermiticity_correction) << '\n'
     << key << "trace_correction = " << format_double(row.trace_correction) << '\n'
     << key << "min_eigenvalue = " << format_double(row.min_eigenvalue) << '\n';
  if (!row.ok()) os << key << "error = " << row.error << '\n';
}

void solver_diagnostics(std::ostringstream& os) {
  os << "diag.solver = sparse LU (" << direct_solver_backend()
     << "), last row replaced by the trace functional\n"
     << "diag.postprocess = hermitize then normalize\n"
     << "diag.positivity_tolerance = " << format_double(kPositivityTolerance) << '\n'
     << "diag.residual_bound = 1e-10 * (1 + max|L_ij|)\n"
     << "diag.photon_floor = " << format_double(kPhotonNumberFloor) << '\n'
     << "diag.vectorization = row-major\n"
     << "diag.basis = atom-major, index = atom * (N + 1) + n\n";
}

std::string extremum_text(const Extremum& e) {
  return format_double(e.control) + ";" + format_double(e.height);
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << (result.spec.kind == SweepKind::spectrum ? "delta_p" : "epsilon_sq")
     << ",n_intracavity,n_out,g2_zero,absorption,fock_n,residual,error\n";
  for (const SweepRow& row : result.rows) write_row(os, row);
  return os.str();
}

std::string rcurve_csv(const RCurveResult& result) {
  std::ostringstream os;
  os << "C,R1,R2,R2_defined,error\n";
  for (const RCurveRow& row : result.rows) {
    os << format_double(row.C) << ',' << format_double(row.R1.value_or(0.0)) << ','
       << format_double(row.R2.value_or(0.0)) << ',' << (row.R2 ? 1 : 0) << ',' << row.error << '\n';
  }
  return os.str();
}

RunOutput execute(const RunConfig& config) {
  RunOutput out;
  std::ostringstream manifest;
  manifest << "# lambdacav run manifest; feed back with --config to reproduce the CSV\n"
           << config_to_text(config);
  solver_diagnostics(manifest);

  switch (config.subcommand) {
    case Subcommand::spectrum:
    case Subcommand::response: {
      const SweepSpec spec = config.sweep_spec();
      const SweepResult result =
          spec.kind == SweepKind::spectrum ? run_spectrum(spec) : run_response(spec);
      out.csv = sweep_csv(result);
      std::size_t failed = 0;
      for (std::size_t i = 0; i < result.rows.size(); ++i) {
        point_diagnostics(manifest, "diag.", i, result.rows[i]);
        failed += result.rows[i].ok() ? 0 : 1;
      }
      if (config.subcommand == Subcommand::response)
        manifest << "diag.Delta_p_resolved = " << format_double(spec.base.Delta_p) << '\n';
      out.exit_status = failed == result.rows.size() ? 1 : 0;
      break;
    }
    case Subcommand::rcurve: {
      const RCurveResult result = run_rcurve(config.sweep_spec());
      out.csv = rcurve_csv(result);
      std::size_t failed = 0;
      for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const RCurveRow& row = result.rows[i];
        const std::string key = "diag.rc." + std::to_string(i) + ".";
        manifest << key << "C = " << format_double(row.C) << '\n'
                 << key << "g = " << format_double(row.g) << '\n'
                 << key << "Delta_p = " << format_double(row.Delta_p) << '\n'
                 << key << "R1_defined = " << (row.R1 ? 1 : 0) << '\n'
                 << key << "left_edge_max = " << (row.extrema.left_edge_max ? 1 : 0) << '\n';
        for (std::size_t k = 0; k < row.extrema.maxima.size(); ++k)
          manifest << key << "max." << k << " = " << extremum_text(row.extrema.maxima[k]) << '\n';
        for (std::size_t k = 0; k < row.extrema.minima.size(); ++k)
          manifest << key << "min." << k << " = " << extremum_text(row.extrema.minima[k]) << '\n';
        for (std::size_t j = 0; j < row.nested.rows.size(); ++j)
          point_diagnostics(manifest, key, j, row.nested.rows[j]);
        failed += row.R1 || row.error.empty() ? 0 : 1;
      }
      out.exit_status = failed == result.rows.size() ? 1 : 0;
      break;
    }
    case Subcommand::probe: {
      const SweepRow row = solve_row(config.probe_params(), config.policy, config.epsilon);
      std::ostringstream report;
      if (row.observables) {
        const ObservableSet& o = *row.observables;
        report << "n_intracavity = " << format_double(o.n_intracavity) << '\n'
               << "n_out = " << format_double(o.n_out) << '\n'
               << "g2_zero = " << (o.g2_zero ? format_double(*o.g2_zero) : "undefined") << '\n'
               << "absorption = " << format_double(o.absorption) << '\n';
      }
      report << "fock_n = " << row.fock_n << '\n' << "residual = " << format_double(row.residual) << '\n';
      if (!row.ok()) report << "error = " << row.error << '\n';
      out.report = report.str();

      std::ostringstream csv;
      csv << "epsilon,n_intracavity,n_out,g2_zero,absorption,fock_n,residual,error\n";
      write_row(csv, row);
      out.csv = csv.str();
      point_diagnostics(manifest, "diag.", 0, row);
      out.exit_status = row.ok() ? 0 : 1;
      break;
    }
  }
  out.manifest = manifest.str();
  return out;
}

int run(const RunConfig& config, std::ostream& log) {
  const RunOutput out = execute(config);
  if (!out.report.empty()) log << out.report;
  const bool write_files = !config.out.empty() || config.subcommand != Subcommand::probe;
  if (write_files) {
    const std::string path =
        config.out.empty() ? std::string(to_string(config.subcommand)) + ".csv" : config.out;
    std::ofstream csv(path, std::ios::binary);
    std::ofstream manifest(path + ".manifest", std::ios::binary);
    if (!csv || !manifest) {
      log << "error: cannot write " << path << '\n';
      return 2;
    }
    csv << out.csv;
    manifest << out.manifest;
    log << "wrote " << path << " and " << path << ".manifest\n";
  }
  return out.exit_status;
}

}  // namespace lambdacav
