#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lambdacav/run.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace lambdacav;

namespace {

py::dict row_dict(const SweepRow& r) {
  py::dict d("control"_a = r.control, "fock_n"_a = r.fock_n, "residual"_a = r.residual,
             "error"_a = r.error);
  if (r.observables) {
    d["n_intracavity"] = r.observables->n_intracavity;
    d["n_out"] = r.observables->n_out;
    d["g2_zero"] = r.observables->g2_zero ? py::cast(*r.observables->g2_zero) : py::none();
    d["absorption"] = r.observables->absorption;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steady states of a driven Lambda atom in an optical cavity";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("g", &SystemParams::g)
      .def_readwrite("Omega_c", &SystemParams::Omega_c)
      .def_readwrite("Omega_p", &SystemParams::Omega_p)
      .def_readwrite("Delta_1", &SystemParams::Delta_1)
      .def_readwrite("Delta_c", &SystemParams::Delta_c)
      .def_readwrite("Delta_p", &SystemParams::Delta_p)
      .def_readwrite("kappa_A", &SystemParams::kappa_A)
      .def_readwrite("kappa_B", &SystemParams::kappa_B)
      .def_readwrite("Gamma_31", &SystemParams::Gamma_31)
      .def_readwrite("Gamma_32", &SystemParams::Gamma_32)
      .def_readwrite("gamma_2", &SystemParams::gamma_2)
      .def_readwrite("gamma_3", &SystemParams::gamma_3)
      .def("validate", &SystemParams::validate);

  py::class_<TruncationPolicy>(m, "TruncationPolicy")
      .def(py::init<>())
      .def_readwrite("N_start", &TruncationPolicy::N_start)
      .def_readwrite("growth", &TruncationPolicy::growth)
      .def_readwrite("rel_tol", &TruncationPolicy::rel_tol)
      .def_readwrite("tail_tol", &TruncationPolicy::tail_tol)
      .def_readwrite("N_max", &TruncationPolicy::N_max);

  m.def(
      "drive_from_input",
      [](double epsilon, cplx c_p, cplx c_c) {
        const Drive d = drive_from_input(epsilon, DriveMap{c_p, c_c});
        return py::make_tuple(d.Omega_p, d.Omega_c);
      },
      "epsilon"_a, "c_p"_a = DriveMap::standard().c_p, "c_c"_a = DriveMap::standard().c_c);

  m.def(
      "steady_state",
      [](const SystemParams& p, const TruncationPolicy& policy) {
        DensityMatrix s;
        {
          py::gil_scoped_release release;
          s = adaptive_truncation(p, policy);
        }
        const ObservableSet o = measure(s, p);
        return py::dict("rho"_a = s.rho, "N"_a = s.trunc_used.N, "residual"_a = s.residual,
                        "n_intracavity"_a = o.n_intracavity, "n_out"_a = o.n_out,
                        "g2_zero"_a = o.g2_zero ? py::cast(*o.g2_zero) : py::none(),
                        "absorption"_a = o.absorption);
      },
      "params"_a, "policy"_a = TruncationPolicy{});

  m.def(
      "liouvillian",
      [](const SystemParams& p, int N) { return build_liouvillian(p, {N}).matrix; }, "params"_a, "N"_a,
      "Sparse generator acting on row-major vectorized density matrices.");

  m.def("predicted_peak_detunings", &predicted_peak_detunings, "g"_a, "Omega_c"_a, "n_max"_a);
  m.def("cooperativity", &cooperativity, "g"_a, "Gamma"_a);
  m.def("g_from_C", &g_from_C, "C"_a, "Gamma"_a);

  m.def(
      "sweep",
      [](const std::string& subcommand, const std::map<std::string, std::string>& settings) {
        std::vector<Override> ov(settings.begin(), settings.end());
        const RunConfig cfg = parse_config("", parse_subcommand(subcommand), ov);
        if (cfg.subcommand == Subcommand::rcurve || cfg.subcommand == Subcommand::probe)
          throw py::value_error("sweep: use 'spectrum' or 'response'");
        SweepResult res;
        {
          py::gil_scoped_release release;
          const SweepSpec spec = cfg.sweep_spec();
          res = spec.kind == SweepKind::spectrum ? run_spectrum(spec) : run_response(spec);
        }
        py::list rows;
        for (const SweepRow& r : res.rows) rows.append(row_dict(r));
        return rows;
      },
      "subcommand"_a, "settings"_a = std::map<std::string, std::string>{});

  m.def(
      "execute",
      [](const std::string& subcommand, const std::string& text, const std::map<std::string, std::string>& settings) {
        std::vector<Override> ov(settings.begin(), settings.end());
        const RunConfig cfg = parse_config(text, parse_subcommand(subcommand), ov);
        RunOutput out;
        {
          py::gil_scoped_release release;
          out = execute(cfg);
        }
        return py::dict("exit_status"_a = out.exit_status, "csv"_a = out.csv, "manifest"_a = out.manifest,
                        "report"_a = out.report);
      },
      "subcommand"_a, "text"_a = "", "settings"_a = std::map<std::string, std::string>{},
      "Runs a configuration in memory and returns the CSV, manifest and report.");
}
