#pragma once

#include <Eigen/Dense>

#include "lambdacav/qops.hpp"

namespace lambdacav {

/// Stationary state together with the diagnostics of the solve that produced it.
struct DensityMatrix {
  Eigen::MatrixXcd rho;
  FockTruncation trunc_used{};

  // ||L vec(rho)||_2 evaluated on the final, post-processed state.
  double residual = 0.0;
  // 1e-10 * (1 + max |L_ij|); accepted states satisfy residual < residual_bound.
  double residual_bound = 0.0;
  // Magnitudes removed by the Hermitize-then-normalize step.
  double hermiticity_correction = 0.0;
  double trace_correction = 0.0;
  // check_state of the final rho.
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  // Fock level of the larger solve used to confirm truncation convergence (0 if none).
  int verified_against = 0;
  // The steady-state manifold was degenerate and the vacuum ground state was selected.
  bool degenerate_selected = false;

  int dim() const { return static_cast<int>(rho.rows()); }
};

/// Invariant checks shared by the solvers and the test suites.
struct StateChecks {
  double trace_error;
  double hermiticity_error;
  double min_eigenvalue;
};

StateChecks check_state(const Eigen::MatrixXcd& rho);

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

inline cplx expectation(const DensityMatrix& state, const Operator& a) {
  return expectation(state.rho, a);
}

}  // namespace lambdacav
