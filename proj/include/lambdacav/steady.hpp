#pragma once

// Steady states of a Liouvillian: a sparse direct solve (production path), a
// dense SVD null-space solve and explicit time evolution (independent oracles),
// and the adaptive Fock-truncation driver used by every sweep.

#include <limits>
#include <optional>

#include "lambdacav/density_matrix.hpp"
#include "lambdacav/errors.hpp"
#include "lambdacav/model.hpp"

namespace lambdacav {

struct TruncationPolicy {
  static constexpr int kHardCap = 160;

  int N_start = 8;
  double growth = 1.5;
  double rel_tol = 1e-4;
  double tail_tol = 1e-6;
  int N_max = 120;

  void validate() const;
  /// Next level after N: ceil(growth * N), at least N + 1, clipped to N_max.
  int next_level(int N) const;
};

/// Positivity threshold on the minimum eigenvalue of an accepted state.
inline constexpr double kPositivityTolerance = -1e-8;

/// Name of the sparse factorization behind solve_steady_direct.
const char* direct_solver_backend();

/// Replaces row `trace_row` (default: last) of L by the trace functional and solves
/// L' vec(rho) = e_row. The row must be a population row i * (dim + 1).
/// Throws NonUniqueSteadyState if L' is singular.
DensityMatrix solve_steady_direct(const Liouvillian& L, std::optional<long> trace_row = std::nullopt);

/// Stationary limit of the dynamics started from rho0, by resolvent iteration
/// x <- s (s - L)^-1 x. Well defined when the stationary manifold is degenerate.
DensityMatrix steady_state_from(const Liouvillian& L, const Eigen::MatrixXcd& rho0,
                                double shift = 1e-2, int max_iterations = 20000);

/// Right singular vector of the smallest singular value of the dense L.
/// Limited to Hilbert dimension <= 60.
DensityMatrix solve_steady_dense_null(const Liouvillian& L);

/// Integrates d vec(rho)/dt = L vec(rho) with an adaptive Dormand-Prince 5(4) scheme
/// until ||L vec(rho)||_2 < step_tol. Throws TimedOut if t_max is reached first.
DensityMatrix evolve_to_steady(const Liouvillian& L, const DensityMatrix& rho0, double t_max,
                               double step_tol);

/// Solves at N_start, N_start*growth, ... until successive photon numbers agree to
/// rel_tol and the top two Fock levels of the returned state carry < tail_tol.
DensityMatrix adaptive_truncation(const SystemParams& params, const TruncationPolicy& policy = {});

/// |1> (x) |0_F> projector on the composite space.
Eigen::MatrixXcd ground_vacuum(FockTruncation trunc);

/// Population of the top two Fock levels.
double fock_tail_population(const Eigen::MatrixXcd& rho);

}  // namespace lambdacav
