#include "lambdacav/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>
#include <Eigen/SparseLU>
#ifdef LAMBDACAV_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace lambdacav {

namespace {

#ifdef LAMBDACAV_HAVE_UMFPACK
using SparseLuSolver = Eigen::UmfPackLU<SparseMatrix>;
#else
using SparseLuSolver = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;
#endif

double residual_norm(const Liouvillian& L, const Eigen::MatrixXcd& rho) {
  return (L.matrix * vectorize(rho)).norm();
}

// Hermitize, renormalize, and record what that changed.
DensityMatrix post_process(const Liouvillian& L, const Eigen::MatrixXcd& raw) {
  DensityMatrix out;
  const Eigen::MatrixXcd herm = 0.5 * (raw + raw.adjoint());
  out.hermiticity_correction = (raw - herm).cwiseAbs().maxCoeff();
  out.trace_correction = std::abs(raw.trace() - cplx(1.0, 0.0));
  out.rho = herm / herm.trace().real();
  out.trunc_used = L.trunc;
  out.residual = residual_norm(L, out.rho);
  out.residual_bound = 1e-10 * (1.0 + L.max_abs_entry());
  const StateChecks checks = check_state(out.rho);
  out.trace_error = checks.trace_error;
  out.hermiticity_error = checks.hermiticity_error;
  out.min_eigenvalue = checks.min_eigenvalue;
  return out;
}

void require_accepted(const DensityMatrix& s, const char* solver) {
  if (!(s.min_eigenvalue >= kPositivityTolerance)) {
    throw InvalidSteadyState(std::string(solver) + ": minimum eigenvalue " +
                             std::to_string(s.min_eigenvalue) + " below positivity tolerance");
  }
  if (!(s.residual < s.residual_bound)) {
    throw InvalidSteadyState(std::string(solver) + ": residual " + std::to_string(s.residual) +
                             " exceeds bound " + std::to_string(s.residual_bound));
  }
}

double photon_number(const Eigen::MatrixXcd& rho, FockTruncation trunc) {
  const Operator a = annihilation(trunc);
  return expectation(rho, on_field(dagger(a) * a, trunc)).real();
}

}  // namespace

StateChecks check_state(const Eigen::MatrixXcd& rho) {
  StateChecks c{};
  c.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::domain_error("trace_distance: dimension mismatch");
  const Eigen::MatrixXcd d = a - b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

void TruncationPolicy::validate() const {
  if (N_start < 2) throw std::domain_error("TruncationPolicy: N_start must be >= 2");
  if (N_max > kHardCap)
    throw std::domain_error("TruncationPolicy: N_max exceeds hard cap " + std::to_string(kHardCap));
  if (N_max < N_start) throw std::domain_error("TruncationPolicy: N_max must be >= N_start");
  if (!(growth > 1.0) || !std::isfinite(growth))
    throw std::domain_error("TruncationPolicy: growth must be > 1");
  if (!(rel_tol > 0.0) || !(tail_tol > 0.0))
    throw std::domain_error("TruncationPolicy: tolerances must be positive");
}

int TruncationPolicy::next_level(int N) const {
  // The 1e-9 slack keeps exact products such as 1.5 * 8 from rounding up past 12.
  const int grown = static_cast<int>(std::ceil(growth * N - 1e-9));
  return std::min(N_max, std::max(N + 1, grown));
}

Eigen::MatrixXcd ground_vacuum(FockTruncation trunc) {
  const int d = trunc.composite_dim();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  rho(0, 0) = 1.0;
  return rho;
}

double fock_tail_population(const Eigen::MatrixXcd& rho) {
  const int dim = static_cast<int>(rho.rows());
  const int nf = dim / kAtomLevels;
  double tail = 0.0;
  for (int s = 0; s < kAtomLevels; ++s)
    for (int n = std::max(0, nf - 2); n < nf; ++n) tail += rho(s * nf + n, s * nf + n).real();
  return tail;
}

const char* direct_solver_backend() {
#ifdef LAMBDACAV_HAVE_UMFPACK
  return "UMFPACK";
#else
  return "Eigen SparseLU, COLAMD ordering";
#endif
}

DensityMatrix solve_steady_direct(const Liouvillian& L, std::optional<long> trace_row) {
  const int d = L.hilbert_dim();
  const long n = static_cast<long>(L.matrix.rows());
  const long row = trace_row.value_or(n - 1);
  if (row < 0 || row >= n) throw std::domain_error("solve_steady_direct: trace row out of range");
  // Only the population equations sum to zero, so only they are redundant.
  if (row % (d + 1) != 0)
    throw std::domain_error("solve_steady_direct: trace row must be a population row i * (dim + 1)");

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(L.matrix.nonZeros() + d));
  for (int k = 0; k < L.matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(L.matrix, k); it; ++it)
      if (it.row() != row) entries.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < d; ++i) entries.emplace_back(row, long(i) * d + i, 1.0);

  SparseMatrix A(n, n);
  A.setFromTriplets(entries.begin(), entries.end());
  A.makeCompressed();

  SparseLuSolver lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw NonUniqueSteadyState("solve_steady_direct: singular system after trace replacement");

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(row) = 1.0;
  const Eigen::VectorXcd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw NonUniqueSteadyState("solve_steady_direct: solve failed");

  DensityMatrix out = post_process(L, unvectorize(x, d));
  if (!(out.residual < out.residual_bound))
    throw NonUniqueSteadyState("solve_steady_direct: numerically singular system (residual " +
                               std::to_string(out.residual) + ")");
  require_accepted(out, "solve_steady_direct");
  return out;
}

DensityMatrix steady_state_from(const Liouvillian& L, const Eigen::MatrixXcd& rho0, double shift,
                                int max_iterations) {
  const int d = L.hilbert_dim();
  if (rho0.rows() != d) throw std::domain_error("steady_state_from: initial state dimension mismatch");
  if (!(shift > 0.0)) throw std::domain_error("steady_state_from: shift must be positive");
  const long n = static_cast<long>(L.matrix.rows());
  SparseMatrix id(n, n);
  id.setIdentity();
  const SparseMatrix A = shift * id - L.matrix;

  SparseLuSolver lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw SolverError("steady_state_from: shifted generator is singular");

  const double bound = 1e-10 * (1.0 + L.max_abs_entry());
  // Each step damps a decaying mode with eigenvalue lambda by |s / (s - lambda)|;
  // the stationary component reached from rho0 is a fixed point.
  Eigen::VectorXcd x = vectorize(rho0);
  for (int it = 0; it < max_iterations; ++it) {
    if ((L.matrix * x).norm() < 0.1 * bound) break;
    x = shift * lu.solve(x);
  }
  DensityMatrix out = post_process(L, unvectorize(x, d));
  require_accepted(out, "steady_state_from");
  return out;
}

DensityMatrix solve_steady_dense_null(const Liouvillian& L) {
  const int d = L.hilbert_dim();
  if (d > 60) throw std::domain_error("solve_steady_dense_null: Hilbert dimension above 60");
  const Eigen::MatrixXcd dense(L.matrix);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index last = sv.size() - 1;
  // Roundoff floor so that an exactly zero smallest value still needs a gap.
  const double floor = std::numeric_limits<double>::epsilon() * sv(0) * double(sv.size());
  if (sv(last - 1) < 1e3 * std::max(sv(last), floor))
    throw NonUniqueSteadyState("solve_steady_dense_null: no singular-value gap (" +
                               std::to_string(sv(last - 1)) + " vs " + std::to_string(sv(last)) + ")");

  Eigen::MatrixXcd rho = unvectorize(svd.matrixV().col(last), d);
  rho /= rho.trace();
  DensityMatrix out = post_process(L, rho);
  require_accepted(out, "solve_steady_dense_null");
  return out;
}

DensityMatrix evolve_to_steady(const Liouvillian& L, const DensityMatrix& rho0, double t_max,
                               double step_tol) {
  if (!(t_max > 0.0)) throw std::domain_error("evolve_to_steady: t_max must be positive");
  const int d = L.hilbert_dim();
  if (rho0.dim() != d) throw std::domain_error("evolve_to_steady: initial state dimension mismatch");

  const SparseMatrix& M = L.matrix;
  Eigen::VectorXcd x = vectorize(rho0.rho);
  Eigen::VectorXcd k1 = M * x;
  if (!(k1.norm() >= step_tol)) return post_process(L, rho0.rho);

  // Dormand-Prince 5(4) coefficients.
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  constexpr double atol = 1e-15, rtol = 1e-13;
  double t = 0.0;
  double h = std::min(t_max, 0.1 / (1.0 + L.max_abs_entry()));
  Eigen::VectorXcd k2, k3, k4, k5, k6, k7, y, err;

  while (t < t_max) {
    h = std::min(h, t_max - t);
    k2 = M * (x + h * (a21 * k1));
    k3 = M * (x + h * (a31 * k1 + a32 * k2));
    k4 = M * (x + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = M * (x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = M * (x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = M * y;
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scale = atol + rtol * std::max(x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff());
    const double err_norm = err.cwiseAbs().maxCoeff() / scale;
    if (err_norm <= 1.0) {
      t += h;
      x.swap(y);
      k1.swap(k7);
      if (k1.norm() < step_tol) return post_process(L, unvectorize(x, d));
    }
    const double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
  throw TimedOut("evolve_to_steady: ||d rho/dt|| = " + std::to_string(k1.norm()) +
                     " above step_tol at t_max",
                 post_process(L, unvectorize(x, d)));
}

DensityMatrix adaptive_truncation(const SystemParams& params, const TruncationPolicy& policy) {
  policy.validate();
  params.validate();

  auto solve_at = [&](int N) {
    const FockTruncation trunc{N};
    const Liouvillian L = build_liouvillian(params, trunc);
    try {
      return solve_steady_direct(L);
    } catch (const SolverError&) {
      // With g = Omega_c = 0 (or no drive at all) several atomic ground states are dark;
      // take the stationary state reached from the ground vacuum.
      DensityMatrix selected;
      try {
        selected = steady_state_from(L, ground_vacuum(trunc));
      } catch (const SolverError&) {
        throw NonUniqueSteadyState("adaptive_truncation: degenerate steady state at N = " +
                                   std::to_string(N));
      }
      selected.degenerate_selected = true;
      return selected;
    }
  };

  constexpr double kPhotonFloor = 1e-12;
  DensityMatrix current = solve_at(policy.N_start);
  double rel_change = 0.0;
  double tail = fock_tail_population(current.rho);
  while (true) {
    const int N = current.trunc_used.N;
    if (N >= policy.N_max) {
      throw TruncationNotConverged("adaptive_truncation: N_max = " + std::to_string(policy.N_max) +
                                       " reached (relative change " + std::to_string(rel_change) +
                                       ", tail population " + std::to_string(tail) + ")",
                                   current, rel_change, tail);
    }
    DensityMatrix next = solve_at(policy.next_level(N));
    const double n_cur = photon_number(current.rho, current.trunc_used);
    const double n_next = photon_number(next.rho, next.trunc_used);
    rel_change = std::abs(n_next - n_cur) / std::max(std::abs(n_next), kPhotonFloor);
    tail = fock_tail_population(current.rho);
    if (rel_change < policy.rel_tol && tail < policy.tail_tol) {
      current.verified_against = next.trunc_used.N;
      return current;
    }
    current = std::move(next);
  }
}

}  // namespace lambdacav
