#pragma once

// Rotating-frame Hamiltonian and Lindblad generator of a driven Lambda atom in a
// two-port cavity. Frequencies are measured in units of the total cavity decay
// kappa = kappa_A + kappa_B = 1.

#include <cmath>

#include <Eigen/Dense>

#include "lambdacav/qops.hpp"

namespace lambdacav {

struct SystemParams {
  double g = 20.0;         // atom-cavity coupling on |1> <-> |3>
  cplx Omega_c = 0.0;      // control Rabi frequency on |2> <-> |3>
  cplx Omega_p = 0.0;      // cavity probe drive
  double Delta_1 = 0.0;    // omega_3 - omega
  double Delta_c = 0.0;    // (omega_3 - omega_2) - omega_c
  double Delta_p = 0.0;    // omega_p - omega
  double kappa_A = 0.5;    // input mirror
  double kappa_B = 0.5;    // output mirror
  double Gamma_31 = 0.5;
  double Gamma_32 = 0.5;
  double gamma_2 = 0.0;
  double gamma_3 = 0.0;

  double kappa() const { return kappa_A + kappa_B; }
  /// Total excited-state decay Gamma = Gamma_31 + Gamma_32.
  double Gamma() const { return Gamma_31 + Gamma_32; }

  /// Throws std::domain_error on negative or non-finite rates, or kappa != 1.
  void validate() const;
};

/// Linear map from the input amplitude epsilon to the two Rabi frequencies.
struct DriveMap {
  cplx c_p = 0.0;
  cplx c_c = 0.0;

  /// Omega_p = -0.8 i sqrt(kappa_A) eps, Omega_c = 8 eps.
  static DriveMap standard(double kappa_A = 0.5);
};

struct Drive {
  cplx Omega_p;
  cplx Omega_c;
};

Drive drive_from_input(double epsilon, const DriveMap& map);

/// Superoperator acting on row-major vectorized density matrices,
/// vec(rho)[i * dim + j] = rho(i, j).
struct Liouvillian {
  FockTruncation trunc{};
  SparseMatrix matrix;

  int hilbert_dim() const { return static_cast<int>(std::lround(std::sqrt(double(matrix.rows())))); }
  double max_abs_entry() const;
};

Operator build_hamiltonian(const SystemParams& params, FockTruncation trunc);

/// rho -> 2 A rho A^dag - A^dag A rho - rho A^dag A.
Liouvillian dissipator(const Operator& a);

/// rho -> -i [H, rho].
Liouvillian commutator(const Operator& h);

Liouvillian build_liouvillian(const SystemParams& params, FockTruncation trunc);

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int dim);

}  // namespace lambdacav
