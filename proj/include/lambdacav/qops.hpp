#pragma once

// Sparse operator algebra on the atom (C^3) x field (C^{N+1}) space.
//
// Basis order is atom-major everywhere: composite index = atom * (N + 1) + n,
// with atomic levels |1>, |2>, |3> mapped to atom = 0, 1, 2.

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lambdacav {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr int kAtomLevels = 3;

/// Highest retained Fock level N; the field space has dimension N + 1.
struct FockTruncation {
  int N = 1;

  int field_dim() const { return N + 1; }
  int composite_dim() const { return kAtomLevels * (N + 1); }
  friend bool operator==(FockTruncation, FockTruncation) = default;
};

/// Immutable square sparse complex matrix. Exact zeros are never stored.
class Operator {
 public:
  Operator() = default;
  explicit Operator(SparseMatrix m);

  static Operator identity(int dim);
  static Operator from_triplets(int dim, const std::vector<Triplet>& entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const SparseMatrix& matrix() const { return m_; }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(m_); }
  cplx coeff(int row, int col) const { return m_.coeff(row, col); }
  long nonzeros() const { return m_.nonZeros(); }

  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(const Operator& rhs) const;
  Operator operator*(cplx s) const;
  friend Operator operator*(cplx s, const Operator& op) { return op * s; }

  friend bool operator==(const Operator& a, const Operator& b);

 private:
  SparseMatrix m_;
};

/// Field annihilation operator, <n-1|a|n> = sqrt(n).
Operator annihilation(FockTruncation trunc);

/// sigma_ij = |i><j| on the bare atom, levels numbered 1..3.
Operator atomic_sigma(int i, int j);

/// Kronecker product; the left factor's index varies slowest.
Operator tensor(const Operator& a, const Operator& b);

Operator dagger(const Operator& a);

/// Atomic operator lifted to the composite space (atom (x) I_field).
Operator on_atom(const Operator& atomic, FockTruncation trunc);
/// Field operator lifted to the composite space (I_atom (x) field).
Operator on_field(const Operator& field, FockTruncation trunc);

/// trace(A rho).
cplx expectation(const Eigen::MatrixXcd& rho, const Operator& a);

}  // namespace lambdacav
