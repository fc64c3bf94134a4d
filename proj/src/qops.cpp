#include "lambdacav/qops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lambdacav {

namespace {

void purge_zeros(SparseMatrix& m) {
  m.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return v != cplx(0.0, 0.0); });
  m.makeCompressed();
}

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::domain_error(std::string(what) + ": dimension mismatch (" +
                            std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

Operator::Operator(SparseMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::domain_error("Operator: matrix must be square");
  purge_zeros(m_);
}

Operator Operator::identity(int dim) {
  SparseMatrix m(dim, dim);
  m.setIdentity();
  return Operator(std::move(m));
}

Operator Operator::from_triplets(int dim, const std::vector<Triplet>& entries) {
  SparseMatrix m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  return Operator(std::move(m));
}

Operator Operator::operator+(const Operator& rhs) const {
  require_same_dim(*this, rhs, "operator+");
  return Operator(SparseMatrix(m_ + rhs.m_));
}

Operator Operator::operator-(const Operator& rhs) const {
  require_same_dim(*this, rhs, "operator-");
  return Operator(SparseMatrix(m_ - rhs.m_));
}

Operator Operator::operator*(const Operator& rhs) const {
  require_same_dim(*this, rhs, "operator*");
  return Operator(SparseMatrix(m_ * rhs.m_));
}

Operator Operator::operator*(cplx s) const { return Operator(SparseMatrix(m_ * s)); }

bool operator==(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) return false;
  SparseMatrix diff = a.m_ - b.m_;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
      if (it.value() != cplx(0.0, 0.0)) return false;
  return true;
}

Operator annihilation(FockTruncation trunc) {
  if (trunc.N < 1) throw std::domain_error("annihilation: Fock truncation must satisfy N >= 1");
  std::vector<Triplet> entries;
  entries.reserve(trunc.N);
  for (int n = 1; n <= trunc.N; ++n) entries.emplace_back(n - 1, n, std::sqrt(double(n)));
  return Operator::from_triplets(trunc.field_dim(), entries);
}

Operator atomic_sigma(int i, int j) {
  if (i < 1 || i > kAtomLevels || j < 1 || j > kAtomLevels) {
    throw std::domain_error("atomic_sigma: level indices must lie in {1,2,3}, got (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
  }
  return Operator::from_triplets(kAtomLevels, {Triplet(i - 1, j - 1, 1.0)});
}

Operator tensor(const Operator& a, const Operator& b) {
  const SparseMatrix& A = a.matrix();
  const SparseMatrix& B = b.matrix();
  const Eigen::Index nb = B.rows();
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(A.nonZeros() * B.nonZeros()));
  for (int ka = 0; ka < A.outerSize(); ++ka)
    for (SparseMatrix::InnerIterator ia(A, ka); ia; ++ia)
      for (int kb = 0; kb < B.outerSize(); ++kb)
        for (SparseMatrix::InnerIterator ib(B, kb); ib; ++ib)
          entries.emplace_back(ia.row() * nb + ib.row(), ia.col() * nb + ib.col(),
                               ia.value() * ib.value());
  return Operator::from_triplets(static_cast<int>(A.rows() * nb), entries);
}

Operator dagger(const Operator& a) { return Operator(SparseMatrix(a.matrix().adjoint())); }

Operator on_atom(const Operator& atomic, FockTruncation trunc) {
  return tensor(atomic, Operator::identity(trunc.field_dim()));
}

Operator on_field(const Operator& field, FockTruncation trunc) {
  if (field.dim() != trunc.field_dim()) throw std::domain_error("on_field: dimension mismatch");
  return tensor(Operator::identity(kAtomLevels), field);
}

cplx expectation(const Eigen::MatrixXcd& rho, const Operator& a) {
  if (rho.rows() != a.dim() || rho.cols() != a.dim()) {
    throw std::domain_error("expectation: operator dimension " + std::to_string(a.dim()) +
                            " does not match density matrix dimension " +
                            std::to_string(rho.rows()));
  }
  // trace(A rho) = sum_ij A_ij rho_ji
  cplx acc = 0.0;
  const SparseMatrix& m = a.matrix();
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) acc += it.value() * rho(it.col(), it.row());
  return acc;
}

}  // namespace lambdacav
