#include "lambdacav/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lambdacav {

namespace {

SparseMatrix kron(const SparseMatrix& A, const SparseMatrix& B) {
  const Eigen::Index nb = B.rows();
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(A.nonZeros() * B.nonZeros()));
  for (int ka = 0; ka < A.outerSize(); ++ka)
    for (SparseMatrix::InnerIterator ia(A, ka); ia; ++ia)
      for (int kb = 0; kb < B.outerSize(); ++kb)
        for (SparseMatrix::InnerIterator ib(B, kb); ib; ++ib)
          entries.emplace_back(ia.row() * nb + ib.row(), ia.col() * nb + ib.col(),
                               ia.value() * ib.value());
  SparseMatrix out(A.rows() * nb, A.cols() * B.cols());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

SparseMatrix sparse_identity(Eigen::Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

FockTruncation infer_trunc(int dim) {
  return FockTruncation{dim % kAtomLevels == 0 ? dim / kAtomLevels - 1 : 0};
}

void require_rate(const char* name, double value) {
  if (!std::isfinite(value) || value < 0.0)
    throw std::domain_error(std::string("SystemParams: ") + name + " must be finite and >= 0");
}

void require_finite(const char* name, double value) {
  if (!std::isfinite(value))
    throw std::domain_error(std::string("SystemParams: ") + name + " must be finite");
}

}  // namespace

void SystemParams::validate() const {
  require_rate("g", g);
  require_rate("kappa_A", kappa_A);
  require_rate("kappa_B", kappa_B);
  require_rate("Gamma_31", Gamma_31);
  require_rate("Gamma_32", Gamma_32);
  require_rate("gamma_2", gamma_2);
  require_rate("gamma_3", gamma_3);
  require_finite("Delta_1", Delta_1);
  require_finite("Delta_c", Delta_c);
  require_finite("Delta_p", Delta_p);
  require_finite("Omega_c", std::abs(Omega_c));
  require_finite("Omega_p", std::abs(Omega_p));
  if (std::abs(kappa() - 1.0) > 1e-12)
    throw std::domain_error("SystemParams: kappa_A + kappa_B must equal 1 (the frequency unit)");
}

DriveMap DriveMap::standard(double kappa_A) {
  return DriveMap{cplx(0.0, -0.8 * std::sqrt(kappa_A)), cplx(8.0, 0.0)};
}

Drive drive_from_input(double epsilon, const DriveMap& map) {
  if (!(epsilon >= 0.0)) throw std::domain_error("drive_from_input: epsilon must be >= 0");
  return Drive{map.c_p * epsilon, map.c_c * epsilon};
}

double Liouvillian::max_abs_entry() const {
  double m = 0.0;
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

Operator build_hamiltonian(const SystemParams& params, FockTruncation trunc) {
  if (trunc.N < 1) throw std::domain_error("build_hamiltonian: Fock truncation must satisfy N >= 1");
  const Operator a = on_field(annihilation(trunc), trunc);
  const Operator ad = dagger(a);
  auto sigma = [&](int i, int j) { return on_atom(atomic_sigma(i, j), trunc); };

  const Operator diagonal = params.Delta_1 * sigma(3, 3) +
                            (params.Delta_1 - params.Delta_c) * sigma(2, 2) +
                            params.Delta_p * sigma(1, 1) - params.Delta_p * (ad * a);
  const Operator coupling =
      params.Omega_p * a + params.g * (a * sigma(3, 1)) + params.Omega_c * sigma(3, 2);
  return diagonal + coupling + dagger(coupling);
}

Liouvillian commutator(const Operator& h) {
  const SparseMatrix& H = h.matrix();
  const SparseMatrix id = sparse_identity(H.rows());
  const SparseMatrix Ht = H.transpose();
  SparseMatrix m = cplx(0.0, -1.0) * (kron(H, id) - kron(id, Ht));
  m.makeCompressed();
  return Liouvillian{infer_trunc(h.dim()), std::move(m)};
}

Liouvillian dissipator(const Operator& a) {
  const SparseMatrix& A = a.matrix();
  const SparseMatrix id = sparse_identity(A.rows());
  const SparseMatrix AdA = A.adjoint() * A;
  const SparseMatrix AdA_t = AdA.transpose();
  SparseMatrix m = 2.0 * kron(A, A.conjugate()) - kron(AdA, id) - kron(id, AdA_t);
  m.makeCompressed();
  return Liouvillian{infer_trunc(a.dim()), std::move(m)};
}

Liouvillian build_liouvillian(const SystemParams& params, FockTruncation trunc) {
  params.validate();
  SparseMatrix L = commutator(build_hamiltonian(params, trunc)).matrix;

  auto add = [&](double rate, const Operator& op) {
    if (rate != 0.0) L += rate * dissipator(op).matrix;
  };
  auto sigma = [&](int i, int j) { return on_atom(atomic_sigma(i, j), trunc); };
  add(params.kappa(), on_field(annihilation(trunc), trunc));
  add(params.Gamma_31, sigma(1, 3));
  add(params.Gamma_32, sigma(2, 3));
  add(params.gamma_2, sigma(2, 2));
  add(params.gamma_3, sigma(3, 3));

  L.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return v != cplx(0.0, 0.0); });
  L.makeCompressed();
  return Liouvillian{trunc, std::move(L)};
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
  const Eigen::Index d = rho.rows();
  Eigen::VectorXcd v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = rho(i, j);
  return v;
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int dim) {
  if (v.size() != Eigen::Index(dim) * dim) throw std::domain_error("unvectorize: size mismatch");
  Eigen::MatrixXcd rho(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) rho(i, j) = v(Eigen::Index(i) * dim + j);
  return rho;
}

}  // namespace lambdacav
