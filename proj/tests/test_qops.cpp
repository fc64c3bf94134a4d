#include <doctest.h>

#include <random>

#include "lambdacav/qops.hpp"
#include "oracles/oracles.hpp"

using namespace lambdacav;

TEST_CASE("annihilation matrix elements") {
  const Operator a1 = annihilation({1});
  CHECK(a1.dim() == 2);
  CHECK(a1.nonzeros() == 1);
  CHECK(a1.coeff(0, 1) == cplx(1.0));
  CHECK(a1.coeff(1, 0) == cplx(0.0));

  const Operator a2 = annihilation({2});
  CHECK(a2.coeff(1, 2).real() == doctest::Approx(1.41421356).epsilon(1e-9));
  CHECK(a2.coeff(1, 2) == cplx(std::sqrt(2.0)));

  const Operator num = dagger(annihilation({3})) * annihilation({3});
  for (int n = 0; n <= 3; ++n) CHECK(std::abs(num.coeff(n, n) - double(n)) <= 4e-16 * n);
  CHECK(num.nonzeros() == 3);  // the n = 0 zero is not stored

  CHECK_THROWS_AS(annihilation({0}), std::domain_error);
}

TEST_CASE("atomic sigma") {
  const Operator s31 = atomic_sigma(3, 1);
  CHECK(s31.dim() == 3);
  CHECK(s31.nonzeros() == 1);
  CHECK(s31.coeff(2, 0) == cplx(1.0));

  const Operator s22 = atomic_sigma(2, 2);
  CHECK(s22 * s22 == s22);
  CHECK(s22.coeff(1, 1) == cplx(1.0));

  CHECK(atomic_sigma(1, 3) * atomic_sigma(3, 1) == atomic_sigma(1, 1));
  CHECK_THROWS_AS(atomic_sigma(0, 1), std::domain_error);
  CHECK_THROWS_AS(atomic_sigma(1, 4), std::domain_error);
}

TEST_CASE("tensor product ordering") {
  CHECK(tensor(Operator::identity(3), Operator::identity(2)) == Operator::identity(6));

  const FockTruncation t{4};
  const Operator s33 = tensor(atomic_sigma(3, 3), Operator::identity(t.field_dim()));
  for (int i = 0; i < t.composite_dim(); ++i)
    CHECK(s33.coeff(i, i) == cplx(i / t.field_dim() == 2 ? 1.0 : 0.0));

  // sigma_31 (x) a : |1>|1_F> -> |3>|0_F>
  const Operator op = tensor(atomic_sigma(3, 1), annihilation(t));
  const int in = oracle::idx(0, 1, t.N), out = oracle::idx(2, 0, t.N);
  CHECK(op.coeff(out, in) == cplx(1.0));
  CHECK(op.nonzeros() == t.N);
  CHECK(on_atom(atomic_sigma(3, 1), t) * on_field(annihilation(t), t) == op);
}

TEST_CASE("tensor is associative on integer entries") {
  const Operator a = atomic_sigma(1, 2) + 2.0 * atomic_sigma(3, 3);
  const Operator b = dagger(annihilation({2})) * annihilation({2});
  const Operator c = Operator::from_triplets(2, {{0, 1, cplx(3.0, -1.0)}, {1, 1, cplx(-2.0)}});
  CHECK(tensor(tensor(a, b), c) == tensor(a, tensor(b, c)));
}

TEST_CASE("dagger") {
  const FockTruncation t{5};
  const Operator ad = dagger(annihilation(t));
  for (int n = 0; n < t.N; ++n) CHECK(ad.coeff(n + 1, n) == cplx(std::sqrt(double(n + 1))));
  const Operator m = Operator::from_triplets(3, {{0, 2, cplx(1.0, 2.0)}, {1, 0, cplx(0.0, -3.0)}});
  CHECK(dagger(dagger(m)) == m);
  CHECK(dagger(m).coeff(2, 0) == cplx(1.0, -2.0));
  CHECK(dagger(atomic_sigma(3, 1)) == atomic_sigma(1, 3));
}

TEST_CASE("truncated commutator [a, a^dag]") {
  for (int N : {1, 2, 5, 17}) {
    const Operator a = annihilation({N});
    const Operator comm = a * dagger(a) - dagger(a) * a;
    for (int n = 0; n < N; ++n) CHECK(std::abs(comm.coeff(n, n) - 1.0) < 1e-14);
    // sqrt(n)^2 is within an ulp of n, not always equal to it.
    CHECK(std::abs(comm.coeff(N, N) + double(N)) <= 4e-16 * N);
    CHECK(comm.nonzeros() == N + 1);
  }
}

TEST_CASE("explicit zeros are purged") {
  const Operator z = atomic_sigma(1, 1) - atomic_sigma(1, 1);
  CHECK(z.nonzeros() == 0);
  const Operator w = Operator::from_triplets(2, {{0, 0, cplx(0.0)}, {1, 1, cplx(1e-300)}});
  CHECK(w.nonzeros() == 1);
}

TEST_CASE("expectation values") {
  const FockTruncation t{3};
  const Operator num = on_field(dagger(annihilation(t)) * annihilation(t), t);
  CHECK(expectation(oracle::fock_state(0, 0, t.N), num) == cplx(0.0));
  CHECK(expectation(oracle::fock_state(0, 1, t.N), num) == cplx(1.0));

  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  const int d = t.composite_dim();
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  Eigen::MatrixXcd rho = m * m.adjoint();
  rho /= rho.trace();
  CHECK(std::abs(expectation(rho, Operator::identity(d)) - 1.0) < 1e-14);

  const Operator A = on_atom(atomic_sigma(1, 3), t) * on_field(annihilation(t), t);
  const Operator B = on_atom(atomic_sigma(2, 2), t);
  const cplx ea = expectation(rho, A), eb = expectation(rho, B);
  CHECK(std::abs(expectation(rho, A + cplx(0.5, 2.0) * B) - (ea + cplx(0.5, 2.0) * eb)) < 1e-14);
  CHECK(std::abs(expectation(rho, dagger(A)) - std::conj(ea)) < 1e-14);

  CHECK_THROWS_AS(expectation(rho, Operator::identity(d + 1)), std::domain_error);
}
