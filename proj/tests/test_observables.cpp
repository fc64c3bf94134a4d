#include <doctest.h>

#include <random>

#include "lambdacav/observables.hpp"
#include "lambdacav/steady.hpp"
#include "oracles/oracles.hpp"

using namespace lambdacav;

namespace {

DensityMatrix wrap(const Eigen::MatrixXcd& rho, int N) {
  DensityMatrix s;
  s.rho = rho;
  s.trunc_used = {N};
  return s;
}

DensityMatrix coherent_steady(double eps) {
  SystemParams p;
  p.g = 0.0;
  p.Omega_c = 8.0;
  p.Omega_p = drive_from_input(eps, DriveMap::standard()).Omega_p;
  return adaptive_truncation(p);
}

}  // namespace

TEST_CASE("output photon rate") {
  SystemParams sym;
  CHECK(output_photon_rate(wrap(ground_vacuum({3}), 3), sym) == 0.0);

  const DensityMatrix coh = coherent_steady(1.0);
  CHECK(output_photon_rate(coh, sym) == doctest::Approx(0.32).epsilon(1e-6));

  SystemParams closed;
  closed.kappa_A = 1.0;
  closed.kappa_B = 0.0;
  CHECK(output_photon_rate(coh, closed) == 0.0);

  SystemParams lopsided;
  lopsided.kappa_A = 0.2;
  lopsided.kappa_B = 0.8;
  CHECK(output_photon_rate(coh, lopsided) == doctest::Approx(1.6 * photon_number(coh)).epsilon(1e-14));
}

TEST_CASE("g2 at zero delay") {
  CHECK(coherent_steady(1.0).trunc_used.N >= 8);
  CHECK(g2_zero(coherent_steady(1.0)).value() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(g2_zero(wrap(oracle::fock_state(0, 1, 4), 4)).value() == 0.0);
  CHECK(g2_zero(wrap(oracle::fock_state(2, 2, 4), 4)).value() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(g2_zero(wrap(ground_vacuum({4}), 4)).has_value());

  const ObservableSet vac = measure(wrap(ground_vacuum({4}), 4), SystemParams{});
  CHECK(vac.n_intracavity == 0.0);
  CHECK(vac.n_out == 0.0);
  CHECK_FALSE(vac.g2_zero.has_value());
}

TEST_CASE("g2 is invariant under field phase rotation") {
  const int N = 5, d = 3 * (N + 1);
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  Eigen::MatrixXcd rho = m * m.adjoint();
  rho /= rho.trace();
  Eigen::VectorXcd phase(d);
  for (int s = 0; s < 3; ++s)
    for (int n = 0; n <= N; ++n) phase(oracle::idx(s, n, N)) = std::polar(1.0, 0.83 * n);
  const Eigen::MatrixXcd U = phase.asDiagonal();
  const Eigen::MatrixXcd rotated = U * rho * U.adjoint();
  CHECK(g2_zero(wrap(rotated, N)).value() == doctest::Approx(g2_zero(wrap(rho, N)).value()).epsilon(1e-12));
}

TEST_CASE("absorption") {
  const int N = 3;
  CHECK(absorption(wrap(oracle::fock_state(2, 1, N), N)) == 0.0);

  Eigen::MatrixXcd rho = 0.5 * (oracle::fock_state(0, 1, N) + oracle::fock_state(2, 1, N));
  rho(oracle::idx(0, 1, N), oracle::idx(2, 1, N)) = cplx(0.0, 0.25);
  rho(oracle::idx(2, 1, N), oracle::idx(0, 1, N)) = cplx(0.0, -0.25);
  CHECK(absorption(wrap(rho, N)) == doctest::Approx(0.25).epsilon(1e-15));

  SystemParams undriven;
  undriven.Omega_c = 8.0;
  CHECK(absorption(adaptive_truncation(undriven)) == 0.0);
}

TEST_CASE("predicted peak detunings") {
  const auto peaks = predicted_peak_detunings(20.0, 8.0, 3);
  REQUIRE(peaks.size() == 3);
  CHECK(peaks[0] == doctest::Approx(21.5407).epsilon(1e-5));
  CHECK(peaks[1] == doctest::Approx(29.3939).epsilon(1e-5));
  CHECK(peaks[0] < peaks[1]);
  CHECK(peaks[1] < peaks[2]);
  for (double x : predicted_peak_detunings(0.0, 8.0, 4)) CHECK(x == 8.0);
  CHECK(predicted_peak_detunings(21.0, 8.0, 1)[0] > peaks[0]);
  CHECK(predicted_peak_detunings(20.0, 9.0, 1)[0] > peaks[0]);
  CHECK_THROWS_AS(predicted_peak_detunings(20.0, 8.0, 0), std::domain_error);
}

TEST_CASE("cooperativity") {
  CHECK(cooperativity(20.0, 1.0) == 200.0);
  CHECK(cooperativity(0.0, 1.0) == 0.0);
  CHECK(g_from_C(250.0, 1.0) == doctest::Approx(22.3607).epsilon(1e-5));
  for (double C : {0.5, 10.0, 85.0, 1000.0})
    CHECK(std::abs(cooperativity(g_from_C(C, 1.3), 1.3) - C) <= 1e-12 * C);
  CHECK_THROWS_AS(cooperativity(20.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(g_from_C(-1.0, 1.0), std::domain_error);
}
