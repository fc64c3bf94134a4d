#include "lambdacav/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace lambdacav {

namespace {

FockTruncation trunc_of(const DensityMatrix& state) {
  if (state.dim() % kAtomLevels != 0 || state.dim() < 2 * kAtomLevels)
    throw std::domain_error("observables: density matrix is not on the atom x field space");
  return FockTruncation{state.dim() / kAtomLevels - 1};
}

}  // namespace

double photon_number(const DensityMatrix& state) {
  const FockTruncation trunc = trunc_of(state);
  const Operator a = annihilation(trunc);
  return expectation(state, on_field(dagger(a) * a, trunc)).real();
}

double output_photon_rate(const DensityMatrix& state, const SystemParams& params) {
  return 2.0 * params.kappa_B * photon_number(state) / params.kappa();
}

std::optional<double> g2_zero(const DensityMatrix& state) {
  const FockTruncation trunc = trunc_of(state);
  const Operator a = annihilation(trunc);
  const Operator ad = dagger(a);
  const double n = expectation(state, on_field(ad * a, trunc)).real();
  if (!(n > kPhotonNumberFloor)) return std::nullopt;
  const double n2 = expectation(state, on_field(ad * ad * a * a, trunc)).real();
  return n2 / (n * n);
}

double absorption(const DensityMatrix& state) {
  const FockTruncation trunc = trunc_of(state);
  return std::abs(expectation(state, on_atom(atomic_sigma(1, 3), trunc)).imag());
}

ObservableSet measure(const DensityMatrix& state, const SystemParams& params) {
  ObservableSet obs;
  obs.n_intracavity = photon_number(state);
  obs.n_out = output_photon_rate(state, params);
  obs.g2_zero = g2_zero(state);
  obs.absorption = absorption(state);
  return obs;
}

std::vector<double> predicted_peak_detunings(double g, double Omega_c, int n_max) {
  if (n_max < 1) throw std::domain_error("predicted_peak_detunings: n_max must be >= 1");
  std::vector<double> peaks;
  peaks.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) peaks.push_back(std::sqrt(n * g * g + Omega_c * Omega_c));
  return peaks;
}

double cooperativity(double g, double Gamma) {
  if (!(Gamma > 0.0)) throw std::domain_error("cooperativity: Gamma must be positive");
  return g * g / (2.0 * Gamma);
}

double g_from_C(double C, double Gamma) {
  if (!(Gamma > 0.0)) throw std::domain_error("g_from_C: Gamma must be positive");
  if (!(C >= 0.0)) throw std::domain_error("g_from_C: C must be >= 0");
  return std::sqrt(2.0 * Gamma * C);
}

}  // namespace lambdacav
