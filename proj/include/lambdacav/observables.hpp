#pragma once

#include <optional>
#include <vector>

#include "lambdacav/density_matrix.hpp"
#include "lambdacav/model.hpp"

namespace lambdacav {

struct ObservableSet {
  double n_intracavity = 0.0;     // <a^dag a>
  double n_out = 0.0;             // <b_out^dag b_out> / kappa
  std::optional<double> g2_zero;  // empty when <a^dag a> <= 1e-12
  double absorption = 0.0;        // |Im <sigma_13>|
};

inline constexpr double kPhotonNumberFloor = 1e-12;

double photon_number(const DensityMatrix& state);

/// Transmitted photon flux through the output mirror, b_out = sqrt(2 kappa_B) a,
/// in units of kappa.
double output_photon_rate(const DensityMatrix& state, const SystemParams& params);

/// <a^dag a^dag a a> / <a^dag a>^2, or nullopt for a vanishing photon number.
std::optional<double> g2_zero(const DensityMatrix& state);

double absorption(const DensityMatrix& state);

ObservableSet measure(const DensityMatrix& state, const SystemParams& params);

/// Dressed-state resonances sqrt(n g^2 + Omega_c^2) for n = 1..n_max.
std::vector<double> predicted_peak_detunings(double g, double Omega_c, int n_max);

/// C = g^2 / (2 kappa Gamma) with kappa = 1.
double cooperativity(double g, double Gamma);
double g_from_C(double C, double Gamma);

}  // namespace lambdacav
