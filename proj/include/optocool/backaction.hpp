// Copyright 2026 The optocool authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "optocool/cooling.hpp"
#include "optocool/oracles.hpp"
#include "optocool/params.hpp"
#include "optocool/stability.hpp"

namespace optocool::backaction {

// Linearized detuned-cavity model. All rates rad/s; detuning signed
// (positive = red-detuned drive, the cooling side).
struct Model {
  double omega_m = 0.0;
  double gamma_m = 0.0;
  double kappa = 0.0;
  double detuning = 0.0;
  double coupling = 0.0;  // G
  double n_thermal = 0.0;
  ThermalModel thermal_model = ThermalModel::flat;

  void validate() const;
};

Model from_config(const PhysicalConfig& cfg, const DerivedParams& dp);

struct NoiseSpectra {
  double thermal = 0.0;             // S_th(omega)
  double radiation_pressure = 0.0;  // S_rp(omega, Delta)
};

// Stokes (a_plus) and anti-Stokes (a_minus) photon scattering rates and
// the net cooling rate gamma_cool = a_minus - a_plus.
struct ScatteringRates {
  double a_plus = 0.0;
  double a_minus = 0.0;
  double gamma_cool = 0.0;
};

struct PerturbativeResult {
  double var_q = 0.0;
  double var_p = 0.0;
  double n_eff = 0.0;      // (gamma_m nbar + A+) / (gamma_m + Gamma)
  bool regime_ok = true;   // false when gamma_m nbar >= Gamma or G >= kappa
  std::string note;
};

NoiseSpectra noise_spectra(double omega, const Model& m);

std::complex<double> susceptibility(double omega, const Model& m);

EffectiveOscillator effective_oscillator(double omega, const Model& m);

// Routh-Hurwitz values s1, s2 plus the four characteristic-polynomial
// poles; stable iff both s-values are positive.
StabilityReport stability(const Model& m);

// Closed-form steady-state variances (flat thermal model only). Refuses
// an unstable model with UnstableModelError.
CoolingResult exact_variances(const Model& m);

// Same variances through the requested route; quadrature/residue/lyapunov
// delegate to the oracles module.
CoolingResult variances(const Model& m, Method method);

// Position variance by quadrature only; the one route that also supports
// the coth thermal model (whose momentum integral does not converge).
double variance_q_quadrature(const Model& m);

ScatteringRates scattering_rates(const Model& m);

PerturbativeResult perturbative_limits(const Model& m);

// S_q(omega) = |chi_eff|^2 (S_th + S_rp); the integrand handed to the
// quadrature oracle.
double position_spectrum(double omega, const Model& m);

// Characteristic polynomial in omega (ascending complex coefficients) of
// the effective susceptibility denominator cleared of fractions, in units
// of omega_m (substitute omega -> omega_m * x).
std::vector<std::complex<double>> characteristic_polynomial(const Model& m);

// Oracle bridges. Integrands are expressed in scaled frequency
// x = omega / omega_m so that integral dx/2pi equals the variance.
oracles::SpectrumIntegrand variance_integrand(const Model& m);
oracles::RationalIntegrand rational_q_integrand(const Model& m);
oracles::RationalIntegrand rational_p_integrand(const Model& m);
oracles::LinearStateModel state_model(const Model& m);

}  // namespace optocool::backaction
