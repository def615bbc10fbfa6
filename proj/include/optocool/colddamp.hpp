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

namespace optocool::colddamp {

// Cold-damping feedback model. The cavity is resonant by construction
// (Delta = 0): position readout is sharpest there, so the detuning is not a
// parameter of this scheme.
struct Model {
  double omega_m = 0.0;
  double gamma_m = 0.0;
  double kappa = 0.0;
  double coupling = 0.0;            // G
  double n_thermal = 0.0;
  double feedback_gain = 0.0;       // g_cd >= 0
  double feedback_bandwidth = 0.0;  // omega_fb > 0
  double efficiency = 1.0;          // eta in (0, 1]
  ThermalModel thermal_model = ThermalModel::flat;

  void validate() const;
};

// cfg.detuning is ignored; the scheme is defined at resonance.
Model from_config(const PhysicalConfig& cfg, const DerivedParams& dp);

// Derivative high-pass filter g(omega) = -i omega g_cd / (1 - i omega/omega_fb).
struct FeedbackFilter {
  double gain = 0.0;       // g_cd
  double bandwidth = 0.0;  // omega_fb
};

struct Spectra {
  double thermal = 0.0;
  double radiation_pressure = 0.0;  // S_rp(omega, 0)
  double feedback = 0.0;            // |g(omega)|^2 / (4 kappa eta)
};

// Feedback-gain ceiling: stability requires g2 < g2_max.
struct GainBound {
  double eps0 = 0.0;
  double eps_r_sq = 0.0;
  double g2_max = 0.0;
};

enum class Regime { instantaneous, finite_bandwidth };

struct LimitVariances {
  double var_q = 0.0;
  double var_p = 0.0;
  bool regime_ok = true;  // false when the defining inequalities are violated
                          // by more than a factor of 3
  std::string note;
};

std::complex<double> feedback_transfer(double omega, const FeedbackFilter& f);

double feedback_noise_spectrum(double omega, const Model& m);

Spectra noise_spectra(double omega, const Model& m);

std::complex<double> susceptibility(double omega, const Model& m);

EffectiveOscillator effective_oscillator(double omega, const Model& m);

// Single Routh-Hurwitz value s_cd plus the four poles of the closed loop.
StabilityReport stability(const Model& m);

GainBound max_gain(const Model& m);

// Closed-form steady-state variances (flat thermal model only). Refuses an
// unstable model with UnstableModelError.
CoolingResult exact_variances(const Model& m);

CoolingResult variances(const Model& m, Method method);

LimitVariances limit_variances(const Model& m, Regime regime);

// Normalization 1/sqrt(2 eta kappa) relating the detected output quadrature
// to the intracavity phase quadrature estimate.
double estimated_quadrature_gain(const Model& m);

// sqrt(1/eta - 1): weight of the vacuum admixed by the detection
// beam splitter; 0 at unit efficiency.
double vacuum_noise_weight(double eta);

// g2 = g_cd G omega_m / (kappa gamma_m)
double scaled_gain(const Model& m);
// zeta = 2 G^2 / (kappa gamma_m)
double scaled_power(const Model& m);

// S_q(omega) = |chi_eff|^2 (S_th + S_rp + S_fb).
double position_spectrum(double omega, const Model& m);

// Closed-loop characteristic polynomial in scaled frequency
// x = omega / omega_m (ascending complex coefficients, degree 4).
std::vector<std::complex<double>> characteristic_polynomial(const Model& m);

oracles::SpectrumIntegrand variance_integrand(const Model& m);
oracles::RationalIntegrand rational_q_integrand(const Model& m);
oracles::RationalIntegrand rational_p_integrand(const Model& m);

}  // namespace optocool::colddamp
