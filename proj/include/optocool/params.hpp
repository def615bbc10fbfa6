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

#include <vector>

namespace optocool {

enum class ThermalModel { flat, coth };

// Laboratory inputs, SI units throughout; every *_freq / *_damping / decay /
// detuning / bandwidth field is an angular rate in rad/s.
struct PhysicalConfig {
  double mech_freq = 0.0;             // omega_m
  double mech_damping = 0.0;          // gamma_m
  double mass = 0.0;                  // kg
  double cavity_length = 0.0;         // m
  double laser_power = 0.0;           // W
  double laser_wavelength = 0.0;      // m
  double cavity_decay = 0.0;          // kappa
  double detuning = 0.0;              // effective Delta, signed
  double bath_temperature = 0.0;      // K
  double detection_efficiency = 1.0;  // eta in (0, 1]
  double feedback_gain = 0.0;         // g_cd >= 0, dimensionless
  double feedback_bandwidth = 0.0;    // omega_fb
  ThermalModel thermal_model = ThermalModel::flat;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct DerivedParams {
  double drive_amp = 0.0;            // E, 1/s
  double bare_coupling = 0.0;        // G0, 1/s
  double intracavity_amp = 0.0;      // alpha_s, real >= 0 by phase choice
  double static_displacement = 0.0;  // q_s, dimensionless
  double effective_coupling = 0.0;   // G, rad/s
  double thermal_occupancy = 0.0;    // nbar
  double scaled_power = 0.0;         // zeta = 2 G^2 / (kappa gamma_m)
  double scaled_gain = 0.0;          // g2 = g_cd G omega_m / (kappa gamma_m)
};

// One real positive root of the intracavity-intensity cubic.
struct SteadyStateBranch {
  double intensity = 0.0;           // |alpha_s|^2, photon number
  double detuning_effective = 0.0;  // rad/s
  double bare_detuning = 0.0;       // rad/s
  int branch_index = 0;
  bool bistable_middle = false;     // middle branch of a 3-root solution
};

// nbar = 1 / (exp(hbar w / kB T) - 1); exactly 0 at T = 0.
double thermal_occupancy(double temperature_k, double omega);

// Inverse of thermal_occupancy: T such that nbar(T, omega) = n_eff.
// Rejects n_eff <= 0.
double occupancy_to_temperature(double n_eff, double omega);

// omega_0 = 2 pi c / lambda.
double laser_angular_frequency(const PhysicalConfig& cfg);

DerivedParams derive_params(const PhysicalConfig& cfg);

// All real positive roots I of I [kappa^2 + (Delta0 - G0^2 I / omega_m)^2]
// = E^2, ascending. One or three branches; with three, the middle one is the
// unstable branch of the bistability.
std::vector<SteadyStateBranch> solve_steady_state(double bare_detuning,
                                                  const PhysicalConfig& cfg);

}  // namespace optocool
