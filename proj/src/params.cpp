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

#include "optocool/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "optocool/constants.hpp"
#include "optocool/errors.hpp"
#include "optocool/polynomial.hpp"

namespace optocool {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0))
    throw std::invalid_argument(std::string(name) + " must be positive");
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0))
    throw std::invalid_argument(std::string(name) + " must be >= 0");
}

}  // namespace

void PhysicalConfig::validate() const {
  require_positive(mech_freq, "mech_freq");
  require_positive(mech_damping, "mech_damping");
  require_positive(mass, "mass");
  require_positive(cavity_length, "cavity_length");
  require_positive(laser_wavelength, "laser_wavelength");
  require_positive(cavity_decay, "cavity_decay");
  require_nonnegative(laser_power, "laser_power");
  require_nonnegative(bath_temperature, "bath_temperature");
  if (!(detection_efficiency > 0.0 && detection_efficiency <= 1.0))
    throw std::invalid_argument("detection_efficiency must be in (0, 1]");
  require_nonnegative(feedback_gain, "feedback_gain");
  if (feedback_gain > 0.0 && !(feedback_bandwidth > 0.0))
    throw std::invalid_argument(
        "feedback_bandwidth must be positive when feedback_gain > 0");
  if (!std::isfinite(detuning))
    throw std::invalid_argument("detuning must be finite");
}

double thermal_occupancy(double temperature_k, double omega) {
  if (!(omega > 0.0))
    throw std::invalid_argument("thermal_occupancy: omega must be positive");
  if (!(temperature_k >= 0.0))
    throw std::invalid_argument("thermal_occupancy: temperature must be >= 0");
  if (temperature_k == 0.0) return 0.0;
  const double x =
      constants::hbar * omega / (constants::k_boltzmann * temperature_k);
  if (x > 700.0) return 0.0;  // below double underflow of exp(-x)
  return 1.0 / std::expm1(x);
}

double occupancy_to_temperature(double n_eff, double omega) {
  if (!(n_eff > 0.0))
    throw std::invalid_argument(
        "occupancy_to_temperature: n_eff must be positive");
  if (!(omega > 0.0))
    throw std::invalid_argument(
        "occupancy_to_temperature: omega must be positive");
  return constants::hbar * omega /
         (constants::k_boltzmann * std::log1p(1.0 / n_eff));
}

double laser_angular_frequency(const PhysicalConfig& cfg) {
  return constants::two_pi * constants::c_light / cfg.laser_wavelength;
}

DerivedParams derive_params(const PhysicalConfig& cfg) {
  cfg.validate();
  DerivedParams out;
  const double omega_0 = laser_angular_frequency(cfg);
  out.drive_amp = std::sqrt(2.0 * cfg.laser_power * cfg.cavity_decay /
                            (constants::hbar * omega_0));
  out.bare_coupling = (omega_0 / cfg.cavity_length) *
                      std::sqrt(constants::hbar / (cfg.mass * cfg.mech_freq));
  out.intracavity_amp =
      out.drive_amp / std::hypot(cfg.cavity_decay, cfg.detuning);
  out.static_displacement = out.bare_coupling * out.intracavity_amp *
                            out.intracavity_amp / cfg.mech_freq;
  out.effective_coupling =
      std::sqrt(2.0) * out.bare_coupling * out.intracavity_amp;
  out.thermal_occupancy =
      thermal_occupancy(cfg.bath_temperature, cfg.mech_freq);
  out.scaled_power = 2.0 * out.effective_coupling * out.effective_coupling /
                     (cfg.cavity_decay * cfg.mech_damping);
  out.scaled_gain = cfg.feedback_gain * out.effective_coupling *
                    cfg.mech_freq / (cfg.cavity_decay * cfg.mech_damping);
  return out;
}

std::vector<SteadyStateBranch> solve_steady_state(double bare_detuning,
                                                  const PhysicalConfig& cfg) {
  cfg.validate();
  const DerivedParams dp = derive_params(cfg);
  const double kappa = cfg.cavity_decay;
  const double e_sq = dp.drive_amp * dp.drive_amp;
  const double shift = dp.bare_coupling * dp.bare_coupling / cfg.mech_freq;

  std::vector<double> intensities;
  if (e_sq == 0.0) {
    intensities.push_back(0.0);
  } else if (shift * e_sq / (kappa * kappa + bare_detuning * bare_detuning) <
             1e-18 * std::hypot(kappa, bare_detuning)) {
    // Negligible radiation-pressure shift: linear cavity.
    intensities.push_back(e_sq /
                          (kappa * kappa + bare_detuning * bare_detuning));
  } else {
    // I [kappa^2 + (Delta0 - shift I)^2] = E^2, ascending coefficients.
    const std::vector<double> cubic = {
        -e_sq, kappa * kappa + bare_detuning * bare_detuning,
        -2.0 * bare_detuning * shift, shift * shift};
    for (const Complex& root : poly_roots(cubic)) {
      if (std::abs(root.imag()) > 1e-8 * std::max(1.0, std::abs(root)))
        continue;
      if (root.real() <= 0.0) continue;
      intensities.push_back(root.real());
    }
  }

  std::sort(intensities.begin(), intensities.end());
  if (intensities.size() == 2) {
    // A double root at the bistability onset resolves to 1 or 3 physically;
    // treat the degenerate pair as one branch.
    if (std::abs(intensities[1] - intensities[0]) <
        1e-8 * std::abs(intensities[1]))
      intensities.pop_back();
  }

  std::vector<SteadyStateBranch> out;
  int index = 0;
  for (double intensity : intensities) {
    // Newton polish on f(I) = I [kappa^2 + (Delta0 - shift I)^2] - E^2.
    double i_cur = intensity;
    for (int it = 0; it < 30 && i_cur > 0.0; ++it) {
      const double d = bare_detuning - shift * i_cur;
      const double f = i_cur * (kappa * kappa + d * d) - e_sq;
      const double df = kappa * kappa + d * d - 2.0 * shift * i_cur * d;
      if (df == 0.0) break;
      const double step = f / df;
      if (std::abs(step) <= 1e-16 * std::abs(i_cur)) break;
      i_cur -= step;
    }
    const double d_eff = bare_detuning - shift * i_cur;
    const double residual =
        std::abs(i_cur * (kappa * kappa + d_eff * d_eff) - e_sq);
    if (e_sq > 0.0 && residual > 1e-10 * e_sq)
      throw NumericalError(
          "solve_steady_state: root polishing stalled, relative residual " +
          std::to_string(residual / e_sq));
    SteadyStateBranch branch;
    branch.intensity = i_cur;
    branch.detuning_effective = d_eff;
    branch.bare_detuning = bare_detuning;
    branch.branch_index = index++;
    out.push_back(branch);
  }
  if (out.size() == 3) out[1].bistable_middle = true;
  return out;
}

}  // namespace optocool
