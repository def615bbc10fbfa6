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

#include <cmath>
#include <random>

#include "optocool/backaction.hpp"
#include "optocool/colddamp.hpp"
#include "optocool/constants.hpp"
#include "optocool/params.hpp"

namespace support {

using namespace optocool;

// 10 MHz / Q = 1e5 oscillator, 0.5 mm cavity, 1064 nm drive, 0.6 K bath.
inline PhysicalConfig reference_config(double kappa_rel = 0.2,
                                       double delta_rel = 1.0,
                                       double power_w = 50e-3) {
  PhysicalConfig cfg;
  cfg.mech_freq = constants::two_pi * 1e7;
  cfg.mech_damping = constants::two_pi * 100.0;
  cfg.mass = 250e-12;
  cfg.cavity_length = 0.5e-3;
  cfg.laser_power = power_w;
  cfg.laser_wavelength = 1064e-9;
  cfg.cavity_decay = kappa_rel * cfg.mech_freq;
  cfg.detuning = delta_rel * cfg.mech_freq;
  cfg.bath_temperature = 0.6;
  return cfg;
}

// Bad-cavity feedback setup matching the reference mechanics.
inline PhysicalConfig feedback_config(double g_cd = 0.8, double power_w = 0.1,
                                      double kappa_rel = 3.0,
                                      double fb_rel = 3.5, double eta = 1.0) {
  PhysicalConfig cfg = reference_config(kappa_rel, 0.0, power_w);
  cfg.feedback_gain = g_cd;
  cfg.feedback_bandwidth = fb_rel * cfg.mech_freq;
  cfg.detection_efficiency = eta;
  return cfg;
}

// Deterministic model generator covering the oracle-equivalence parameter
// box: log-uniform kappa in [0.05, 30], Delta in [0.1, 3], G in [0.01, 1],
// gamma in [1e-6, 1e-3] (units of omega_m), nbar uniform in [0, 1e4].
class ModelGen {
 public:
  explicit ModelGen(unsigned long seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  backaction::Model backaction_model(double min_margin = 1e-8) {
    for (;;) {
      backaction::Model m;
      m.omega_m = constants::two_pi * 1e7;
      m.gamma_m = log_uniform(1e-6, 1e-3) * m.omega_m;
      m.kappa = log_uniform(0.05, 30.0) * m.omega_m;
      m.detuning = log_uniform(0.1, 3.0) * m.omega_m;
      m.coupling = log_uniform(0.01, 1.0) * m.omega_m;
      m.n_thermal = uniform(0.0, 1e4);
      const auto rep = backaction::stability(m);
      if (rep.stable && std::abs(rep.margin) > min_margin) return m;
    }
  }

  colddamp::Model colddamp_model(double min_margin = 1e-8) {
    for (;;) {
      colddamp::Model m;
      m.omega_m = constants::two_pi * 1e7;
      m.gamma_m = log_uniform(1e-6, 1e-3) * m.omega_m;
      m.kappa = log_uniform(0.05, 30.0) * m.omega_m;
      m.coupling = log_uniform(0.01, 1.0) * m.omega_m;
      m.feedback_bandwidth = log_uniform(0.1, 100.0) * m.omega_m;
      m.feedback_gain = log_uniform(1e-3, 10.0);
      m.efficiency = uniform(0.05, 1.0);
      m.n_thermal = uniform(0.0, 1e4);
      const auto rep = colddamp::stability(m);
      if (rep.stable && std::abs(rep.margin) > min_margin) return m;
    }
  }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  const double ref = std::max(std::abs(a), std::abs(b));
  return ref == 0.0 ? 0.0 : std::abs(a - b) / ref;
}

}  // namespace support
