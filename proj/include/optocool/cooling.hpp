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

namespace optocool {

enum class Method { closed_form, quadrature, residue, lyapunov };

// Steady-state second moments of the oscillator. n_eff is fixed by
// (var_q + var_p)/2 - 1/2; t_eff by the occupancy-temperature relation.
struct CoolingResult {
  double var_q = 0.0;
  double var_p = 0.0;
  double n_eff = 0.0;
  double t_eff = 0.0;              // K
  double equipartition_gap = 0.0;  // var_q - var_p
  Method method = Method::closed_form;
};

// Frequency-dependent effective oscillator parameters read off the
// modified susceptibility. When the squared effective frequency goes
// negative (anti-restoring regime) `restoring` is false and `frequency`
// is NaN.
struct EffectiveOscillator {
  double frequency = 0.0;  // rad/s
  double damping = 0.0;    // rad/s
  bool restoring = true;
};

}  // namespace optocool
