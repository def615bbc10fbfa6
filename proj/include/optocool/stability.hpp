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

namespace optocool {

// Routh-Hurwitz quantity together with a dimensionless margin. The margin
// divides the raw value by the sum of the magnitudes of its additive terms,
// so cancellation (proximity to the stability boundary) shows up as
// |margin| << 1 regardless of the rate scales involved.
struct HurwitzValue {
  std::string name;
  double value = 0.0;   // rate-homogeneous, in units of the mechanical frequency
  double margin = 0.0;  // value / scale, in [-1, 1]
};

// Fluctuation dynamics follow the e^{-i omega t} convention, so a stable
// pole has negative imaginary part.
struct StabilityReport {
  static constexpr double marginal_threshold = 1e-9;

  std::vector<HurwitzValue> s_values;      // empty for pole-only reports
  std::vector<std::complex<double>> poles; // rad/s
  bool stable = false;
  double margin = 0.0;  // min margin over s-values, or pole margin
  bool marginal = false;
};

// -max_k Im(w_k) / max_k |w_k|; positive when every pole is damped.
double pole_margin(const std::vector<std::complex<double>>& poles);

}  // namespace optocool
