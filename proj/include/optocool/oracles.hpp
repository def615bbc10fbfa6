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

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "optocool/stability.hpp"

namespace optocool::oracles {

enum class Parity { even, none };

// A place where the integrand has structure (a resonance), used to seed the
// initial quadrature panels so that peaks much narrower than the base grid
// cannot be skipped over.
struct SpectralFeature {
  double center = 0.0;
  double width = 0.0;
};

// Nonnegative spectral density on the real frequency axis, integrable
// against d omega / 2 pi. tail_exponent k means integrand ~ omega^{-k} as
// |omega| -> inf; the second moment needs k >= 4.
struct SpectrumIntegrand {
  std::function<double(double)> evaluator;
  Parity parity_hint = Parity::even;
  int tail_exponent = 4;
  double scale = 1.0;  // compactification scale (max characteristic rate)
  std::vector<SpectralFeature> features;
};

struct Moments {
  double m0 = 0.0;  // integral d omega / 2 pi s(omega)
  double m2 = 0.0;  // integral d omega / 2 pi omega^2 s(omega)
  double err0 = 0.0;
  double err2 = 0.0;
  long panels = 0;
  bool converged = false;
};

// Adaptive Simpson quadrature on the tan-compactified axis
// omega = scale * tan(theta), refined to rel_tol on the Richardson error
// estimate. Set want_m2 = false to skip the second moment (e.g. when its
// tail does not converge). Throws NumericalError when a requested moment
// cannot converge by tail exponent; returns converged = false when the
// panel budget is exhausted first.
Moments integrate_moments(const SpectrumIntegrand& s, double rel_tol = 1e-9,
                          long max_panels = 1L << 20, bool want_m2 = true);

// Ratio of real-coefficient polynomials in omega (ascending coefficients);
// the denominator must have no real roots and the degree deficit must be
// at least 2. When the denominator is a squared modulus |q(omega)|^2 of a
// stable characteristic polynomial q, supply q in denominator_half: the
// residues are then computed from q's roots directly. Re-finding the roots
// of the expanded |q|^2 cannot resolve the near-conjugate mechanical pole
// pairs at gamma_m/omega_m ~ 1e-6 once the coefficients are rounded.
struct RationalIntegrand {
  std::vector<double> numerator;
  std::vector<double> denominator;
  std::vector<std::complex<double>> denominator_half;
};

// integral d omega / 2 pi N/D by residue summation over upper-half-plane
// poles (companion-matrix roots). Near-degenerate poles (pairwise distance
// < 1e-8 relative) fall back to adaptive quadrature; *used_quadrature is
// set accordingly when non-null. Throws NumericalError on a real-axis pole.
double integrate_rational(const RationalIntegrand& r,
                          bool* used_quadrature = nullptr);

// Poles of a characteristic polynomial in omega (complex coefficients,
// ascending). Stable iff every root has negative imaginary part.
StabilityReport pole_stability(
    const std::vector<std::complex<double>>& char_poly_omega);

// Linearized drift/diffusion pair in the (dq, dp, dX, dY) basis.
struct LinearStateModel {
  std::array<std::array<double, 4>, 4> drift{};
  std::array<double, 4> diffusion_diag{};  // (0, gamma(2 nbar + 1), kappa, kappa)
};

using Covariance = std::array<std::array<double, 4>, 4>;

// Steady-state covariance from drift V + V drift^T = -diffusion.
// Symmetric by construction. Refuses a non-Hurwitz drift.
Covariance lyapunov_covariance(const LinearStateModel& m);

}  // namespace optocool::oracles
