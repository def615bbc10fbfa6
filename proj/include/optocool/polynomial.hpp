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
#include <span>
#include <vector>

namespace optocool {

using Complex = std::complex<double>;

// Polynomials are stored as ascending coefficient lists:
// p(x) = c[0] + c[1] x + ... + c[n] x^n.

Complex poly_eval(std::span<const Complex> coeffs, Complex x);
double poly_eval(std::span<const double> coeffs, double x);

std::vector<Complex> poly_derivative(std::span<const Complex> coeffs);
std::vector<Complex> poly_multiply(std::span<const Complex> a,
                                   std::span<const Complex> b);

// Coefficient-wise conjugate. For real x, conj(p(x)) = pbar(x).
std::vector<Complex> poly_conjugate(std::span<const Complex> coeffs);

// Drops imaginary parts after checking they are negligible relative to the
// largest coefficient magnitude. Throws NumericalError otherwise.
std::vector<double> poly_real_coeffs(std::span<const Complex> coeffs,
                                     double rel_tol = 1e-9);

// All complex roots of the polynomial, via balanced companion-matrix
// eigenvalues followed by Newton polishing against the input coefficients.
// The variable is rescaled internally, so coefficients spanning many orders
// of magnitude are fine. Leading near-zero coefficients are trimmed.
// Throws std::invalid_argument on an identically-zero or empty polynomial.
std::vector<Complex> poly_roots(std::span<const Complex> coeffs);
std::vector<Complex> poly_roots(std::span<const double> coeffs);

}  // namespace optocool
