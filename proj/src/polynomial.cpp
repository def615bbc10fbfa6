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

#include "optocool/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "optocool/errors.hpp"

namespace optocool {

Complex poly_eval(std::span<const Complex> coeffs, Complex x) {
  Complex acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double poly_eval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<Complex> poly_derivative(std::span<const Complex> coeffs) {
  std::vector<Complex> out;
  if (coeffs.size() <= 1) return {Complex{0.0, 0.0}};
  out.reserve(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    out.push_back(static_cast<double>(k) * coeffs[k]);
  return out;
}

std::vector<Complex> poly_multiply(std::span<const Complex> a,
                                   std::span<const Complex> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Complex> out(a.size() + b.size() - 1, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<Complex> poly_conjugate(std::span<const Complex> coeffs) {
  std::vector<Complex> out(coeffs.begin(), coeffs.end());
  for (auto& c : out) c = std::conj(c);
  return out;
}

std::vector<double> poly_real_coeffs(std::span<const Complex> coeffs,
                                     double rel_tol) {
  double max_abs = 0.0;
  for (const auto& c : coeffs) max_abs = std::max(max_abs, std::abs(c));
  std::vector<double> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    if (std::abs(c.imag()) > rel_tol * max_abs)
      throw NumericalError("poly_real_coeffs: non-negligible imaginary part");
    out.push_back(c.real());
  }
  return out;
}

namespace {

// Newton polish in the rescaled variable; keeps the step only when the
// residual improves.
Complex polish_root(std::span<const Complex> coeffs,
                    std::span<const Complex> deriv, Complex z) {
  double best = std::abs(poly_eval(coeffs, z));
  for (int it = 0; it < 12; ++it) {
    const Complex d = poly_eval(deriv, z);
    if (d == Complex{0.0, 0.0}) break;
    const Complex z_next = z - poly_eval(coeffs, z) / d;
    const double res = std::abs(poly_eval(coeffs, z_next));
    if (!(res < best)) break;
    best = res;
    z = z_next;
  }
  return z;
}

}  // namespace

std::vector<Complex> poly_roots(std::span<const Complex> coeffs_in) {
  std::vector<Complex> c(coeffs_in.begin(), coeffs_in.end());
  if (c.empty()) throw std::invalid_argument("poly_roots: empty polynomial");

  double max_abs = 0.0;
  for (const auto& v : c) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0)
    throw std::invalid_argument("poly_roots: identically-zero polynomial");

  // Trim only exactly-vanishing leading coefficients. A leading coefficient
  // tiny relative to the others can still carry roots at a large variable
  // scale (the rescaling below absorbs the conditioning).
  while (c.size() > 1 &&
         std::abs(c.back()) < std::numeric_limits<double>::min())
    c.pop_back();

  std::vector<Complex> roots;
  // Exact roots at the origin.
  std::size_t first = 0;
  while (first + 1 < c.size() && std::abs(c[first]) <= 1e-300) {
    roots.emplace_back(0.0, 0.0);
    ++first;
  }
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(first));

  const std::size_t n = c.size() - 1;  // degree
  if (n == 0) return roots;

  // Monic normalization.
  const Complex lead = c.back();
  for (auto& v : c) v /= lead;

  if (n == 1) {
    roots.push_back(-c[0]);
    return roots;
  }

  // Variable rescaling x = r y keeps companion entries O(1).
  double r = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::abs(c[k]);
    if (a > 0.0)
      r = std::max(r, std::pow(a, 1.0 / static_cast<double>(n - k)));
  }
  if (r == 0.0) {
    for (std::size_t k = 0; k < n; ++k) roots.emplace_back(0.0, 0.0);
    return roots;
  }
  std::vector<Complex> b(n + 1);
  double scale_pow = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    b[n - k] = c[n - k] * scale_pow;  // b_k = c_k r^{k-n}
    scale_pow /= r;
  }

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<long>(n),
                                                      static_cast<long>(n));
  for (std::size_t i = 0; i + 1 < n; ++i)
    companion(static_cast<long>(i) + 1, static_cast<long>(i)) = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    companion(static_cast<long>(i), static_cast<long>(n) - 1) = -b[i];

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("poly_roots: companion eigenvalue solve failed");

  const auto deriv = poly_derivative(b);
  for (long i = 0; i < static_cast<long>(n); ++i) {
    const Complex y = polish_root(b, deriv, solver.eigenvalues()(i));
    roots.push_back(r * y);
  }
  return roots;
}

std::vector<Complex> poly_roots(std::span<const double> coeffs) {
  std::vector<Complex> c;
  c.reserve(coeffs.size());
  for (double v : coeffs) c.emplace_back(v, 0.0);
  return poly_roots(c);
}

}  // namespace optocool
