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

#include <algorithm>
#include <complex>
#include <doctest.h>
#include <random>
#include <vector>

#include "optocool/errors.hpp"
#include "optocool/polynomial.hpp"

using namespace optocool;

namespace {

std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c = {Complex{1.0, 0.0}};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = next;
  }
  return c;
}

double match_roots(std::vector<Complex> found,
                   const std::vector<Complex>& expected) {
  double worst = 0.0;
  for (const Complex& e : expected) {
    auto best = std::min_element(found.begin(), found.end(),
                                 [&](const Complex& a, const Complex& b) {
                                   return std::abs(a - e) < std::abs(b - e);
                                 });
    REQUIRE(best != found.end());
    worst = std::max(worst, std::abs(*best - e) /
                                std::max(1.0, std::abs(e)));
    found.erase(best);
  }
  return worst;
}

}  // namespace

TEST_CASE("poly_eval matches Horner expansion") {
  const std::vector<double> c = {2.0, -3.0, 0.5, 1.0};
  CHECK(poly_eval(std::span<const double>(c), 2.0) ==
        doctest::Approx(2.0 - 6.0 + 2.0 + 8.0));
}

TEST_CASE("poly_multiply and poly_conjugate produce |p|^2 on the real axis") {
  const std::vector<Complex> p = {{1.0, 2.0}, {0.0, -1.5}, {3.0, 0.25}};
  const auto sq = poly_multiply(p, poly_conjugate(p));
  for (double x : {-2.3, 0.0, 0.7, 5.1}) {
    const Complex direct = poly_eval(p, Complex{x, 0.0});
    const Complex via = poly_eval(sq, Complex{x, 0.0});
    CHECK(via.real() == doctest::Approx(std::norm(direct)).epsilon(1e-12));
    CHECK(std::abs(via.imag()) < 1e-12 * std::norm(direct) + 1e-300);
  }
}

TEST_CASE("poly_roots recovers well-separated complex roots") {
  const std::vector<Complex> expected = {
      {1.0, -0.5}, {-2.0, -0.1}, {0.3, 2.0}, {-0.7, -3.0}};
  const auto found = poly_roots(poly_from_roots(expected));
  CHECK(found.size() == 4);
  CHECK(match_roots(found, expected) < 1e-12);
}

TEST_CASE("poly_roots handles huge dynamic range via variable scaling") {
  // Root magnitudes spanning 1e-3 .. 1e8.
  const std::vector<Complex> expected = {
      {1e-3, -1e-4}, {-5e2, -10.0}, {0.0, -1e8}, {3e5, -2e4}};
  const auto found = poly_roots(poly_from_roots(expected));
  CHECK(found.size() == 4);
  CHECK(match_roots(found, expected) < 1e-9);
}

TEST_CASE("poly_roots trims vanishing leading coefficients") {
  // (x - 2)(x + 3) with two zero leading terms appended.
  const std::vector<double> c = {-6.0, 1.0, 1.0, 0.0, 0.0};
  const auto found = poly_roots(std::span<const double>(c));
  CHECK(found.size() == 2);
  CHECK(match_roots(found, {{2.0, 0.0}, {-3.0, 0.0}}) < 1e-12);
}

TEST_CASE("poly_roots reports zero roots at the origin exactly") {
  // x^2 (x - 1)
  const std::vector<double> c = {0.0, 0.0, -1.0, 1.0};
  const auto found = poly_roots(std::span<const double>(c));
  CHECK(found.size() == 3);
  int zeros = 0;
  for (const auto& r : found)
    if (r == Complex{0.0, 0.0}) ++zeros;
  CHECK(zeros == 2);
}

TEST_CASE("poly_roots rejects the zero polynomial") {
  const std::vector<double> c = {0.0, 0.0};
  CHECK_THROWS_AS(poly_roots(std::span<const double>(c)),
                  std::invalid_argument);
}

TEST_CASE("random quartics round-trip through roots") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Complex> expected;
    for (int i = 0; i < 4; ++i) expected.push_back({u(rng), u(rng)});
    // Keep roots separated so the check tolerance stays meaningful.
    bool ok = true;
    for (std::size_t i = 0; i < expected.size() && ok; ++i)
      for (std::size_t j = i + 1; j < expected.size(); ++j)
        if (std::abs(expected[i] - expected[j]) < 0.1) ok = false;
    if (!ok) continue;
    const auto found = poly_roots(poly_from_roots(expected));
    CHECK(match_roots(found, expected) < 1e-10);
  }
}
