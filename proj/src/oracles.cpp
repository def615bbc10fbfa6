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

#include "optocool/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "optocool/errors.hpp"
#include "optocool/polynomial.hpp"

namespace optocool::oracles {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kHalfPi = 0.5 * kPi;

// Integrand mapped onto theta in (-pi/2, pi/2) via omega = scale tan(theta).
class Mapped {
 public:
  Mapped(const SpectrumIntegrand& s, bool second_moment)
      : s_(s), second_(second_moment) {}

  int effective_tail() const {
    return s_.tail_exponent - (second_ ? 2 : 0);
  }

  double operator()(double theta) const {
    if (theta >= kHalfPi) return endpoint(+1.0);
    if (theta <= -kHalfPi) return endpoint(-1.0);
    const double t = std::tan(theta);
    const double omega = s_.scale * t;
    const double w = second_ ? omega * omega : 1.0;
    return s_.evaluator(omega) * w * s_.scale * (1.0 + t * t);
  }

 private:
  double endpoint(double sign) const {
    if (effective_tail() > 2) return 0.0;
    // tail exponent exactly 2: F tends to the finite limit f w omega^2/scale.
    const double omega = sign * s_.scale * 1e9;
    const double w = second_ ? omega * omega : 1.0;
    return s_.evaluator(omega) * w * (s_.scale * s_.scale + omega * omega) /
           s_.scale;
  }

  const SpectrumIntegrand& s_;
  bool second_;
};

struct Panel {
  double a, mid, b;
  double fa, flm, fm, frm, fb;
  double s_left, s_right;  // children Simpson values
  double refined;          // Richardson-extrapolated estimate
  double err;              // |S2 - S1| / 15

  bool operator<(const Panel& other) const { return err < other.err; }
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
Panel make_panel(const F& f, double a, double b, double fa, double fm,
                 double fb) {
  Panel p;
  p.a = a;
  p.mid = 0.5 * (a + b);
  p.b = b;
  p.fa = fa;
  p.fm = fm;
  p.fb = fb;
  p.flm = f(0.5 * (a + p.mid));
  p.frm = f(0.5 * (p.mid + b));
  p.s_left = simpson(a, p.mid, fa, p.flm, fm);
  p.s_right = simpson(p.mid, b, fm, p.frm, fb);
  const double s1 = simpson(a, b, fa, fm, fb);
  const double s2 = p.s_left + p.s_right;
  p.refined = s2 + (s2 - s1) / 15.0;
  p.err = std::abs(s2 - s1) / 15.0;
  return p;
}

template <typename F>
double adaptive_integral(const F& f, std::vector<double> nodes, double rel_tol,
                         long max_panels, double* err_out, long* panels_out,
                         bool* converged_out) {
  std::vector<Panel> heap;
  heap.reserve(nodes.size() * 2);

  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = f(nodes[i]);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double mid = 0.5 * (nodes[i] + nodes[i + 1]);
    heap.push_back(make_panel(f, nodes[i], nodes[i + 1], values[i], f(mid),
                              values[i + 1]));
  }
  std::make_heap(heap.begin(), heap.end());

  double total = 0.0, total_err = 0.0;
  for (const Panel& p : heap) {
    total += p.refined;
    total_err += p.err;
  }

  bool converged = total_err <= rel_tol * std::max(std::abs(total), 1e-300);
  while (!converged && static_cast<long>(heap.size()) < max_panels) {
    std::pop_heap(heap.begin(), heap.end());
    const Panel worst = heap.back();
    heap.pop_back();
    if (worst.b - worst.a < 1e-15) {
      // Cannot subdivide further in double precision; accept as-is.
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    total -= worst.refined;
    total_err -= worst.err;

    Panel left = make_panel(f, worst.a, worst.mid, worst.fa, worst.flm,
                            worst.fm);
    Panel right = make_panel(f, worst.mid, worst.b, worst.fm, worst.frm,
                             worst.fb);
    for (const Panel& child : {left, right}) {
      total += child.refined;
      total_err += child.err;
      heap.push_back(child);
      std::push_heap(heap.begin(), heap.end());
    }
    converged = total_err <= rel_tol * std::max(std::abs(total), 1e-300);
  }

  // Recompute the sums once, avoiding accumulated drift from the updates.
  total = 0.0;
  total_err = 0.0;
  for (const Panel& p : heap) {
    total += p.refined;
    total_err += p.err;
  }
  if (err_out) *err_out = 15.0 * total_err;  // conservative bound
  if (panels_out) *panels_out = static_cast<long>(heap.size());
  if (converged_out)
    *converged_out = total_err <= rel_tol * std::max(std::abs(total), 1e-300);
  return total;
}

std::vector<double> seed_nodes(const SpectrumIntegrand& s, bool even_half) {
  const double lo = even_half ? 0.0 : -kHalfPi;
  std::vector<double> nodes;
  const int base = even_half ? 33 : 65;
  for (int i = 0; i < base; ++i)
    nodes.push_back(lo + (kHalfPi - lo) * i / (base - 1));

  static constexpr double kSpread[] = {-50.0, -15.0, -5.0, -2.0, -1.0, 0.0,
                                       1.0,   2.0,   5.0,  15.0, 50.0};
  for (const SpectralFeature& feat : s.features) {
    for (double mult : kSpread) {
      double x = feat.center + mult * feat.width;
      if (even_half) x = std::abs(x);
      const double theta = std::atan(x / s.scale);
      if (theta > lo && theta < kHalfPi) nodes.push_back(theta);
      if (!even_half) {
        const double theta_neg = std::atan(-x / s.scale);
        if (theta_neg > lo && theta_neg < kHalfPi) nodes.push_back(theta_neg);
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end(),
                          [](double a, double b) { return b - a < 1e-12; }),
              nodes.end());
  if (nodes.back() < kHalfPi) nodes.push_back(kHalfPi);
  return nodes;
}

}  // namespace

Moments integrate_moments(const SpectrumIntegrand& s, double rel_tol,
                          long max_panels, bool want_m2) {
  if (!s.evaluator) throw std::invalid_argument("integrand has no evaluator");
  if (!(s.scale > 0.0)) throw std::invalid_argument("integrand scale must be positive");
  if (s.tail_exponent < 2)
    throw NumericalError("integrate_moments: m0 tail exponent < 2, divergent");
  if (want_m2 && s.tail_exponent < 4)
    throw NumericalError(
        "integrate_moments: m2 tail exponent < 2, divergent (momentum "
        "integral does not converge for this noise model)");

  const bool even = s.parity_hint == Parity::even;
  const double sym = even ? 2.0 : 1.0;
  const double inv_two_pi = 1.0 / (2.0 * kPi);
  const auto nodes = seed_nodes(s, even);

  Moments out;
  {
    Mapped f0(s, false);
    bool conv = false;
    long panels = 0;
    double err = 0.0;
    out.m0 = sym * inv_two_pi *
             adaptive_integral(f0, nodes, rel_tol, max_panels, &err, &panels,
                               &conv);
    out.err0 = sym * inv_two_pi * err;
    out.panels = panels;
    out.converged = conv;
  }
  if (want_m2) {
    Mapped f2(s, true);
    bool conv = false;
    long panels = 0;
    double err = 0.0;
    out.m2 = sym * inv_two_pi *
             adaptive_integral(f2, nodes, rel_tol, max_panels, &err, &panels,
                               &conv);
    out.err2 = sym * inv_two_pi * err;
    out.panels += panels;
    out.converged = out.converged && conv;
  }
  return out;
}

namespace {

// Residues over the upper half-plane for D = q qbar, evaluated from q's
// roots as difference products. Returns the integral or falls back to
// quadrature through the caller (signalled by nullopt) on near-degenerate
// roots.
std::optional<double> integrate_factored(const std::vector<double>& num,
                                         const std::vector<Complex>& half,
                                         double scale) {
  std::vector<Complex> half_z(half.size());
  std::vector<Complex> num_z(num.size());
  double pw = 1.0;
  for (std::size_t k = 0; k < std::max(half.size(), num.size()); ++k) {
    if (k < half.size()) half_z[k] = half[k] * pw;
    if (k < num.size()) num_z[k] = num[k] * pw;
    pw *= scale;
  }

  const auto roots = poly_roots(half_z);
  double max_root = 0.0;
  for (const auto& w : roots) max_root = std::max(max_root, std::abs(w));
  for (const auto& w : roots) {
    if (std::abs(w.imag()) <= 1e-12 * std::max(1.0, max_root))
      throw NumericalError("integrate_rational: pole on the real axis");
    if (w.imag() > 0.0)
      throw NumericalError(
          "integrate_rational: unstable characteristic factor");
  }
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-8 * std::max(1.0, max_root))
        return std::nullopt;

  const Complex lead = half_z.back();
  Complex sum{0.0, 0.0};
  for (std::size_t m = 0; m < roots.size(); ++m) {
    const Complex z = std::conj(roots[m]);  // upper-half pole of |q|^2
    Complex q_at_z = lead;
    for (const auto& w : roots) q_at_z *= z - w;
    Complex dq_at_w = lead;
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (j != m) dq_at_w *= roots[m] - roots[j];
    sum += poly_eval(num_z, z) / (q_at_z * std::conj(dq_at_w));
  }
  return scale * (Complex{0.0, 1.0} * sum).real();
}

}  // namespace

double integrate_rational(const RationalIntegrand& r, bool* used_quadrature) {
  if (used_quadrature) *used_quadrature = false;

  std::vector<double> num = r.numerator;
  std::vector<double> den = r.denominator;
  const auto trim = [](std::vector<double>& c) {
    double max_abs = 0.0;
    for (double v : c) max_abs = std::max(max_abs, std::abs(v));
    while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * max_abs) c.pop_back();
    return max_abs;
  };
  if (trim(num) == 0.0) return 0.0;
  if (trim(den) == 0.0)
    throw std::invalid_argument("integrate_rational: zero denominator");
  const long deficit =
      static_cast<long>(den.size()) - static_cast<long>(num.size());
  if (deficit < 2)
    throw std::invalid_argument(
        "integrate_rational: degree deficit < 2, integral diverges");

  // Rescale the variable so root finding and residue evaluation stay O(1).
  const auto variable_scale = [](std::size_t degree, auto magnitude_at) {
    double scale = 0.0;
    for (std::size_t k = 0; k < degree; ++k) {
      const double a = magnitude_at(k);
      if (a > 0.0)
        scale =
            std::max(scale, std::pow(a, 1.0 / static_cast<double>(degree - k)));
    }
    return scale;
  };

  const auto quadrature_fallback = [&](double scale,
                                       const std::vector<Complex>& poles) {
    if (used_quadrature) *used_quadrature = true;
    SpectrumIntegrand s;
    const std::vector<double> num_c = num;
    if (!r.denominator_half.empty()) {
      const std::vector<Complex> half = r.denominator_half;
      s.evaluator = [num_c, half](double x) {
        return poly_eval(std::span<const double>(num_c), x) /
               std::norm(poly_eval(std::span<const Complex>(half),
                                   Complex{x, 0.0}));
      };
    } else {
      const std::vector<double> den_c = den;
      s.evaluator = [num_c, den_c](double x) {
        return poly_eval(std::span<const double>(num_c), x) /
               poly_eval(std::span<const double>(den_c), x);
      };
    }
    s.parity_hint = Parity::none;
    s.tail_exponent = static_cast<int>(deficit);
    s.scale = scale;
    for (const auto& z : poles)
      s.features.push_back(
          {z.real() * scale, std::max(std::abs(z.imag()) * scale, 1e-12)});
    return integrate_moments(s, 1e-10, 1L << 20, false).m0;
  };

  if (!r.denominator_half.empty()) {
    const auto& half = r.denominator_half;
    if (2 * (half.size() - 1) + 1 < num.size() + 2)
      throw std::invalid_argument(
          "integrate_rational: |denominator_half|^2 degree deficit < 2");
    const std::size_t nh = half.size() - 1;
    const double scale = variable_scale(nh, [&](std::size_t k) {
      return std::abs(half[k] / half.back());
    });
    if (scale == 0.0)
      throw std::invalid_argument("integrate_rational: denominator ~ x^n");
    if (const auto value = integrate_factored(num, half, scale)) return *value;
    std::vector<Complex> half_z(half.size());
    double pw = 1.0;
    for (std::size_t k = 0; k < half.size(); ++k) {
      half_z[k] = half[k] * pw;
      pw *= scale;
    }
    return quadrature_fallback(scale, poly_roots(half_z));
  }

  const std::size_t n = den.size() - 1;
  const double scale = variable_scale(
      n, [&](std::size_t k) { return std::abs(den[k] / den.back()); });
  if (scale == 0.0)
    throw std::invalid_argument("integrate_rational: denominator ~ x^n");

  std::vector<Complex> num_z(num.size()), den_z(den.size());
  double pw = 1.0;
  for (std::size_t k = 0; k < std::max(num.size(), den.size()); ++k) {
    if (k < num.size()) num_z[k] = num[k] * pw;
    if (k < den.size()) den_z[k] = den[k] * pw;
    pw *= scale;
  }
  double norm = 0.0;
  for (const auto& c : den_z) norm = std::max(norm, std::abs(c));
  for (auto& c : num_z) c /= norm;
  for (auto& c : den_z) c /= norm;

  const auto roots = poly_roots(den_z);
  double max_root = 0.0;
  for (const auto& z : roots) max_root = std::max(max_root, std::abs(z));
  for (const auto& z : roots)
    if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, max_root))
      throw NumericalError("integrate_rational: pole on the real axis");

  bool degenerate = false;
  for (std::size_t i = 0; i < roots.size() && !degenerate; ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-8 * std::max(1.0, max_root)) {
        degenerate = true;
        break;
      }
  if (degenerate) return quadrature_fallback(scale, roots);

  const auto dden = poly_derivative(den_z);
  Complex sum{0.0, 0.0};
  for (const auto& z : roots) {
    if (z.imag() <= 0.0) continue;
    sum += poly_eval(num_z, z) / poly_eval(dden, z);
  }
  return scale * (Complex{0.0, 1.0} * sum).real();
}

StabilityReport pole_stability(
    const std::vector<std::complex<double>>& char_poly_omega) {
  StabilityReport rep;
  rep.poles = poly_roots(char_poly_omega);
  rep.stable = true;
  for (const auto& w : rep.poles)
    if (!(w.imag() < 0.0)) rep.stable = false;
  rep.margin = pole_margin(rep.poles);
  rep.marginal = std::abs(rep.margin) < StabilityReport::marginal_threshold;
  return rep;
}

Covariance lyapunov_covariance(const LinearStateModel& m) {
  Eigen::Matrix4d drift;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) drift(i, j) = m.drift[i][j];

  double nrm = drift.cwiseAbs().maxCoeff();
  if (nrm == 0.0) throw UnstableModelError("lyapunov: zero drift");
  const Eigen::Matrix4d a = drift / nrm;

  const Eigen::EigenSolver<Eigen::Matrix4d> es(a, false);
  for (int i = 0; i < 4; ++i)
    if (!(es.eigenvalues()(i).real() < 0.0))
      throw UnstableModelError(
          "lyapunov: drift is not Hurwitz stable, no steady state");

  // V symmetric: solve the 10-unknown vectorized system
  // sum_k A(i,k) V(k,j) + A(j,k) V(i,k) = -D(i,j) for i <= j.
  int idx[4][4];
  int count = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      idx[i][j] = count;
      idx[j][i] = count;
      ++count;
    }

  Eigen::Matrix<double, 10, 10> mat = Eigen::Matrix<double, 10, 10>::Zero();
  Eigen::Matrix<double, 10, 1> rhs = Eigen::Matrix<double, 10, 1>::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const int eq = idx[i][j];
      for (int k = 0; k < 4; ++k) {
        mat(eq, idx[k][j]) += a(i, k);
        mat(eq, idx[i][k]) += a(j, k);
      }
      if (i == j) rhs(eq) = -m.diffusion_diag[i] / nrm;
    }

  const Eigen::Matrix<double, 10, 1> sol =
      mat.colPivHouseholderQr().solve(rhs);
  Covariance v{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) v[i][j] = sol(idx[i][j]);
  return v;
}

}  // namespace optocool::oracles

namespace optocool {

double pole_margin(const std::vector<std::complex<double>>& poles) {
  if (poles.empty()) return 0.0;
  double ref = 0.0;
  for (const auto& w : poles) ref = std::max(ref, std::abs(w));
  if (ref == 0.0) return 0.0;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& w : poles) margin = std::min(margin, -w.imag() / ref);
  return margin;
}

}  // namespace optocool
