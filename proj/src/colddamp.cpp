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

#include "optocool/colddamp.hpp"

#include <cmath>
#include <stdexcept>

#include "optocool/errors.hpp"
#include "optocool/polynomial.hpp"

namespace optocool::colddamp {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

// Scaled by omega_m; the printed expressions are rate-homogeneous.
struct Scaled {
  double gamma, kappa, fb, g, gcd, eta, nbar;
  explicit Scaled(const Model& m)
      : gamma(m.gamma_m / m.omega_m),
        kappa(m.kappa / m.omega_m),
        fb(m.feedback_bandwidth / m.omega_m),
        g(m.coupling / m.omega_m),
        gcd(m.feedback_gain),
        eta(m.efficiency),
        nbar(m.n_thermal) {}
};

// s_cd cancels many digits near (and not so near) the gain ceiling, and the
// closed-form variances divide by it, so the assembly is offered in long
// double as well.
template <typename Real>
struct HurwitzT {
  Real s_cd, scale;
};

template <typename Real>
HurwitzT<Real> hurwitz_value(Real gamma, Real kappa, Real fb, Real drive_fb) {
  const Real f1 = gamma * kappa * fb + drive_fb + (kappa + fb);
  const Real f2 =
      (kappa + gamma) * (kappa + fb) * (gamma + fb) + gamma - drive_fb;
  const Real f3 =
      kappa * fb * (kappa + gamma + fb) * (kappa + gamma + fb);
  HurwitzT<Real> h;
  h.s_cd = f1 * f2 - f3;
  h.scale = std::abs(f1 * f2) + f3;
  return h;
}

HurwitzT<double> hurwitz_value(const Scaled& p) {
  return hurwitz_value<double>(p.gamma, p.kappa, p.fb, p.gcd * p.g * p.fb);
}

// A_cd .. D_cd of the closed-form variances, scaled.
template <typename Real>
struct VarCoeffsT {
  Real a, b, c, d;
};

template <typename Real>
VarCoeffsT<Real> variance_coeffs(Real g, Real k, Real f, Real drive) {
  VarCoeffsT<Real> v;
  v.a = k + f * (1 + g * k + drive);
  v.b = k * k * (g + k + f);
  // The -drive*f term is required for consistency with the spectrum
  // integral (checked against the residue and quadrature engines); without
  // it the position variance is off by O(g_cd G omega_fb^2 kappa / s_cd).
  v.c = f * k *
        (f * f * (k + g) + f * (k + g) * (k + g) + g * (1 + k * k + k * g) -
         drive * f);
  v.d = f * f * (g * (1 + k * k + k * g) + (k + g) * drive) +
        f * (1 + k * g) * (1 + k * g + drive) + k * (1 + g * k);
  return v;
}

std::vector<std::complex<double>> char_poly_scaled(const Scaled& p) {
  const std::vector<Complex> mech = {Complex{1.0, 0.0},
                                     Complex{0.0, -p.gamma},
                                     Complex{-1.0, 0.0}};
  const std::vector<Complex> cav = {Complex{p.kappa, 0.0}, Complex{0.0, -1.0}};
  const std::vector<Complex> filt = {Complex{p.fb, 0.0}, Complex{0.0, -1.0}};
  auto poly = poly_multiply(poly_multiply(mech, cav), filt);
  poly[1] += Complex{0.0, -p.gcd * p.fb * p.g};
  return poly;
}

void require_flat(const Model& m, const char* what) {
  if (m.thermal_model != ThermalModel::flat)
    throw std::invalid_argument(std::string(what) +
                                " requires the flat thermal model");
}

void require_stable(const Model& m) {
  if (!(hurwitz_value(Scaled(m)).s_cd > 0.0))
    throw UnstableModelError(
        "cold-damping model is unstable; no steady state exists");
}

constexpr long double kHalf = 0.5L;

CoolingResult make_result(double var_q, double var_p, double omega_m,
                          Method method) {
  CoolingResult r;
  r.var_q = var_q;
  r.var_p = var_p;
  r.n_eff = 0.5 * (var_q + var_p) - 0.5;
  r.t_eff = r.n_eff > 0.0 ? occupancy_to_temperature(r.n_eff, omega_m) : 0.0;
  r.equipartition_gap = var_q - var_p;
  r.method = method;
  return r;
}

}  // namespace

void Model::validate() const {
  if (!(omega_m > 0.0)) throw std::invalid_argument("omega_m must be positive");
  if (!(gamma_m > 0.0)) throw std::invalid_argument("gamma_m must be positive");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(coupling >= 0.0)) throw std::invalid_argument("coupling must be >= 0");
  if (!(n_thermal >= 0.0))
    throw std::invalid_argument("n_thermal must be >= 0");
  if (!(feedback_gain >= 0.0))
    throw std::invalid_argument("feedback_gain must be >= 0");
  if (!(feedback_bandwidth > 0.0))
    throw std::invalid_argument(
        "feedback_bandwidth must be positive for the cold-damping scheme");
  if (!(efficiency > 0.0 && efficiency <= 1.0))
    throw std::invalid_argument("efficiency must be in (0, 1]");
}

Model from_config(const PhysicalConfig& cfg, const DerivedParams& dp) {
  Model m;
  m.omega_m = cfg.mech_freq;
  m.gamma_m = cfg.mech_damping;
  m.kappa = cfg.cavity_decay;
  m.coupling = dp.effective_coupling;
  m.n_thermal = dp.thermal_occupancy;
  m.feedback_gain = cfg.feedback_gain;
  m.feedback_bandwidth = cfg.feedback_bandwidth;
  m.efficiency = cfg.detection_efficiency;
  m.thermal_model = cfg.thermal_model;
  return m;
}

std::complex<double> feedback_transfer(double omega, const FeedbackFilter& f) {
  if (!(f.bandwidth > 0.0))
    throw std::invalid_argument("feedback bandwidth must be positive");
  return -kImag * omega * f.gain / (1.0 - kImag * omega / f.bandwidth);
}

double feedback_noise_spectrum(double omega, const Model& m) {
  m.validate();
  const std::complex<double> g =
      feedback_transfer(omega, {m.feedback_gain, m.feedback_bandwidth});
  return std::norm(g) / (4.0 * m.kappa * m.efficiency);
}

Spectra noise_spectra(double omega, const Model& m) {
  m.validate();
  Spectra out;
  if (m.thermal_model == ThermalModel::flat) {
    out.thermal = m.gamma_m * (2.0 * m.n_thermal + 1.0);
  } else if (m.n_thermal <= 0.0) {
    out.thermal = m.gamma_m * std::abs(omega) / m.omega_m;
  } else {
    const double x_m = std::log1p(1.0 / m.n_thermal);
    const double x = 0.5 * (omega / m.omega_m) * x_m;
    out.thermal =
        std::abs(x) < 1e-6
            ? m.gamma_m * (2.0 / x_m + (omega / m.omega_m) * x / 3.0)
            : m.gamma_m * (omega / m.omega_m) / std::tanh(x);
  }
  // S_rp at Delta = 0 collapses to a single Lorentzian.
  out.radiation_pressure = m.coupling * m.coupling * m.kappa /
                           (m.kappa * m.kappa + omega * omega);
  out.feedback = feedback_noise_spectrum(omega, m);
  return out;
}

std::complex<double> susceptibility(double omega, const Model& m) {
  m.validate();
  const std::complex<double> g =
      feedback_transfer(omega, {m.feedback_gain, m.feedback_bandwidth});
  const std::complex<double> denom =
      m.omega_m * m.omega_m - omega * omega - kImag * omega * m.gamma_m +
      g * m.coupling * m.omega_m / (m.kappa - kImag * omega);
  const double mag_scale =
      m.omega_m * m.omega_m + omega * omega +
      std::abs(g * m.coupling * m.omega_m / (m.kappa - kImag * omega));
  if (std::abs(denom) < 1e-13 * mag_scale)
    throw NumericalError("cold-damping susceptibility pole on the real axis");
  return m.omega_m / denom;
}

EffectiveOscillator effective_oscillator(double omega, const Model& m) {
  m.validate();
  const double denom = (m.kappa * m.kappa + omega * omega) *
                       (m.feedback_bandwidth * m.feedback_bandwidth +
                        omega * omega);
  const double drive = m.feedback_gain * m.coupling * m.omega_m *
                       m.feedback_bandwidth;
  EffectiveOscillator out;
  // The correction is nonnegative for g_cd >= 0, so the frequency is real.
  out.frequency = std::sqrt(m.omega_m * m.omega_m +
                            drive * omega * omega *
                                (m.kappa + m.feedback_bandwidth) / denom);
  out.damping = m.gamma_m + drive *
                                (m.kappa * m.feedback_bandwidth -
                                 omega * omega) /
                                denom;
  out.restoring = true;
  return out;
}

StabilityReport stability(const Model& m) {
  m.validate();
  const Scaled p(m);
  const HurwitzT<double> h = hurwitz_value(p);

  StabilityReport rep;
  rep.s_values.push_back(
      {"s_cd", h.s_cd, h.scale > 0.0 ? h.s_cd / h.scale : 0.0});
  rep.stable = h.s_cd > 0.0;
  rep.margin = rep.s_values[0].margin;
  rep.marginal = std::abs(rep.margin) < StabilityReport::marginal_threshold;

  for (const Complex& root : poly_roots(char_poly_scaled(p)))
    rep.poles.push_back(root * m.omega_m);
  return rep;
}

GainBound max_gain(const Model& m) {
  m.validate();
  const Scaled p(m);
  const double k = p.kappa, f = p.fb, g = p.gamma;
  GainBound out;
  out.eps0 = 0.5 * ((f / g) * (1.0 + g / k) + k / g + g / k + 1.0 -
                    1.0 / (k * g) + 1.0 / (k * f) + (g + k) / f -
                    1.0 / (g * f));
  out.eps_r_sq = (1.0 + k * k + g * k) / (f * f * k * k * g) *
                 (f * f * f + f * f * (k + g) + f * (1.0 + g * k) + k);
  out.g2_max = out.eps0 + std::sqrt(out.eps0 * out.eps0 + out.eps_r_sq);
  return out;
}

CoolingResult exact_variances(const Model& m) {
  m.validate();
  require_flat(m, "exact_variances");
  require_stable(m);

  using Real = long double;
  const Scaled ps(m);
  const Real gamma = ps.gamma, k = ps.kappa, f = ps.fb, g = ps.g;
  const Real gcd = ps.gcd, eta = ps.eta, nbar = ps.nbar;
  const Real drive = gcd * g;
  const HurwitzT<Real> h = hurwitz_value<Real>(gamma, k, f, drive * f);
  const VarCoeffsT<Real> v = variance_coeffs<Real>(gamma, k, f, drive);

  const Real thermal = gamma * (nbar + kHalf);
  const Real fb_noise = gcd * gcd * f * f / (8 * k * eta);
  const Real rp_noise = g * g / (2 * k);

  const Real var_q = (thermal * (v.a + (1 + f * f / (k * k)) * v.b + v.c) +
                      fb_noise * (v.a + v.b) + rp_noise * (v.b + v.c)) /
                     h.s_cd;
  const Real var_p = (thermal * ((k * k + f * f) * v.a + f * f * v.b + v.d) +
                      fb_noise * (k * k * v.a + v.d) +
                      rp_noise * (k * k * v.a + f * f * v.b)) /
                     h.s_cd;
  return make_result(static_cast<double>(var_q), static_cast<double>(var_p),
                     m.omega_m, Method::closed_form);
}

CoolingResult variances(const Model& m, Method method) {
  m.validate();
  require_stable(m);
  switch (method) {
    case Method::closed_form:
      return exact_variances(m);
    case Method::quadrature: {
      // Under the coth model the momentum moment has a divergent tail and
      // integrate_moments reports the numerical failure.
      const auto mom = oracles::integrate_moments(variance_integrand(m));
      if (!mom.converged)
        throw NumericalError("variance quadrature did not converge");
      return make_result(mom.m0, mom.m2, m.omega_m, Method::quadrature);
    }
    case Method::residue: {
      require_flat(m, "variances(residue)");
      const double var_q = oracles::integrate_rational(rational_q_integrand(m));
      const double var_p = oracles::integrate_rational(rational_p_integrand(m));
      return make_result(var_q, var_p, m.omega_m, Method::residue);
    }
    case Method::lyapunov:
      throw std::invalid_argument(
          "lyapunov route is not available for the feedback loop (direct "
          "measurement-noise feedthrough); use quadrature or residue");
  }
  throw std::invalid_argument("unknown variance method");
}

LimitVariances limit_variances(const Model& m, Regime regime) {
  m.validate();
  const Scaled p(m);
  const double g2 = scaled_gain(m);
  const double zeta = scaled_power(m);
  const double np = p.nbar + 0.5;
  // g2^2 / (4 eta zeta) with the couplings cancelled, finite at G = 0.
  const double fb_noise =
      p.gcd * p.gcd / (8.0 * p.eta * p.kappa * p.gamma);

  LimitVariances out;
  if (regime == Regime::instantaneous) {
    const double lag = 1.0 + g2 * p.gamma / p.kappa;
    out.var_q = (np + 0.25 * zeta + fb_noise * lag) / (1.0 + g2);
    out.var_p =
        (np * lag + 0.25 * zeta) / (1.0 + g2) + fb_noise * p.fb * p.gamma;
    if (!(p.fb >= 3.0 * p.kappa && p.kappa >= 3.0 &&
          p.kappa >= 3.0 * p.gamma)) {
      out.regime_ok = false;
      out.note = "instantaneous regime wants omega_fb >> kappa >> omega_m, gamma_m";
    }
  } else {
    const double f = p.fb;
    out.var_q = (fb_noise + (np + 0.25 * zeta) * (1.0 + 1.0 / (f * f))) /
                (1.0 + g2 + f * f);
    out.var_p = (fb_noise * (1.0 + g2 * p.gamma * f) +
                 (np + 0.25 * zeta) *
                     (1.0 + 1.0 / (f * f) + g2 * p.gamma / f)) /
                (1.0 + g2 + 1.0 / (f * f));
    if (!(p.kappa >= 3.0 * f && f >= 1.0 / 3.0 && f <= 3.0 &&
          p.gamma <= 1.0 / 3.0)) {
      out.regime_ok = false;
      out.note =
          "finite-bandwidth regime wants kappa >> omega_fb ~ omega_m >> gamma_m";
    }
  }
  return out;
}

double estimated_quadrature_gain(const Model& m) {
  m.validate();
  return 1.0 / std::sqrt(2.0 * m.efficiency * m.kappa);
}

double vacuum_noise_weight(double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("eta must be in (0, 1]");
  return std::sqrt(1.0 / eta - 1.0);
}

double scaled_gain(const Model& m) {
  return m.feedback_gain * m.coupling * m.omega_m / (m.kappa * m.gamma_m);
}

double scaled_power(const Model& m) {
  return 2.0 * m.coupling * m.coupling / (m.kappa * m.gamma_m);
}

double position_spectrum(double omega, const Model& m) {
  const Spectra n = noise_spectra(omega, m);
  const std::complex<double> chi = susceptibility(omega, m);
  return std::norm(chi) * (n.thermal + n.radiation_pressure + n.feedback);
}

std::vector<std::complex<double>> characteristic_polynomial(const Model& m) {
  m.validate();
  return char_poly_scaled(Scaled(m));
}

oracles::SpectrumIntegrand variance_integrand(const Model& m) {
  m.validate();
  const Scaled p(m);
  oracles::SpectrumIntegrand s;
  const Model model = m;
  s.evaluator = [model](double x) {
    return model.omega_m * position_spectrum(model.omega_m * x, model);
  };
  s.parity_hint = oracles::Parity::even;
  s.tail_exponent = m.thermal_model == ThermalModel::flat ? 4 : 3;
  s.scale = std::max({1.0, p.kappa, p.fb});
  for (const Complex& root : poly_roots(char_poly_scaled(p)))
    s.features.push_back({root.real(), std::max(std::abs(root.imag()), 1e-12)});
  s.features.push_back({0.0, p.kappa});
  s.features.push_back({0.0, p.fb});
  return s;
}

namespace {

oracles::RationalIntegrand rational_parts(const Model& m) {
  const Scaled p(m);
  const double k2 = p.kappa * p.kappa;
  const double f2 = p.fb * p.fb;
  const double th = p.gamma * (2.0 * p.nbar + 1.0);
  const double rp = p.g * p.g * p.kappa;
  const double fb = p.gcd * p.gcd * f2 / (4.0 * p.kappa * p.eta);
  // th (k^2 + x^2)(f^2 + x^2) + rp (f^2 + x^2) + fb x^2 (k^2 + x^2)
  oracles::RationalIntegrand r;
  r.numerator = {th * k2 * f2 + rp * f2, 0.0,
                 th * (k2 + f2) + rp + fb * k2, 0.0, th + fb};
  r.denominator_half = char_poly_scaled(p);
  r.denominator = poly_real_coeffs(
      poly_multiply(r.denominator_half, poly_conjugate(r.denominator_half)));
  return r;
}

}  // namespace

oracles::RationalIntegrand rational_q_integrand(const Model& m) {
  m.validate();
  require_flat(m, "rational_q_integrand");
  return rational_parts(m);
}

oracles::RationalIntegrand rational_p_integrand(const Model& m) {
  m.validate();
  require_flat(m, "rational_p_integrand");
  oracles::RationalIntegrand r = rational_parts(m);
  std::vector<double> shifted(r.numerator.size() + 2, 0.0);
  for (std::size_t i = 0; i < r.numerator.size(); ++i)
    shifted[i + 2] = r.numerator[i];
  r.numerator = std::move(shifted);
  return r;
}

}  // namespace optocool::colddamp
