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

#include "optocool/backaction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "optocool/errors.hpp"
#include "optocool/polynomial.hpp"

namespace optocool::backaction {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

// Everything is evaluated in units of omega_m; the printed expressions are
// homogeneous in the rates, so the scaled values equal the SI ones.
struct Scaled {
  double gamma, kappa, delta, g, nbar;
  explicit Scaled(const Model& m)
      : gamma(m.gamma_m / m.omega_m),
        kappa(m.kappa / m.omega_m),
        delta(m.detuning / m.omega_m),
        g(m.coupling / m.omega_m),
        nbar(m.n_thermal) {}
};

// [kappa^2 + (x - delta)^2][kappa^2 + (x + delta)^2]
double sideband_product(double kappa, double delta, double x) {
  const double lo = kappa * kappa + (x - delta) * (x - delta);
  const double hi = kappa * kappa + (x + delta) * (x + delta);
  return lo * hi;
}

// The Routh-Hurwitz values live close to large cancellations near the
// stability boundary; the closed-form variances divide by them, so the
// assembly is offered in long double as well.
template <typename Real>
struct HurwitzT {
  Real s1, s2, scale1, scale2;
};

template <typename Real>
HurwitzT<Real> hurwitz_values(Real gamma, Real kappa, Real delta, Real g) {
  const Real one{1};
  const Real k2d2 = kappa * kappa + delta * delta;
  const Real lo = kappa * kappa + (one - delta) * (one - delta);
  const Real hi = kappa * kappa + (one + delta) * (one + delta);
  const Real brace =
      lo * hi + gamma * ((gamma + 2 * kappa) * k2d2 + 2 * kappa);
  const Real gk = gamma + 2 * kappa;
  HurwitzT<Real> h;
  h.s1 = 2 * gamma * kappa * brace + delta * g * g * gk * gk;
  h.scale1 = 2 * gamma * kappa * brace + std::abs(delta) * g * g * gk * gk;
  h.s2 = k2d2 - g * g * delta;
  h.scale2 = k2d2 + g * g * std::abs(delta);
  return h;
}

HurwitzT<double> hurwitz_values(const Scaled& p) {
  return hurwitz_values<double>(p.gamma, p.kappa, p.delta, p.g);
}

std::vector<std::complex<double>> char_poly_scaled(const Scaled& p) {
  const std::vector<Complex> mech = {Complex{1.0, 0.0},
                                     Complex{0.0, -p.gamma},
                                     Complex{-1.0, 0.0}};
  const std::vector<Complex> cav = {
      Complex{p.kappa * p.kappa + p.delta * p.delta, 0.0},
      Complex{0.0, -2.0 * p.kappa}, Complex{-1.0, 0.0}};
  auto poly = poly_multiply(mech, cav);
  poly[0] -= p.g * p.g * p.delta;
  return poly;
}

void require_flat(const Model& m, const char* what) {
  if (m.thermal_model != ThermalModel::flat)
    throw std::invalid_argument(std::string(what) +
                                " requires the flat thermal model");
}

void require_stable(const Model& m) {
  const HurwitzT<double> h = hurwitz_values(Scaled(m));
  if (!(h.s1 > 0.0 && h.s2 > 0.0))
    throw UnstableModelError(
        "backaction model is unstable; no steady state exists");
}

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
  if (!std::isfinite(detuning))
    throw std::invalid_argument("detuning must be finite");
}

Model from_config(const PhysicalConfig& cfg, const DerivedParams& dp) {
  Model m;
  m.omega_m = cfg.mech_freq;
  m.gamma_m = cfg.mech_damping;
  m.kappa = cfg.cavity_decay;
  m.detuning = cfg.detuning;
  m.coupling = dp.effective_coupling;
  m.n_thermal = dp.thermal_occupancy;
  m.thermal_model = cfg.thermal_model;
  return m;
}

NoiseSpectra noise_spectra(double omega, const Model& m) {
  m.validate();
  NoiseSpectra out;
  if (m.thermal_model == ThermalModel::flat) {
    out.thermal = m.gamma_m * (2.0 * m.n_thermal + 1.0);
  } else if (m.n_thermal <= 0.0) {
    // T = 0: coth -> sign(omega).
    out.thermal = m.gamma_m * std::abs(omega) / m.omega_m;
  } else {
    // hbar omega / 2 kB T expressed through nbar at omega_m.
    const double x_m = std::log1p(1.0 / m.n_thermal);
    const double x = 0.5 * (omega / m.omega_m) * x_m;
    out.thermal =
        std::abs(x) < 1e-6
            ? m.gamma_m * (2.0 / x_m + (omega / m.omega_m) * x / 3.0)
            : m.gamma_m * (omega / m.omega_m) / std::tanh(x);
  }
  out.radiation_pressure =
      m.coupling * m.coupling * m.kappa *
      (m.detuning * m.detuning + m.kappa * m.kappa + omega * omega) /
      sideband_product(m.kappa, m.detuning, omega);
  return out;
}

std::complex<double> susceptibility(double omega, const Model& m) {
  m.validate();
  const std::complex<double> cav =
      (m.kappa - kImag * omega) * (m.kappa - kImag * omega) +
      m.detuning * m.detuning;
  const std::complex<double> denom =
      m.omega_m * m.omega_m - omega * omega - kImag * omega * m.gamma_m -
      m.coupling * m.coupling * m.detuning * m.omega_m / cav;
  const double mag_scale = m.omega_m * m.omega_m + omega * omega +
                           std::abs(m.coupling * m.coupling * m.detuning *
                                    m.omega_m / cav);
  if (std::abs(denom) < 1e-13 * mag_scale)
    throw NumericalError("susceptibility pole on the real axis");
  return m.omega_m / denom;
}

EffectiveOscillator effective_oscillator(double omega, const Model& m) {
  m.validate();
  const double prod = sideband_product(m.kappa, m.detuning, omega);
  const double g2d = m.coupling * m.coupling * m.detuning * m.omega_m;
  EffectiveOscillator out;
  const double freq_sq =
      m.omega_m * m.omega_m -
      g2d * (m.kappa * m.kappa - omega * omega + m.detuning * m.detuning) /
          prod;
  out.restoring = freq_sq >= 0.0;
  out.frequency = out.restoring ? std::sqrt(freq_sq)
                                : std::numeric_limits<double>::quiet_NaN();
  out.damping = m.gamma_m + 2.0 * g2d * m.kappa / prod;
  return out;
}

StabilityReport stability(const Model& m) {
  m.validate();
  const Scaled p(m);
  const HurwitzT<double> h = hurwitz_values(p);

  StabilityReport rep;
  rep.s_values.push_back({"s1", h.s1, h.scale1 > 0.0 ? h.s1 / h.scale1 : 0.0});
  rep.s_values.push_back({"s2", h.s2, h.scale2 > 0.0 ? h.s2 / h.scale2 : 0.0});
  rep.stable = h.s1 > 0.0 && h.s2 > 0.0;
  rep.margin = std::min(rep.s_values[0].margin, rep.s_values[1].margin);
  rep.marginal = std::abs(rep.margin) < StabilityReport::marginal_threshold;

  for (const Complex& root : poly_roots(char_poly_scaled(p)))
    rep.poles.push_back(root * m.omega_m);
  return rep;
}

CoolingResult exact_variances(const Model& m) {
  m.validate();
  require_flat(m, "exact_variances");
  require_stable(m);

  // Long double: the division by s1 s2 amplifies their cancellation near the
  // stability boundary beyond the 1e-12 consistency budget in double.
  using Real = long double;
  const Scaled ps(m);
  const Real gamma = ps.gamma, kappa = ps.kappa, delta = ps.delta, g = ps.g;
  const Real nbar = ps.nbar;
  const Real g2 = g * g;
  const Real k2d2 = kappa * kappa + delta * delta;
  const Real gk = gamma + 2 * kappa;
  const HurwitzT<Real> h = hurwitz_values<Real>(gamma, kappa, delta, g);

  const Real b_p = g2 * kappa *
                   (delta * delta * (gamma + kappa) +
                    kappa * (gamma * kappa + kappa * kappa + 1) -
                    delta * gk) /
                   h.s1;
  const Real d_p = 1 - 2 * g2 * kappa * delta * gk / h.s1;

  const Real gpk = gamma + kappa;
  const Real b_q =
      g2 *
      (2 * kappa * k2d2 *
           ((delta * delta + gpk * gpk) * (kappa + gamma * delta) +
            gpk * (1 - 2 * delta)) +
       delta * g2 * gk * (delta * gamma - kappa * (1 - 2 * delta))) /
      (2 * h.s1 * h.s2);
  const Real d_q =
      1 + delta * g2 *
              (h.s1 -
               2 * gamma * kappa *
                   (1 + 2 * gamma * kappa + 4 * kappa * kappa) -
               4 * kappa * kappa * k2d2) /
              (h.s1 * h.s2);

  const double var_q = static_cast<double>(Real(0.5) + b_q + d_q * nbar);
  const double var_p = static_cast<double>(Real(0.5) + b_p + d_p * nbar);
  return make_result(var_q, var_p, m.omega_m, Method::closed_form);
}

CoolingResult variances(const Model& m, Method method) {
  m.validate();
  require_stable(m);
  switch (method) {
    case Method::closed_form:
      return exact_variances(m);
    case Method::quadrature: {
      // Works for both thermal models in principle; under the coth model
      // the momentum moment has a divergent tail and integrate_moments
      // reports the numerical failure.
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
    case Method::lyapunov: {
      require_flat(m, "variances(lyapunov)");
      const auto cov = oracles::lyapunov_covariance(state_model(m));
      return make_result(cov[0][0], cov[1][1], m.omega_m, Method::lyapunov);
    }
  }
  throw std::invalid_argument("unknown variance method");
}

double variance_q_quadrature(const Model& m) {
  m.validate();
  require_stable(m);
  const auto mom =
      oracles::integrate_moments(variance_integrand(m), 1e-9, 1L << 20,
                                 /*want_m2=*/false);
  if (!mom.converged)
    throw NumericalError("position-variance quadrature did not converge");
  return mom.m0;
}

ScatteringRates scattering_rates(const Model& m) {
  m.validate();
  const double g2k = 0.5 * m.coupling * m.coupling * m.kappa;
  ScatteringRates out;
  out.a_plus = g2k / (m.kappa * m.kappa +
                      (m.detuning + m.omega_m) * (m.detuning + m.omega_m));
  out.a_minus = g2k / (m.kappa * m.kappa +
                       (m.detuning - m.omega_m) * (m.detuning - m.omega_m));
  out.gamma_cool = out.a_minus - out.a_plus;
  return out;
}

PerturbativeResult perturbative_limits(const Model& m) {
  m.validate();
  const ScatteringRates rates = scattering_rates(m);
  const double k2d2 = m.kappa * m.kappa + m.detuning * m.detuning;
  const double eta_delta =
      1.0 - m.coupling * m.coupling * m.detuning / (m.omega_m * k2d2);
  if (!(eta_delta > 0.0))
    throw std::domain_error(
        "perturbative_limits: eta_Delta <= 0 (beyond the s2 boundary)");

  const double gamma_tot = m.gamma_m + rates.gamma_cool;
  const double half_sum = 0.5 * (rates.a_plus + rates.a_minus);
  const double a =
      (k2d2 + eta_delta * m.omega_m * m.omega_m) /
      (eta_delta * (k2d2 + m.omega_m * m.omega_m));
  const double b =
      (2.0 * (m.detuning * m.detuning - m.kappa * m.kappa) -
       m.omega_m * m.omega_m) /
      k2d2;

  PerturbativeResult out;
  out.var_p = (half_sum + m.gamma_m * m.n_thermal *
                              (1.0 + rates.gamma_cool / (2.0 * m.kappa))) /
              gamma_tot;
  out.var_q = (a * half_sum +
               (m.gamma_m * m.n_thermal / eta_delta) *
                   (1.0 + rates.gamma_cool * b / (2.0 * m.kappa))) /
              gamma_tot;
  out.n_eff = (m.gamma_m * m.n_thermal + rates.a_plus) / gamma_tot;

  if (m.gamma_m * m.n_thermal >= rates.gamma_cool) {
    out.regime_ok = false;
    out.note = "gamma_m nbar >= Gamma";
  }
  if (m.coupling >= m.kappa) {
    out.regime_ok = false;
    out.note += out.note.empty() ? "G >= kappa" : "; G >= kappa";
  }
  return out;
}

double position_spectrum(double omega, const Model& m) {
  const NoiseSpectra n = noise_spectra(omega, m);
  const std::complex<double> chi = susceptibility(omega, m);
  return std::norm(chi) * (n.thermal + n.radiation_pressure);
}

std::vector<std::complex<double>> characteristic_polynomial(const Model& m) {
  m.validate();
  return char_poly_scaled(Scaled(m));
}

oracles::SpectrumIntegrand variance_integrand(const Model& m) {
  m.validate();
  const Scaled p(m);
  oracles::SpectrumIntegrand s;
  const Model model = m;  // value copy for the closure
  s.evaluator = [model](double x) {
    return model.omega_m * position_spectrum(model.omega_m * x, model);
  };
  s.parity_hint = oracles::Parity::even;
  s.tail_exponent = m.thermal_model == ThermalModel::flat ? 4 : 3;
  s.scale = std::max({1.0, p.kappa, std::abs(p.delta)});
  for (const Complex& root : poly_roots(char_poly_scaled(p)))
    s.features.push_back({root.real(), std::max(std::abs(root.imag()), 1e-12)});
  s.features.push_back({p.delta, std::max(p.kappa, 1e-12)});
  s.features.push_back({-p.delta, std::max(p.kappa, 1e-12)});
  return s;
}

namespace {

// Numerator gamma (2 nbar + 1) |cav(x)|^2 + g^2 kappa (delta^2 + kappa^2 +
// x^2) and denominator |p(x)|^2, both in scaled frequency.
oracles::RationalIntegrand rational_parts(const Model& m) {
  const Scaled p(m);
  const double k2d2 = p.kappa * p.kappa + p.delta * p.delta;
  oracles::RationalIntegrand r;
  r.numerator = {
      p.gamma * (2.0 * p.nbar + 1.0) * k2d2 * k2d2 + p.g * p.g * p.kappa * k2d2,
      0.0,
      p.gamma * (2.0 * p.nbar + 1.0) * 2.0 *
              (p.kappa * p.kappa - p.delta * p.delta) +
          p.g * p.g * p.kappa,
      0.0, p.gamma * (2.0 * p.nbar + 1.0)};
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

oracles::LinearStateModel state_model(const Model& m) {
  m.validate();
  require_flat(m, "state_model");
  oracles::LinearStateModel out;
  out.drift = {{{0.0, m.omega_m, 0.0, 0.0},
                {-m.omega_m, -m.gamma_m, m.coupling, 0.0},
                {0.0, 0.0, -m.kappa, m.detuning},
                {m.coupling, 0.0, -m.detuning, -m.kappa}}};
  out.diffusion_diag = {0.0, m.gamma_m * (2.0 * m.n_thermal + 1.0), m.kappa,
                        m.kappa};
  return out;
}

}  // namespace optocool::backaction
