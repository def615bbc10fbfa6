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

#include <cmath>
#include <complex>
#include <doctest.h>

#include "optocool/backaction.hpp"
#include "optocool/errors.hpp"
#include "optocool/oracles.hpp"
#include "support.hpp"

using namespace optocool;
using support::rel_diff;

namespace {

backaction::Model reference_model(double kappa_rel = 0.2,
                                  double delta_rel = 1.0,
                                  double power_w = 50e-3) {
  const PhysicalConfig cfg =
      support::reference_config(kappa_rel, delta_rel, power_w);
  return backaction::from_config(cfg, derive_params(cfg));
}

}  // namespace

TEST_CASE("flat thermal noise spectrum is frequency independent") {
  const auto m = reference_model();
  const auto a = backaction::noise_spectra(0.0, m);
  const auto b = backaction::noise_spectra(3.7 * m.omega_m, m);
  CHECK(a.thermal == b.thermal);
  CHECK(a.thermal ==
        doctest::Approx(m.gamma_m * (2.0 * m.n_thermal + 1.0)).epsilon(1e-14));
}

TEST_CASE("radiation pressure spectrum is even and has the right DC value") {
  const auto m = reference_model();
  for (double w : {0.3, 1.0, 2.4}) {
    const auto plus = backaction::noise_spectra(w * m.omega_m, m);
    const auto minus = backaction::noise_spectra(-w * m.omega_m, m);
    CHECK(rel_diff(plus.radiation_pressure, minus.radiation_pressure) <
          1e-13);
  }
  const auto dc = backaction::noise_spectra(0.0, m);
  const double expected = m.coupling * m.coupling * m.kappa /
                          (m.kappa * m.kappa + m.detuning * m.detuning);
  CHECK(rel_diff(dc.radiation_pressure, expected) < 1e-13);
}

TEST_CASE("coth thermal spectrum approaches the flat value at low frequency") {
  auto m = reference_model();
  m.thermal_model = ThermalModel::coth;
  const double flat = m.gamma_m * (2.0 * m.n_thermal + 1.0);
  // k_B T / hbar ~ 1e11 rad/s dwarfs omega_m, so the correction is tiny.
  const auto s = backaction::noise_spectra(m.omega_m, m);
  CHECK(rel_diff(s.thermal, flat) < 1e-6);
  // At T = 0 the spectrum is the zero-point line |omega|/omega_m gamma_m.
  m.n_thermal = 0.0;
  const auto z = backaction::noise_spectra(2.0 * m.omega_m, m);
  CHECK(rel_diff(z.thermal, 2.0 * m.gamma_m) < 1e-13);
}

TEST_CASE("uncoupled susceptibility is the bare Lorentzian") {
  auto m = reference_model();
  m.coupling = 0.0;
  CHECK(rel_diff(std::abs(backaction::susceptibility(0.0, m)),
                 1.0 / m.omega_m) < 1e-14);
  for (double w : {0.2, 0.9, 1.0, 3.3}) {
    const double omega = w * m.omega_m;
    const double bare =
        m.omega_m * m.omega_m /
        (std::pow(m.omega_m * m.omega_m - omega * omega, 2) +
         m.gamma_m * m.gamma_m * omega * omega);
    CHECK(rel_diff(std::norm(backaction::susceptibility(omega, m)), bare) <
          1e-13);
  }
}

TEST_CASE("red-detuned drive broadens the mechanical response") {
  const auto m = reference_model(0.2, 1.0);  // G = 0.26 omega_m
  const auto eff = backaction::effective_oscillator(m.omega_m, m);
  CHECK(eff.damping / m.gamma_m > 100.0);
}

TEST_CASE("uncoupled effective oscillator returns the bare parameters") {
  auto m = reference_model();
  m.coupling = 0.0;
  for (double w : {0.1, 1.0, 2.5}) {
    const auto eff = backaction::effective_oscillator(w * m.omega_m, m);
    CHECK(rel_diff(eff.frequency, m.omega_m) < 1e-14);
    CHECK(rel_diff(eff.damping, m.gamma_m) < 1e-14);
    CHECK(eff.restoring);
  }
}

TEST_CASE("resonant drive leaves the damping untouched") {
  auto m = reference_model();
  m.detuning = 0.0;
  for (double w : {0.2, 1.0, 4.0}) {
    const auto eff = backaction::effective_oscillator(w * m.omega_m, m);
    CHECK(rel_diff(eff.damping, m.gamma_m) < 1e-14);
  }
}

TEST_CASE("effective damping at resonance equals gamma_m plus the net rate") {
  support::ModelGen gen(101);
  for (int i = 0; i < 100; ++i) {
    const auto m = gen.backaction_model();
    const auto eff = backaction::effective_oscillator(m.omega_m, m);
    const auto rates = backaction::scattering_rates(m);
    CHECK(std::abs(eff.damping - (m.gamma_m + rates.gamma_cool)) /
              eff.damping <
          1e-12);
  }
}

TEST_CASE("anti-restoring regime is flagged, not silently evaluated") {
  auto m = reference_model();
  // Enormous coupling drives the squared effective frequency negative at
  // low frequency.
  m.coupling = 3.0 * m.omega_m;
  const auto eff = backaction::effective_oscillator(0.0, m);
  CHECK_FALSE(eff.restoring);
  CHECK(std::isnan(eff.frequency));
}

TEST_CASE("uncoupled model is stable with the expected s2 value") {
  auto m = reference_model();
  m.coupling = 0.0;
  const auto rep = backaction::stability(m);
  CHECK(rep.stable);
  REQUIRE(rep.s_values.size() == 2);
  // s2 scales as omega_m (kappa^2 + Delta^2) in units of omega_m^3.
  const double k = m.kappa / m.omega_m, d = m.detuning / m.omega_m;
  CHECK(rel_diff(rep.s_values[1].value, k * k + d * d) < 1e-13);
  CHECK(rep.margin > 0.0);
}

TEST_CASE("coupling at the static bifurcation point is marginal") {
  auto m = reference_model();
  const double k2d2 = m.kappa * m.kappa + m.detuning * m.detuning;
  m.coupling = std::sqrt(m.omega_m * k2d2 / m.detuning);
  const auto rep = backaction::stability(m);
  CHECK(rep.marginal);
}

TEST_CASE("reference working point is stable and agrees with its poles") {
  const auto m = reference_model();
  const auto rep = backaction::stability(m);
  CHECK(rep.stable);
  REQUIRE(rep.poles.size() == 4);
  for (const auto& pole : rep.poles) CHECK(pole.imag() < 0.0);
}

TEST_CASE("uncoupled steady state is the thermal state") {
  auto m = reference_model();
  m.coupling = 0.0;
  const auto r = backaction::exact_variances(m);
  CHECK(rel_diff(r.var_q, m.n_thermal + 0.5) < 1e-12);
  CHECK(rel_diff(r.var_p, m.n_thermal + 0.5) < 1e-12);
  CHECK(rel_diff(r.n_eff, m.n_thermal) < 1e-10);
}

TEST_CASE("reference working point cools close to the ground state") {
  const auto r = backaction::exact_variances(reference_model());
  CHECK(r.n_eff > 0.07);
  CHECK(r.n_eff < 0.15);
  CHECK(r.t_eff == doctest::Approx(2.18e-4).epsilon(0.01));
}

TEST_CASE("closed form matches the quadrature oracle on random models") {
  support::ModelGen gen(202);
  for (int i = 0; i < 30; ++i) {
    const auto m = gen.backaction_model();
    const auto closed = backaction::exact_variances(m);
    const auto quad = backaction::variances(m, Method::quadrature);
    CHECK(rel_diff(closed.var_q, quad.var_q) < 1e-6);
    CHECK(rel_diff(closed.var_p, quad.var_p) < 1e-6);
  }
}

TEST_CASE("variances refuse an unstable model with a distinct error") {
  auto m = reference_model();
  m.coupling = 1.5 * m.omega_m;  // beyond the static bifurcation at Delta=1
  CHECK_FALSE(backaction::stability(m).stable);
  CHECK_THROWS_AS(backaction::exact_variances(m), UnstableModelError);
  CHECK_THROWS_AS(backaction::variances(m, Method::residue),
                  UnstableModelError);
}

TEST_CASE("closed form requires the flat thermal model") {
  auto m = reference_model();
  m.thermal_model = ThermalModel::coth;
  CHECK_THROWS_AS(backaction::exact_variances(m), std::invalid_argument);
  // The position variance remains available through quadrature and sits
  // within ppm of the flat-model value at this bath.
  const double vq = backaction::variance_q_quadrature(m);
  m.thermal_model = ThermalModel::flat;
  CHECK(rel_diff(vq, backaction::exact_variances(m).var_q) < 1e-4);
}

TEST_CASE("momentum variance under the coth model reports divergence") {
  auto m = reference_model();
  m.thermal_model = ThermalModel::coth;
  CHECK_THROWS_AS(backaction::variances(m, Method::quadrature),
                  NumericalError);
}

TEST_CASE("blue detuning heats: negative net rate, hotter steady state") {
  auto m = reference_model();
  m.detuning = -m.detuning;
  // Keep |Gamma| below gamma_m so the anti-damped oscillator stays stable.
  m.coupling = 0.001 * m.omega_m;
  const auto rates = backaction::scattering_rates(m);
  CHECK(rates.gamma_cool < 0.0);
  const auto rep = backaction::stability(m);
  REQUIRE(rep.stable);
  const auto r = backaction::exact_variances(m);
  CHECK(r.n_eff > m.n_thermal);
}

TEST_CASE("stability margins are independent of the absolute rate scale") {
  auto a = reference_model();
  auto b = a;
  b.omega_m *= 1e3;
  b.gamma_m *= 1e3;
  b.kappa *= 1e3;
  b.detuning *= 1e3;
  b.coupling *= 1e3;
  const auto ra = backaction::stability(a);
  const auto rb = backaction::stability(b);
  CHECK(ra.margin == doctest::Approx(rb.margin).epsilon(1e-12));
  CHECK(ra.s_values[0].margin ==
        doctest::Approx(rb.s_values[0].margin).epsilon(1e-12));
}

TEST_CASE("scattering rates are symmetric on resonance") {
  auto m = reference_model();
  m.detuning = 0.0;
  const auto rates = backaction::scattering_rates(m);
  CHECK(rates.a_plus == rates.a_minus);
  CHECK(rates.gamma_cool == 0.0);
}

TEST_CASE("sideband-matched detuning maximizes the anti-Stokes rate") {
  const auto m = reference_model();  // Delta = omega_m
  const auto rates = backaction::scattering_rates(m);
  CHECK(rel_diff(rates.a_minus,
                 m.coupling * m.coupling / (2.0 * m.kappa)) < 1e-13);
}

TEST_CASE("perturbative occupancy vanishes with the Stokes rate") {
  auto m = reference_model();
  m.kappa = 0.02 * m.omega_m;
  m.coupling = 0.005 * m.omega_m;
  m.n_thermal = 0.0;
  const auto pert = backaction::perturbative_limits(m);
  CHECK(pert.n_eff < 1e-3);
}

TEST_CASE("perturbative occupancy tracks the exact one at weak coupling") {
  auto m = reference_model();
  m.coupling = 0.01 * m.omega_m;
  const auto pert = backaction::perturbative_limits(m);
  const auto exact = backaction::exact_variances(m);
  CHECK(std::abs(pert.n_eff - exact.n_eff) / exact.n_eff < 0.1);
}

TEST_CASE("eta_Delta hits zero exactly at the s2 boundary") {
  support::ModelGen gen(303);
  for (int i = 0; i < 20; ++i) {
    const auto m = gen.backaction_model();
    const double k2d2 = m.kappa * m.kappa + m.detuning * m.detuning;
    const double eta_delta =
        1.0 - m.coupling * m.coupling * m.detuning / (m.omega_m * k2d2);
    const auto rep = backaction::stability(m);
    // s2 = omega_m (kappa^2+Delta^2) eta_Delta, both in omega_m^3 units.
    const double s2_from_eta =
        (k2d2 / (m.omega_m * m.omega_m)) * eta_delta;
    CHECK(rel_diff(rep.s_values[1].value, s2_from_eta) < 1e-12);
  }
}

TEST_CASE("perturbative limits flag the strong-coupling regime") {
  auto m = reference_model();
  m.coupling = 1.2 * m.kappa;
  if (backaction::stability(m).stable) {
    const auto pert = backaction::perturbative_limits(m);
    CHECK_FALSE(pert.regime_ok);
  }
}

TEST_CASE("bare position spectrum integrates to the thermal variance") {
  auto m = reference_model();
  m.coupling = 0.0;
  const auto mom = oracles::integrate_moments(backaction::variance_integrand(m));
  CHECK(mom.converged);
  CHECK(rel_diff(mom.m0, m.n_thermal + 0.5) < 1e-8);
  CHECK(rel_diff(mom.m2, m.n_thermal + 0.5) < 1e-8);
}

TEST_CASE("position spectrum is even for flat noise") {
  const auto m = reference_model();
  for (double w : {0.4, 1.0, 1.9}) {
    CHECK(rel_diff(backaction::position_spectrum(w * m.omega_m, m),
                   backaction::position_spectrum(-w * m.omega_m, m)) < 1e-12);
  }
}

TEST_CASE("stronger drive suppresses the resonance peak") {
  auto weak = reference_model();
  weak.coupling = 0.2 * weak.omega_m;
  auto strong = weak;
  strong.coupling = 0.4 * strong.omega_m;
  CHECK(backaction::position_spectrum(strong.omega_m, strong) <
        backaction::position_spectrum(weak.omega_m, weak));
}

TEST_CASE("variances are affine in the bath occupancy") {
  auto m = reference_model();
  auto at = [&](double nbar) {
    auto copy = m;
    copy.n_thermal = nbar;
    return backaction::exact_variances(copy);
  };
  const auto r0 = at(0.0);
  const auto r1k = at(1000.0);
  const auto mid = at(500.0);
  CHECK(rel_diff(mid.var_q, 0.5 * (r0.var_q + r1k.var_q)) < 1e-10);
  CHECK(rel_diff(mid.var_p, 0.5 * (r0.var_p + r1k.var_p)) < 1e-10);
  // Recover the affine coefficients and predict a third point.
  const double d_q = (r1k.var_q - r0.var_q) / 1000.0;
  const double b_q = r0.var_q - 0.5;
  const auto probe = at(777.0);
  CHECK(rel_diff(probe.var_q, 0.5 + b_q + d_q * 777.0) < 1e-10);
}

TEST_CASE("steady state respects the Heisenberg bound") {
  support::ModelGen gen(404);
  for (int i = 0; i < 50; ++i) {
    const auto r = backaction::exact_variances(gen.backaction_model());
    CHECK(r.var_q * r.var_p >= 0.25 - 1e-12);
  }
}

TEST_CASE("weak coupling limits continuously to the thermal state") {
  auto m = reference_model();
  m.coupling = 1e-6 * m.omega_m;
  const auto r = backaction::exact_variances(m);
  CHECK(rel_diff(r.var_q, m.n_thermal + 0.5) < 1e-6);
  CHECK(rel_diff(r.var_p, m.n_thermal + 0.5) < 1e-6);
}
