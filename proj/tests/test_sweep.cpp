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
#include <cstring>
#include <doctest.h>
#include <sstream>

#include "optocool/backaction.hpp"
#include "optocool/csv.hpp"
#include "optocool/errors.hpp"
#include "optocool/sweep.hpp"
#include "support.hpp"

using namespace optocool;
using support::rel_diff;

namespace {

sweep::SweepSpec small_grid(int n1 = 12, int n2 = 12) {
  sweep::SweepSpec spec;
  spec.base = support::reference_config();
  spec.scheme = sweep::Scheme::backaction;
  spec.axis1 = {sweep::ParamId::delta_over_omega_m, 0.5, 1.5, n1,
                sweep::AxisScale::linear};
  spec.axis2 = {sweep::ParamId::kappa_over_omega_m, 0.05, 1.0, n2,
                sweep::AxisScale::linear};
  spec.power_ref = 50e-3;
  return spec;
}

}  // namespace

TEST_CASE("a degenerate 1x1 grid equals the direct evaluation") {
  sweep::SweepSpec spec = small_grid(1, 1);
  spec.axis1 = {sweep::ParamId::delta_over_omega_m, 1.0, 1.0, 1,
                sweep::AxisScale::linear};
  spec.axis2 = {sweep::ParamId::kappa_over_omega_m, 0.2, 0.2, 1,
                sweep::AxisScale::linear};
  const auto table = sweep::run_sweep(spec);
  REQUIRE(table.cells.size() == 1);
  REQUIRE(table.cells[0].status == sweep::CellStatus::ok);

  const PhysicalConfig cfg = support::reference_config(0.2, 1.0);
  const auto direct =
      backaction::exact_variances(backaction::from_config(cfg, derive_params(cfg)));
  CHECK(table.cells[0].result.var_q == direct.var_q);
  CHECK(table.cells[0].result.var_p == direct.var_p);
  CHECK(table.cells[0].result.n_eff == direct.n_eff);
}

TEST_CASE("sweeps are bit-identical across runs") {
  const auto a = sweep::run_sweep(small_grid());
  const auto b = sweep::run_sweep(small_grid());
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(std::memcmp(&a.cells[i].result, &b.cells[i].result,
                      sizeof(CoolingResult)) == 0);
    CHECK(a.cells[i].margin == b.cells[i].margin);
  }
  std::ostringstream ca, cb;
  csv::write_sweep(ca, a);
  csv::write_sweep(cb, b);
  CHECK(ca.str() == cb.str());
}

TEST_CASE("cells are ordered axis2-fastest") {
  const auto table = sweep::run_sweep(small_grid(3, 4));
  REQUIRE(table.cells.size() == 12);
  CHECK(table.cells[0].a1 == table.cells[3].a1);
  CHECK(table.cells[0].a2 != table.cells[1].a2);
  CHECK(table.cells[0].a1 != table.cells[4].a1);
}

TEST_CASE("unstable cells are marked and keep no variances") {
  sweep::SweepSpec spec = small_grid(4, 4);
  // Power far above the static bifurcation makes part of the grid unstable.
  spec.axis2 = {sweep::ParamId::power_over_pref, 0.5, 400.0, 4,
                sweep::AxisScale::log};
  const auto table = sweep::run_sweep(spec);
  int unstable = 0, ok = 0;
  for (const auto& cell : table.cells) {
    if (cell.status == sweep::CellStatus::unstable) {
      ++unstable;
      CHECK(cell.margin < 0.0);
      CHECK(cell.result.var_q == 0.0);
    } else if (cell.status == sweep::CellStatus::ok) {
      ++ok;
    }
  }
  CHECK(unstable > 0);
  CHECK(ok > 0);
}

TEST_CASE("scheme/axis mismatches are rejected") {
  sweep::SweepSpec spec = small_grid();
  spec.scheme = sweep::Scheme::colddamp;  // delta axis invalid here
  CHECK_THROWS_AS(sweep::run_sweep(spec), std::invalid_argument);
  spec = small_grid();
  spec.axis1.count = 0;
  CHECK_THROWS_AS(sweep::run_sweep(spec), std::invalid_argument);
  spec = small_grid();
  spec.axis1.min = 2.0;  // min > max with count > 1
  CHECK_THROWS_AS(sweep::run_sweep(spec), std::invalid_argument);
}

TEST_CASE("coarse grid plus simplex lands in the cooling valley") {
  const std::vector<sweep::Axis> domain = {
      {sweep::ParamId::delta_over_omega_m, 0.5, 1.5, 12,
       sweep::AxisScale::linear},
      {sweep::ParamId::kappa_over_omega_m, 0.05, 1.0, 12,
       sweep::AxisScale::linear}};
  const auto report = sweep::minimize_neff(
      support::reference_config(), sweep::Scheme::backaction, domain, 50e-3);
  CHECK(report.n_eff > 0.07);
  CHECK(report.n_eff < 0.15);
  CHECK(report.margin > 0.0);
  REQUIRE(report.argmin.size() == 2);
  CHECK(report.argmin[0].second > 0.8);
  CHECK(report.argmin[0].second < 1.2);
  CHECK(report.argmin[1].second > 0.1);
  CHECK(report.argmin[1].second < 0.35);
}

TEST_CASE("the refined optimum dominates an exhaustive grid") {
  const std::vector<sweep::Axis> domain = {
      {sweep::ParamId::delta_over_omega_m, 0.5, 1.5, 10,
       sweep::AxisScale::linear},
      {sweep::ParamId::kappa_over_omega_m, 0.05, 1.0, 10,
       sweep::AxisScale::linear}};
  const auto report = sweep::minimize_neff(
      support::reference_config(), sweep::Scheme::backaction, domain, 50e-3);

  sweep::SweepSpec dense = small_grid(100, 100);
  const auto table = sweep::run_sweep(dense);
  double best_cell = 1e300;
  for (const auto& cell : table.cells)
    if (cell.status == sweep::CellStatus::ok)
      best_cell = std::min(best_cell, cell.result.n_eff);
  CHECK(report.n_eff <= best_cell + 1e-3);
}

TEST_CASE("a domain collapsed to one stable point returns that point") {
  const std::vector<sweep::Axis> domain = {
      {sweep::ParamId::delta_over_omega_m, 1.0, 1.0, 1,
       sweep::AxisScale::linear}};
  const auto report = sweep::minimize_neff(
      support::reference_config(), sweep::Scheme::backaction, domain, 50e-3);
  const PhysicalConfig cfg = support::reference_config(0.2, 1.0);
  const auto direct = backaction::exact_variances(
      backaction::from_config(cfg, derive_params(cfg)));
  CHECK(rel_diff(report.n_eff, direct.n_eff) < 1e-14);
}

TEST_CASE("an all-unstable domain reports failure explicitly") {
  const std::vector<sweep::Axis> domain = {
      {sweep::ParamId::power_over_pref, 300.0, 1000.0, 4,
       sweep::AxisScale::linear}};
  CHECK_THROWS_AS(
      sweep::minimize_neff(support::reference_config(),
                           sweep::Scheme::backaction, domain, 50e-3),
      NumericalError);
}

TEST_CASE("optimizer runs are deterministic") {
  const std::vector<sweep::Axis> domain = {
      {sweep::ParamId::delta_over_omega_m, 0.6, 1.4, 8,
       sweep::AxisScale::linear},
      {sweep::ParamId::kappa_over_omega_m, 0.08, 0.8, 8,
       sweep::AxisScale::linear}};
  const auto a = sweep::minimize_neff(support::reference_config(),
                                      sweep::Scheme::backaction, domain, 50e-3);
  const auto b = sweep::minimize_neff(support::reference_config(),
                                      sweep::Scheme::backaction, domain, 50e-3);
  CHECK(a.n_eff == b.n_eff);
  CHECK(a.evaluations == b.evaluations);
  for (std::size_t i = 0; i < a.argmin.size(); ++i)
    CHECK(a.argmin[i].second == b.argmin[i].second);
}

TEST_CASE("good and bad cavities prefer opposite schemes") {
  const auto rows = sweep::scheme_comparison(support::reference_config(),
                                             {0.2, 3.0}, 50e-3, 100e-3);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].kappa_over_omega_m == 0.2);
  CHECK(rows[0].neff_backaction < rows[0].neff_colddamp);
  CHECK(rows[1].neff_colddamp < rows[1].neff_backaction);
}
