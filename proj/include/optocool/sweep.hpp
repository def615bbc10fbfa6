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

#include <optional>
#include <string>
#include <vector>

#include "optocool/cooling.hpp"
#include "optocool/params.hpp"

namespace optocool::sweep {

enum class Scheme { backaction, colddamp };

enum class AxisScale { linear, log };

enum class ParamId {
  delta_over_omega_m,
  kappa_over_omega_m,
  power_over_pref,
  g_cd,
  omega_fb_over_omega_m,
  eta,
};

std::string to_string(ParamId id);
std::optional<ParamId> parse_param_id(const std::string& name);

struct Axis {
  ParamId id{};
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  AxisScale scale = AxisScale::linear;

  double value_at(int i) const;        // grid node i in [0, count)
  double value_at_fraction(double u) const;  // u in [0, 1]
};

struct SweepSpec {
  PhysicalConfig base;
  Scheme scheme = Scheme::backaction;
  Axis axis1, axis2;
  double power_ref = 0.0;  // P_ref for power_over_pref; 0 -> base power

  void validate() const;
};

enum class CellStatus { ok, unstable, failed };

struct SweepCell {
  double a1 = 0.0, a2 = 0.0;  // axis values
  CellStatus status = CellStatus::failed;
  CoolingResult result;       // valid only when status == ok
  double margin = 0.0;        // stability margin (all statuses)
  double gamma_eff_res = 0.0; // effective damping at omega = omega_m
  double net_cooling = 0.0;   // gamma_eff(omega_m) - gamma_m
  double g2 = 0.0;
  double zeta = 0.0;
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // axis2 fastest
};

// Closed-form evaluation on the grid; unstable and failed cells are kept,
// marked, and carry no variances. G is recomputed per cell from the cell's
// (P, kappa, Delta).
SweepTable run_sweep(const SweepSpec& spec);

// One off-grid evaluation with the same per-cell pipeline.
SweepCell evaluate_point(const PhysicalConfig& base, Scheme scheme,
                         const std::vector<std::pair<ParamId, double>>& values,
                         double power_ref);

struct OptimumReport {
  std::vector<std::pair<ParamId, double>> argmin;
  double n_eff = 0.0;
  double t_eff = 0.0;
  double margin = 0.0;
  long evaluations = 0;
};

// Coarse grid (the axis counts) followed by Nelder-Mead refinement in
// scaled coordinates, with unstable evaluations treated as +inf and three
// deterministic restarts. Throws NumericalError when the domain contains
// no stable point.
OptimumReport minimize_neff(const PhysicalConfig& base, Scheme scheme,
                            const std::vector<Axis>& domain, double power_ref);

struct ComparisonRow {
  double kappa_over_omega_m = 0.0;
  double neff_backaction = 0.0;
  double neff_colddamp = 0.0;
};

// Per kappa, optimizes each scheme over its remaining free parameters
// (backaction: Delta, P; cold damping: g_cd, omega_fb, P).
std::vector<ComparisonRow> scheme_comparison(const PhysicalConfig& base,
                                             const std::vector<double>& kappa_grid,
                                             double backaction_power_ref,
                                             double colddamp_power_ref);

}  // namespace optocool::sweep
