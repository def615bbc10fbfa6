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

#include "optocool/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "optocool/backaction.hpp"
#include "optocool/colddamp.hpp"
#include "optocool/errors.hpp"

namespace optocool::sweep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool id_valid_for(ParamId id, Scheme scheme) {
  switch (id) {
    case ParamId::delta_over_omega_m:
      return scheme == Scheme::backaction;
    case ParamId::kappa_over_omega_m:
    case ParamId::power_over_pref:
      return true;
    case ParamId::g_cd:
    case ParamId::omega_fb_over_omega_m:
    case ParamId::eta:
      return scheme == Scheme::colddamp;
  }
  return false;
}

void apply_param(PhysicalConfig& cfg, ParamId id, double value,
                 double power_ref) {
  switch (id) {
    case ParamId::delta_over_omega_m:
      cfg.detuning = value * cfg.mech_freq;
      return;
    case ParamId::kappa_over_omega_m:
      cfg.cavity_decay = value * cfg.mech_freq;
      return;
    case ParamId::power_over_pref:
      cfg.laser_power = value * power_ref;
      return;
    case ParamId::g_cd:
      cfg.feedback_gain = value;
      return;
    case ParamId::omega_fb_over_omega_m:
      cfg.feedback_bandwidth = value * cfg.mech_freq;
      return;
    case ParamId::eta:
      cfg.detection_efficiency = value;
      return;
  }
  throw std::invalid_argument("unknown sweep parameter");
}

void validate_axis(const Axis& a, Scheme scheme) {
  if (a.count < 1) throw std::invalid_argument("axis count must be >= 1");
  if (a.count > 1 && !(a.min < a.max))
    throw std::invalid_argument("axis needs min < max when count > 1");
  if (a.scale == AxisScale::log && !(a.min > 0.0))
    throw std::invalid_argument("log axis needs positive bounds");
  if (!id_valid_for(a.id, scheme))
    throw std::invalid_argument("parameter " + to_string(a.id) +
                                " is not sweepable for this scheme");
}

}  // namespace

std::string to_string(ParamId id) {
  switch (id) {
    case ParamId::delta_over_omega_m: return "delta_over_omega_m";
    case ParamId::kappa_over_omega_m: return "kappa_over_omega_m";
    case ParamId::power_over_pref: return "power_over_pref";
    case ParamId::g_cd: return "g_cd";
    case ParamId::omega_fb_over_omega_m: return "omega_fb_over_omega_m";
    case ParamId::eta: return "eta";
  }
  return "?";
}

std::optional<ParamId> parse_param_id(const std::string& name) {
  for (ParamId id : {ParamId::delta_over_omega_m, ParamId::kappa_over_omega_m,
                     ParamId::power_over_pref, ParamId::g_cd,
                     ParamId::omega_fb_over_omega_m, ParamId::eta})
    if (to_string(id) == name) return id;
  return std::nullopt;
}

double Axis::value_at(int i) const {
  if (count <= 1) return min;
  return value_at_fraction(static_cast<double>(i) / (count - 1));
}

double Axis::value_at_fraction(double u) const {
  if (scale == AxisScale::log)
    return std::exp(std::log(min) + (std::log(max) - std::log(min)) * u);
  return min + (max - min) * u;
}

void SweepSpec::validate() const {
  base.validate();
  validate_axis(axis1, scheme);
  validate_axis(axis2, scheme);
}

SweepCell evaluate_point(const PhysicalConfig& base, Scheme scheme,
                         const std::vector<std::pair<ParamId, double>>& values,
                         double power_ref) {
  PhysicalConfig cfg = base;
  const double pref = power_ref > 0.0 ? power_ref : base.laser_power;
  for (const auto& [id, value] : values) apply_param(cfg, id, value, pref);
  if (scheme == Scheme::colddamp) cfg.detuning = 0.0;

  SweepCell cell;
  const DerivedParams dp = derive_params(cfg);
  cell.zeta = dp.scaled_power;
  cell.g2 = dp.scaled_gain;

  try {
    if (scheme == Scheme::backaction) {
      const auto model = backaction::from_config(cfg, dp);
      const StabilityReport rep = backaction::stability(model);
      cell.margin = rep.margin;
      const auto eff = backaction::effective_oscillator(model.omega_m, model);
      cell.gamma_eff_res = eff.damping;
      cell.net_cooling = eff.damping - model.gamma_m;
      if (!rep.stable) {
        cell.status = CellStatus::unstable;
        return cell;
      }
      cell.result = backaction::exact_variances(model);
    } else {
      const auto model = colddamp::from_config(cfg, dp);
      const StabilityReport rep = colddamp::stability(model);
      cell.margin = rep.margin;
      const auto eff = colddamp::effective_oscillator(model.omega_m, model);
      cell.gamma_eff_res = eff.damping;
      cell.net_cooling = eff.damping - model.gamma_m;
      if (!rep.stable) {
        cell.status = CellStatus::unstable;
        return cell;
      }
      cell.result = colddamp::exact_variances(model);
    }
    cell.status = CellStatus::ok;
  } catch (const UnstableModelError&) {
    cell.status = CellStatus::unstable;
  } catch (const NumericalError&) {
    cell.status = CellStatus::failed;
  }
  return cell;
}

SweepTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepTable table;
  table.spec = spec;
  table.cells.reserve(static_cast<std::size_t>(spec.axis1.count) *
                      static_cast<std::size_t>(spec.axis2.count));
  for (int i = 0; i < spec.axis1.count; ++i) {
    const double v1 = spec.axis1.value_at(i);
    for (int j = 0; j < spec.axis2.count; ++j) {
      const double v2 = spec.axis2.value_at(j);
      SweepCell cell = evaluate_point(
          spec.base, spec.scheme,
          {{spec.axis1.id, v1}, {spec.axis2.id, v2}}, spec.power_ref);
      cell.a1 = v1;
      cell.a2 = v2;
      table.cells.push_back(cell);
    }
  }
  return table;
}

namespace {

struct NmResult {
  std::vector<double> x;
  double value = kInf;
  long evaluations = 0;
};

// Deterministic Nelder-Mead on [0,1]^d (the objective returns +inf outside).
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0, double step,
                     double diam_tol, long max_iter) {
  const std::size_t d = x0.size();
  NmResult best;
  long evals = 0;
  const auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    if (v < best.value) {
      best.value = v;
      best.x = x;
    }
    return v;
  };

  std::vector<std::vector<double>> xs(d + 1, x0);
  std::vector<double> fs(d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    double s = xs[i + 1][i] + step > 1.0 ? -step : step;
    xs[i + 1][i] += s;
  }
  for (std::size_t i = 0; i <= d; ++i) fs[i] = eval(xs[i]);

  for (long iter = 0; iter < max_iter; ++iter) {
    // Order vertices (d+1 small; selection sort keeps this readable).
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = i + 1; j <= d; ++j)
        if (fs[j] < fs[i]) {
          std::swap(fs[i], fs[j]);
          std::swap(xs[i], xs[j]);
        }

    double diam = 0.0;
    for (std::size_t i = 1; i <= d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        diam = std::max(diam, std::abs(xs[i][k] - xs[0][k]));
    if (diam < diam_tol) break;

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) centroid[k] += xs[i][k];
    }
    for (std::size_t k = 0; k < d; ++k) centroid[k] /= static_cast<double>(d);

    const auto blend = [&](double t) {
      std::vector<double> x(d);
      for (std::size_t k = 0; k < d; ++k)
        x[k] = centroid[k] + t * (centroid[k] - xs[d][k]);
      return x;
    };

    const auto xr = blend(1.0);
    const double fr = eval(xr);
    if (fr < fs[0]) {
      const auto xe = blend(2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        xs[d] = xe;
        fs[d] = fe;
      } else {
        xs[d] = xr;
        fs[d] = fr;
      }
      continue;
    }
    if (fr < fs[d - 1]) {
      xs[d] = xr;
      fs[d] = fr;
      continue;
    }
    if (fr < fs[d]) {
      const auto xc = blend(0.5);
      const double fc = eval(xc);
      if (fc <= fr) {
        xs[d] = xc;
        fs[d] = fc;
        continue;
      }
    } else {
      const auto xc = blend(-0.5);
      const double fc = eval(xc);
      if (fc < fs[d]) {
        xs[d] = xc;
        fs[d] = fc;
        continue;
      }
    }
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t k = 0; k < d; ++k)
        xs[i][k] = xs[0][k] + 0.5 * (xs[i][k] - xs[0][k]);
      fs[i] = eval(xs[i]);
    }
  }

  best.evaluations = evals;
  return best;
}

}  // namespace

OptimumReport minimize_neff(const PhysicalConfig& base, Scheme scheme,
                            const std::vector<Axis>& domain, double power_ref) {
  if (domain.empty() || domain.size() > 3)
    throw std::invalid_argument("minimize_neff expects 1 to 3 axes");
  for (const Axis& a : domain) validate_axis(a, scheme);

  const auto point_values = [&](const std::vector<double>& fractions) {
    std::vector<std::pair<ParamId, double>> values;
    for (std::size_t k = 0; k < domain.size(); ++k)
      values.push_back({domain[k].id,
                        domain[k].count > 1
                            ? domain[k].value_at_fraction(fractions[k])
                            : domain[k].min});
    return values;
  };

  // Coarse grid, last axis fastest.
  long total_evals = 0;
  std::vector<int> index(domain.size(), 0);
  std::vector<double> best_u;
  double best_val = kInf;
  for (;;) {
    std::vector<double> u(domain.size(), 0.0);
    for (std::size_t k = 0; k < domain.size(); ++k)
      u[k] = domain[k].count > 1
                 ? static_cast<double>(index[k]) / (domain[k].count - 1)
                 : 0.0;
    const SweepCell cell =
        evaluate_point(base, scheme, point_values(u), power_ref);
    ++total_evals;
    if (cell.status == CellStatus::ok && cell.result.n_eff < best_val) {
      best_val = cell.result.n_eff;
      best_u = u;
    }
    std::size_t k = domain.size();
    while (k > 0 && ++index[k - 1] == domain[k - 1].count) {
      index[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  if (best_u.empty())
    throw NumericalError("minimize_neff: no stable point in the domain");

  // Free dimensions for the simplex refinement.
  std::vector<std::size_t> free_dims;
  for (std::size_t k = 0; k < domain.size(); ++k)
    if (domain[k].count > 1) free_dims.push_back(k);

  std::vector<double> best_x(free_dims.size());
  for (std::size_t i = 0; i < free_dims.size(); ++i)
    best_x[i] = best_u[free_dims[i]];
  double refined_val = best_val;

  if (!free_dims.empty()) {
    const auto objective = [&](const std::vector<double>& x) {
      for (double v : x)
        if (!(v >= 0.0 && v <= 1.0)) return kInf;
      std::vector<double> u = best_u;
      for (std::size_t i = 0; i < free_dims.size(); ++i) u[free_dims[i]] = x[i];
      const SweepCell cell =
          evaluate_point(base, scheme, point_values(u), power_ref);
      return cell.status == CellStatus::ok ? cell.result.n_eff : kInf;
    };

    // Main run plus three deterministic restarts around the grid optimum.
    static constexpr double kPerturb[] = {0.0, 0.04, -0.04, 0.02};
    for (double delta : kPerturb) {
      std::vector<double> x0 = best_x;
      if (delta != 0.0)
        for (auto& v : x0) v = std::clamp(v + delta, 0.0, 1.0);
      const NmResult run = nelder_mead(objective, x0, 0.1, 1e-4, 500);
      total_evals += run.evaluations;
      if (run.value < refined_val) {
        refined_val = run.value;
        best_x = run.x;
      }
    }
  }

  std::vector<double> u = best_u;
  for (std::size_t i = 0; i < free_dims.size(); ++i) u[free_dims[i]] = best_x[i];
  const auto values = point_values(u);
  const SweepCell cell = evaluate_point(base, scheme, values, power_ref);

  OptimumReport report;
  report.argmin = values;
  report.n_eff = cell.result.n_eff;
  report.t_eff = cell.result.t_eff;
  report.margin = cell.margin;
  report.evaluations = total_evals;
  return report;
}

std::vector<ComparisonRow> scheme_comparison(const PhysicalConfig& base,
                                             const std::vector<double>& kappa_grid,
                                             double backaction_power_ref,
                                             double colddamp_power_ref) {
  std::vector<ComparisonRow> rows;
  rows.reserve(kappa_grid.size());
  for (double kappa_rel : kappa_grid) {
    PhysicalConfig cfg = base;
    cfg.cavity_decay = kappa_rel * base.mech_freq;

    const std::vector<Axis> ba_domain = {
        {ParamId::delta_over_omega_m, 0.3, 4.0, 24, AxisScale::linear},
        {ParamId::power_over_pref, 0.05, 4.0, 16, AxisScale::log}};
    const std::vector<Axis> cd_domain = {
        {ParamId::g_cd, 0.01, 5.0, 12, AxisScale::log},
        {ParamId::omega_fb_over_omega_m, 0.5, 8.0, 8, AxisScale::linear},
        {ParamId::power_over_pref, 0.05, 4.0, 8, AxisScale::log}};

    ComparisonRow row;
    row.kappa_over_omega_m = kappa_rel;
    row.neff_backaction =
        minimize_neff(cfg, Scheme::backaction, ba_domain, backaction_power_ref)
            .n_eff;
    row.neff_colddamp =
        minimize_neff(cfg, Scheme::colddamp, cd_domain, colddamp_power_ref)
            .n_eff;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace optocool::sweep
