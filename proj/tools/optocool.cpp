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

// Command-line surface: steady-state cooling analysis of a driven
// optomechanical cavity. Subcommands: derive, cool, stability, sweep,
// optimize, figure, compare. Flat key = value config files, CSV output.
//
// Exit codes: 0 success, 1 invalid input, 2 steady state required but the
// model is unstable, 3 numerical failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "optocool/backaction.hpp"
#include "optocool/colddamp.hpp"
#include "optocool/constants.hpp"
#include "optocool/csv.hpp"
#include "optocool/errors.hpp"
#include "optocool/params.hpp"
#include "optocool/sweep.hpp"

namespace {

using namespace optocool;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUnstable = 2;
constexpr int kExitNumerical = 3;

const std::vector<std::string> kKnownKeys = {
    "nu_m_hz",       "gamma_m_hz",        "mass_kg",
    "length_m",      "power_w",           "wavelength_m",
    "temperature_k", "kappa_over_omega_m", "delta_over_omega_m",
    "eta",           "g_cd",              "omega_fb_over_omega_m",
    "thermal_model"};

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) ==
        kKnownKeys.end())
      throw std::invalid_argument("unknown config key: " + key);
    if (kv.count(key))
      throw std::invalid_argument("duplicate config key: " + key);
    if (value.empty())
      throw std::invalid_argument("empty value for config key: " + key);
    kv[key] = value;
  }
  return kv;
}

double number(const std::map<std::string, std::string>& kv,
              const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("missing required config key: " + key);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not a number");
  }
  if (pos != it->second.size())
    throw std::invalid_argument("config key " + key + ": not a number");
  return v;
}

double number_or(const std::map<std::string, std::string>& kv,
                 const std::string& key, double fallback) {
  return kv.count(key) ? number(kv, key) : fallback;
}

enum class ConfigNeeds { base, backaction, colddamp };

PhysicalConfig build_config(const std::map<std::string, std::string>& kv,
                            ConfigNeeds needs) {
  PhysicalConfig cfg;
  cfg.mech_freq = constants::two_pi * number(kv, "nu_m_hz");
  cfg.mech_damping = constants::two_pi * number(kv, "gamma_m_hz");
  cfg.mass = number(kv, "mass_kg");
  cfg.cavity_length = number(kv, "length_m");
  cfg.laser_power = number(kv, "power_w");
  cfg.laser_wavelength = number(kv, "wavelength_m");
  cfg.bath_temperature = number(kv, "temperature_k");
  cfg.cavity_decay = number(kv, "kappa_over_omega_m") * cfg.mech_freq;
  if (needs == ConfigNeeds::backaction) {
    cfg.detuning = number(kv, "delta_over_omega_m") * cfg.mech_freq;
  } else {
    cfg.detuning = number_or(kv, "delta_over_omega_m", 0.0) * cfg.mech_freq;
  }
  if (needs == ConfigNeeds::colddamp) {
    cfg.detection_efficiency = number(kv, "eta");
    cfg.feedback_gain = number(kv, "g_cd");
    cfg.feedback_bandwidth =
        number(kv, "omega_fb_over_omega_m") * cfg.mech_freq;
  } else {
    cfg.detection_efficiency = number_or(kv, "eta", 1.0);
    cfg.feedback_gain = number_or(kv, "g_cd", 0.0);
    cfg.feedback_bandwidth =
        number_or(kv, "omega_fb_over_omega_m", 0.0) * cfg.mech_freq;
  }
  if (kv.count("thermal_model")) {
    const std::string& tm = kv.at("thermal_model");
    if (tm == "flat") {
      cfg.thermal_model = ThermalModel::flat;
    } else if (tm == "coth") {
      cfg.thermal_model = ThermalModel::coth;
    } else {
      throw std::invalid_argument("thermal_model must be flat or coth");
    }
  }
  cfg.validate();
  return cfg;
}

sweep::Scheme parse_scheme(const std::string& s) {
  if (s == "backaction") return sweep::Scheme::backaction;
  if (s == "colddamp") return sweep::Scheme::colddamp;
  throw std::invalid_argument("scheme must be backaction or colddamp");
}

Method parse_method(const std::string& s) {
  if (s == "closed") return Method::closed_form;
  if (s == "quadrature") return Method::quadrature;
  if (s == "residue") return Method::residue;
  if (s == "lyapunov") return Method::lyapunov;
  throw std::invalid_argument(
      "method must be closed, quadrature, residue or lyapunov");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// id:min:max:count[:scale]
sweep::Axis parse_axis(const std::string& text, int default_count) {
  const auto parts = split(text, ':');
  if (parts.size() < 3 || parts.size() > 5)
    throw std::invalid_argument("axis spec must be id:min:max[:count[:scale]]");
  sweep::Axis axis;
  const auto id = sweep::parse_param_id(parts[0]);
  if (!id) throw std::invalid_argument("unknown sweep parameter: " + parts[0]);
  axis.id = *id;
  axis.min = std::stod(parts[1]);
  axis.max = std::stod(parts[2]);
  axis.count = parts.size() > 3 ? std::stoi(parts[3]) : default_count;
  axis.scale = sweep::AxisScale::linear;
  if (parts.size() > 4) {
    if (parts[4] == "log") {
      axis.scale = sweep::AxisScale::log;
    } else if (parts[4] != "linear") {
      throw std::invalid_argument("axis scale must be linear or log");
    }
  }
  return axis;
}

// Emits to the named file, or stdout when the name is empty.
void emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << payload;
}

PhysicalConfig figure_base() {
  PhysicalConfig cfg;
  cfg.mech_freq = constants::two_pi * 1e7;
  cfg.mech_damping = constants::two_pi * 100.0;
  cfg.mass = 250e-12;
  cfg.cavity_length = 0.5e-3;
  cfg.laser_wavelength = 1064e-9;
  cfg.bath_temperature = 0.6;
  return cfg;
}

sweep::SweepSpec figure_spec(const std::string& name) {
  using sweep::AxisScale;
  using sweep::ParamId;
  sweep::SweepSpec spec;
  spec.base = figure_base();
  if (name == "fig2a") {
    spec.scheme = sweep::Scheme::backaction;
    spec.base.laser_power = 50e-3;
    spec.base.detuning = spec.base.mech_freq;
    spec.base.cavity_decay = 0.2 * spec.base.mech_freq;
    spec.power_ref = 50e-3;
    spec.axis1 = {ParamId::delta_over_omega_m, 0.5, 1.5, 100,
                  AxisScale::linear};
    spec.axis2 = {ParamId::kappa_over_omega_m, 0.05, 1.0, 100,
                  AxisScale::linear};
  } else if (name == "fig2b") {
    spec.scheme = sweep::Scheme::backaction;
    spec.base.laser_power = 50e-3;
    spec.base.detuning = spec.base.mech_freq;
    spec.base.cavity_decay = 0.2 * spec.base.mech_freq;
    spec.power_ref = 50e-3;
    spec.axis1 = {ParamId::kappa_over_omega_m, 0.05, 1.0, 100,
                  AxisScale::linear};
    spec.axis2 = {ParamId::power_over_pref, 0.1, 2.0, 100, AxisScale::linear};
  } else if (name == "fig4a") {
    spec.scheme = sweep::Scheme::colddamp;
    spec.base.laser_power = 100e-3;
    spec.base.cavity_decay = 3.0 * spec.base.mech_freq;
    spec.base.feedback_bandwidth = 3.5 * spec.base.mech_freq;
    spec.base.detection_efficiency = 1.0;
    spec.base.feedback_gain = 0.8;
    spec.power_ref = 100e-3;
    spec.axis1 = {ParamId::g_cd, 0.1, 2.0, 100, AxisScale::linear};
    spec.axis2 = {ParamId::power_over_pref, 0.1, 2.0, 100, AxisScale::linear};
  } else if (name == "fig4b") {
    spec.scheme = sweep::Scheme::colddamp;
    spec.base.laser_power = 100e-3;
    spec.base.cavity_decay = 3.0 * spec.base.mech_freq;
    spec.base.feedback_bandwidth = 3.5 * spec.base.mech_freq;
    spec.base.detection_efficiency = 1.0;
    spec.base.feedback_gain = 0.8;
    spec.power_ref = 100e-3;
    spec.axis1 = {ParamId::kappa_over_omega_m, 1.0, 10.0, 100,
                  AxisScale::linear};
    spec.axis2 = {ParamId::omega_fb_over_omega_m, 0.5, 8.0, 100,
                  AxisScale::linear};
  } else {
    throw std::invalid_argument(
        "figure must be one of fig2a, fig2b, fig4a, fig4b");
  }
  return spec;
}

int cmd_derive(const std::string& config_path, const std::string& out_path) {
  const auto kv = read_config(config_path);
  const PhysicalConfig cfg = build_config(kv, ConfigNeeds::backaction);
  const DerivedParams dp = derive_params(cfg);
  std::ostringstream os;
  os << "drive_amp,bare_coupling,alpha_s,q_s,delta_rad_s,coupling_g,nbar,"
        "zeta,g2,t_bath_check_k\n";
  const double t_check =
      dp.thermal_occupancy > 0.0
          ? occupancy_to_temperature(dp.thermal_occupancy, cfg.mech_freq)
          : 0.0;
  os << csv::format(dp.drive_amp) << ',' << csv::format(dp.bare_coupling)
     << ',' << csv::format(dp.intracavity_amp) << ','
     << csv::format(dp.static_displacement) << ',' << csv::format(cfg.detuning)
     << ',' << csv::format(dp.effective_coupling) << ','
     << csv::format(dp.thermal_occupancy) << ',' << csv::format(dp.scaled_power)
     << ',' << csv::format(dp.scaled_gain) << ',' << csv::format(t_check)
     << '\n';
  emit(out_path, os.str());
  return kExitOk;
}

int cmd_cool(const std::string& config_path, const std::string& scheme_name,
             const std::string& method_name, const std::string& out_path) {
  const sweep::Scheme scheme = parse_scheme(scheme_name);
  const Method method = parse_method(method_name);
  const auto kv = read_config(config_path);
  const PhysicalConfig cfg =
      build_config(kv, scheme == sweep::Scheme::backaction
                           ? ConfigNeeds::backaction
                           : ConfigNeeds::colddamp);
  const DerivedParams dp = derive_params(cfg);

  CoolingResult result;
  double gamma_eff = 0.0, gamma_m = cfg.mech_damping;
  bool stable = false;
  double margin = 0.0;
  if (scheme == sweep::Scheme::backaction) {
    const auto model = backaction::from_config(cfg, dp);
    const auto rep = backaction::stability(model);
    stable = rep.stable;
    margin = rep.margin;
    result = backaction::variances(model, method);
    gamma_eff = backaction::effective_oscillator(model.omega_m, model).damping;
  } else {
    const auto model = colddamp::from_config(cfg, dp);
    const auto rep = colddamp::stability(model);
    stable = rep.stable;
    margin = rep.margin;
    result = colddamp::variances(model, method);
    gamma_eff = colddamp::effective_oscillator(model.omega_m, model).damping;
  }

  std::ostringstream os;
  os << "var_q,var_p,n_eff,t_eff_k,gamma_eff_res,Gamma,stable,margin\n";
  os << csv::format(result.var_q) << ',' << csv::format(result.var_p) << ','
     << csv::format(result.n_eff) << ',' << csv::format(result.t_eff) << ','
     << csv::format(gamma_eff) << ',' << csv::format(gamma_eff - gamma_m)
     << ',' << (stable ? 1 : 0) << ',' << csv::format(margin) << '\n';
  emit(out_path, os.str());
  return kExitOk;
}

int cmd_stability(const std::string& config_path,
                  const std::string& scheme_name,
                  const std::string& out_path) {
  const sweep::Scheme scheme = parse_scheme(scheme_name);
  const auto kv = read_config(config_path);
  const PhysicalConfig cfg =
      build_config(kv, scheme == sweep::Scheme::backaction
                           ? ConfigNeeds::backaction
                           : ConfigNeeds::colddamp);
  const DerivedParams dp = derive_params(cfg);
  const StabilityReport rep =
      scheme == sweep::Scheme::backaction
          ? backaction::stability(backaction::from_config(cfg, dp))
          : colddamp::stability(colddamp::from_config(cfg, dp));

  std::ostringstream os;
  os << "name,value,margin\n";
  for (const auto& sv : rep.s_values)
    os << sv.name << ',' << csv::format(sv.value) << ','
       << csv::format(sv.margin) << '\n';
  os << "stable," << (rep.stable ? 1 : 0) << ','
     << csv::format(rep.margin) << '\n';
  int i = 0;
  for (const auto& pole : rep.poles) {
    os << "pole" << ++i << ',' << csv::format(pole.real()) << ','
       << csv::format(pole.imag()) << '\n';
  }
  emit(out_path, os.str());
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& scheme_name,
              const std::string& axes_text, double power_ref,
              const std::string& out_path) {
  const sweep::Scheme scheme = parse_scheme(scheme_name);
  const auto kv = read_config(config_path);
  sweep::SweepSpec spec;
  spec.base = build_config(kv, scheme == sweep::Scheme::backaction
                                   ? ConfigNeeds::backaction
                                   : ConfigNeeds::colddamp);
  spec.scheme = scheme;
  spec.power_ref = power_ref;
  const auto axes = split(axes_text, ',');
  if (axes.size() != 2)
    throw std::invalid_argument("--axes expects two comma-separated specs");
  spec.axis1 = parse_axis(axes[0], 50);
  spec.axis2 = parse_axis(axes[1], 50);

  const sweep::SweepTable table = sweep::run_sweep(spec);
  std::ostringstream os;
  csv::write_sweep(os, table);
  emit(out_path, os.str());
  return kExitOk;
}

int cmd_optimize(const std::string& config_path,
                 const std::string& scheme_name,
                 const std::string& domain_text, double power_ref,
                 const std::string& out_path) {
  const sweep::Scheme scheme = parse_scheme(scheme_name);
  const auto kv = read_config(config_path);
  const PhysicalConfig base =
      build_config(kv, scheme == sweep::Scheme::backaction
                           ? ConfigNeeds::backaction
                           : ConfigNeeds::colddamp);
  std::vector<sweep::Axis> domain;
  for (const auto& part : split(domain_text, ','))
    domain.push_back(parse_axis(part, 12));

  const auto report = sweep::minimize_neff(base, scheme, domain, power_ref);
  std::ostringstream os;
  os << "parameter,value\n";
  for (const auto& [id, value] : report.argmin)
    os << sweep::to_string(id) << ',' << csv::format(value) << '\n';
  os << "n_eff," << csv::format(report.n_eff) << '\n';
  os << "t_eff_k," << csv::format(report.t_eff) << '\n';
  os << "margin," << csv::format(report.margin) << '\n';
  os << "evaluations," << report.evaluations << '\n';
  emit(out_path, os.str());
  return kExitOk;
}

int cmd_figure(const std::string& name, const std::string& out_path) {
  const sweep::SweepTable table = sweep::run_sweep(figure_spec(name));
  std::ostringstream os;
  csv::write_sweep(os, table);
  emit(out_path, os.str());
  return kExitOk;
}

int cmd_compare(const std::string& config_path, const std::string& kappas_text,
                double ba_power_ref, double cd_power_ref,
                const std::string& out_path) {
  const auto kv = read_config(config_path);
  const PhysicalConfig base = build_config(kv, ConfigNeeds::base);
  std::vector<double> kappas;
  for (const auto& part : split(kappas_text, ','))
    kappas.push_back(std::stod(part));
  if (kappas.empty())
    throw std::invalid_argument("--kappas expects a comma-separated list");

  const auto rows =
      sweep::scheme_comparison(base, kappas, ba_power_ref, cd_power_ref);
  std::ostringstream os;
  os << "kappa_over_omega_m,neff_backaction,neff_colddamp,winner\n";
  for (const auto& row : rows) {
    os << csv::format(row.kappa_over_omega_m) << ','
       << csv::format(row.neff_backaction) << ','
       << csv::format(row.neff_colddamp) << ','
       << (row.neff_backaction <= row.neff_colddamp ? "backaction"
                                                    : "colddamp")
       << '\n';
  }
  emit(out_path, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Steady-state quantum cooling of a laser-driven optomechanical "
      "cavity: detuned-cavity back-action and cold-damping feedback"};
  app.require_subcommand(1);

  std::string config_path, out_path, scheme = "backaction";
  std::string method = "closed", axes, domain, kappas = "0.2,3.0", figure;
  double power_ref = 0.0, ba_pref = 50e-3, cd_pref = 100e-3;

  auto* derive = app.add_subcommand("derive", "Derived model parameters");
  derive->add_option("config", config_path)->required();
  derive->add_option("--out", out_path);

  auto* cool = app.add_subcommand("cool", "Steady-state variances");
  cool->add_option("config", config_path)->required();
  cool->add_option("--scheme", scheme);
  cool->add_option("--method", method);
  cool->add_option("--out", out_path);

  auto* stab = app.add_subcommand("stability", "Stability report");
  stab->add_option("config", config_path)->required();
  stab->add_option("--scheme", scheme);
  stab->add_option("--out", out_path);

  auto* swp = app.add_subcommand("sweep", "Grid sweep to CSV");
  swp->add_option("config", config_path)->required();
  swp->add_option("--scheme", scheme);
  swp->add_option("--axes", axes)->required();
  swp->add_option("--power-ref", power_ref);
  swp->add_option("--out", out_path);

  auto* opt = app.add_subcommand("optimize", "Minimize n_eff over a domain");
  opt->add_option("config", config_path)->required();
  opt->add_option("--scheme", scheme);
  opt->add_option("--domain", domain)->required();
  opt->add_option("--power-ref", power_ref);
  opt->add_option("--out", out_path);

  auto* fig = app.add_subcommand("figure", "Preset grids (fig2a/2b/4a/4b)");
  fig->add_option("name", figure)->required();
  fig->add_option("--out", out_path);

  auto* cmp = app.add_subcommand("compare", "Best n_eff per scheme vs kappa");
  cmp->add_option("config", config_path)->required();
  cmp->add_option("--kappas", kappas);
  cmp->add_option("--ba-power-ref", ba_pref);
  cmp->add_option("--cd-power-ref", cd_pref);
  cmp->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (derive->parsed()) return cmd_derive(config_path, out_path);
    if (cool->parsed()) return cmd_cool(config_path, scheme, method, out_path);
    if (stab->parsed()) return cmd_stability(config_path, scheme, out_path);
    if (swp->parsed())
      return cmd_sweep(config_path, scheme, axes, power_ref, out_path);
    if (opt->parsed())
      return cmd_optimize(config_path, scheme, domain, power_ref, out_path);
    if (fig->parsed()) return cmd_figure(figure, out_path);
    if (cmp->parsed())
      return cmd_compare(config_path, kappas, ba_pref, cd_pref, out_path);
  } catch (const UnstableModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInvalid;
}
