#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsac/diagnostics.hpp"
#include "nsac/perturbation.hpp"
#include "nsac/profile.hpp"
#include "nsac/solver.hpp"

namespace nsac {

using json = nlohmann::json;

// One experiment = one config file. Key-value blocks mirror the module
// parameters; everything derived (K_q, t0, the intermediate state, the grid
// when auto-sized) lands in the resolved echo written next to the outputs.
struct ExperimentConfig {
  std::string name = "run";
  std::uint64_t seed = 1;
  std::string mode = "wave";  // wave | mms

  struct {
    double R = 1.0, A = 1.0, gamma = 1.4, nu = 1.0, kappa = 1.0;
  } gas;

  struct {
    double v_minus = 1.0, v_plus = 1.0;
    double u_minus = 0.0, u_plus = 0.0;
    std::optional<double> theta_minus, theta_plus;
    std::optional<double> s_bar;
  } ends;

  struct {
    double eps_w = 0.1, q_exp = 2.0;
  } smoothing;

  struct {
    int n_cells = 1024;
    std::optional<double> x_min, x_max;
  } grid;

  struct {
    double cfl_hyperbolic = 0.4, cfl_parabolic = 0.15;
    double t_end = 10.0;
    double snapshot_cadence = 0.0;
    double diag_cadence = 0.5;
    bool phase_field = true;
  } solver;

  PerturbationSet perturbation;

  struct {
    std::vector<double> probes;
    double chi_tol = 0.01;
    double v_env_lo = 1e-3, v_env_hi = 1e3;
    double theta_env_lo = 1e-3, theta_env_hi = 1e3;
    double energy_factor = 10.0;
    double entropy_slack = 1e-8;
    double convexity_tol = -1e-6;
  } diagnostics;
};

namespace cfgio {

inline json pert_to_json(const FieldPerturbation& p) {
  return json{{"shape", to_string(p.shape)},
              {"amplitude", p.amplitude},
              {"center", p.center},
              {"width", p.width}};
}

inline FieldPerturbation pert_from_json(const json& j) {
  FieldPerturbation p;
  p.shape = bump_shape_from_string(j.value("shape", "none"));
  p.amplitude = j.value("amplitude", 0.0);
  p.center = j.value("center", 0.0);
  p.width = j.value("width", 1.0);
  return p;
}

}  // namespace cfgio

inline json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["mode"] = c.mode;
  j["gas"] = {{"R", c.gas.R}, {"A", c.gas.A}, {"gamma", c.gas.gamma},
              {"nu", c.gas.nu}, {"kappa", c.gas.kappa}};
  json ends = {{"v_minus", c.ends.v_minus}, {"v_plus", c.ends.v_plus},
               {"u_minus", c.ends.u_minus}, {"u_plus", c.ends.u_plus}};
  if (c.ends.s_bar) ends["s_bar"] = *c.ends.s_bar;
  if (c.ends.theta_minus) ends["theta_minus"] = *c.ends.theta_minus;
  if (c.ends.theta_plus) ends["theta_plus"] = *c.ends.theta_plus;
  j["ends"] = ends;
  j["smoothing"] = {{"eps_w", c.smoothing.eps_w}, {"q_exp", c.smoothing.q_exp}};
  json grid = {{"n_cells", c.grid.n_cells}};
  if (c.grid.x_min) grid["x_min"] = *c.grid.x_min;
  if (c.grid.x_max) grid["x_max"] = *c.grid.x_max;
  j["grid"] = grid;
  j["solver"] = {{"cfl_hyperbolic", c.solver.cfl_hyperbolic},
                 {"cfl_parabolic", c.solver.cfl_parabolic},
                 {"t_end", c.solver.t_end},
                 {"snapshot_cadence", c.solver.snapshot_cadence},
                 {"diag_cadence", c.solver.diag_cadence},
                 {"phase_field", c.solver.phase_field}};
  j["perturbation"] = {{"phi", cfgio::pert_to_json(c.perturbation.phi)},
                       {"psi", cfgio::pert_to_json(c.perturbation.psi)},
                       {"zeta", cfgio::pert_to_json(c.perturbation.zeta)},
                       {"xi", cfgio::pert_to_json(c.perturbation.xi)}};
  j["diagnostics"] = {{"probes", c.diagnostics.probes},
                      {"chi_tol", c.diagnostics.chi_tol},
                      {"v_env_lo", c.diagnostics.v_env_lo},
                      {"v_env_hi", c.diagnostics.v_env_hi},
                      {"theta_env_lo", c.diagnostics.theta_env_lo},
                      {"theta_env_hi", c.diagnostics.theta_env_hi},
                      {"energy_factor", c.diagnostics.energy_factor},
                      {"entropy_slack", c.diagnostics.entropy_slack},
                      {"convexity_tol", c.diagnostics.convexity_tol}};
  return j;
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.name = j.value("name", c.name);
  c.seed = j.value("seed", c.seed);
  c.mode = j.value("mode", c.mode);
  if (j.contains("gas")) {
    const auto& g = j.at("gas");
    c.gas.R = g.value("R", c.gas.R);
    c.gas.A = g.value("A", c.gas.A);
    c.gas.gamma = g.value("gamma", c.gas.gamma);
    c.gas.nu = g.value("nu", c.gas.nu);
    c.gas.kappa = g.value("kappa", c.gas.kappa);
  }
  if (j.contains("ends")) {
    const auto& e = j.at("ends");
    c.ends.v_minus = e.value("v_minus", c.ends.v_minus);
    c.ends.v_plus = e.value("v_plus", c.ends.v_plus);
    c.ends.u_minus = e.value("u_minus", c.ends.u_minus);
    c.ends.u_plus = e.value("u_plus", c.ends.u_plus);
    if (e.contains("s_bar")) c.ends.s_bar = e.at("s_bar").get<double>();
    if (e.contains("theta_minus")) c.ends.theta_minus = e.at("theta_minus").get<double>();
    if (e.contains("theta_plus")) c.ends.theta_plus = e.at("theta_plus").get<double>();
  }
  if (j.contains("smoothing")) {
    const auto& s = j.at("smoothing");
    c.smoothing.eps_w = s.value("eps_w", c.smoothing.eps_w);
    c.smoothing.q_exp = s.value("q_exp", c.smoothing.q_exp);
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    c.grid.n_cells = g.value("n_cells", c.grid.n_cells);
    if (g.contains("x_min")) c.grid.x_min = g.at("x_min").get<double>();
    if (g.contains("x_max")) c.grid.x_max = g.at("x_max").get<double>();
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    c.solver.cfl_hyperbolic = s.value("cfl_hyperbolic", c.solver.cfl_hyperbolic);
    c.solver.cfl_parabolic = s.value("cfl_parabolic", c.solver.cfl_parabolic);
    c.solver.t_end = s.value("t_end", c.solver.t_end);
    c.solver.snapshot_cadence = s.value("snapshot_cadence", c.solver.snapshot_cadence);
    c.solver.diag_cadence = s.value("diag_cadence", c.solver.diag_cadence);
    c.solver.phase_field = s.value("phase_field", c.solver.phase_field);
  }
  if (j.contains("perturbation")) {
    const auto& p = j.at("perturbation");
    if (p.contains("phi")) c.perturbation.phi = cfgio::pert_from_json(p.at("phi"));
    if (p.contains("psi")) c.perturbation.psi = cfgio::pert_from_json(p.at("psi"));
    if (p.contains("zeta")) c.perturbation.zeta = cfgio::pert_from_json(p.at("zeta"));
    if (p.contains("xi")) c.perturbation.xi = cfgio::pert_from_json(p.at("xi"));
  }
  if (j.contains("diagnostics")) {
    const auto& d = j.at("diagnostics");
    c.diagnostics.probes = d.value("probes", c.diagnostics.probes);
    c.diagnostics.chi_tol = d.value("chi_tol", c.diagnostics.chi_tol);
    c.diagnostics.v_env_lo = d.value("v_env_lo", c.diagnostics.v_env_lo);
    c.diagnostics.v_env_hi = d.value("v_env_hi", c.diagnostics.v_env_hi);
    c.diagnostics.theta_env_lo = d.value("theta_env_lo", c.diagnostics.theta_env_lo);
    c.diagnostics.theta_env_hi = d.value("theta_env_hi", c.diagnostics.theta_env_hi);
    c.diagnostics.energy_factor = d.value("energy_factor", c.diagnostics.energy_factor);
    c.diagnostics.entropy_slack = d.value("entropy_slack", c.diagnostics.entropy_slack);
    c.diagnostics.convexity_tol = d.value("convexity_tol", c.diagnostics.convexity_tol);
  }
  return c;
}

// A config whose preconditions all checked out, with every derived quantity
// in place.
struct ResolvedExperiment {
  ExperimentConfig cfg;
  GasModel gas;
  EndStates ends;
  RiemannData rd;
  SmoothingParams sp;
  WaveProfile profile;
  Grid grid;
  SolverConfig solver;
  PerturbationSet perturbation;
  DiagThresholds thresholds;
  std::vector<double> probes;
  double dt0 = 0.0;
  std::vector<std::string> warnings;

  json resolved_json() const {
    json j = to_json(cfg);
    j["resolved"] = {{"s_bar", rd.s_bar},
                     {"theta_minus", ends.theta_minus},
                     {"theta_plus", ends.theta_plus},
                     {"v_m", rd.v_m},
                     {"u_m", rd.u_m},
                     {"delta", rd.delta},
                     {"K_q", sp.K_q},
                     {"t0", sp.t0},
                     {"fan1", {rd.fan1[0], rd.fan1[1]}},
                     {"fan3", {rd.fan3[0], rd.fan3[1]}},
                     {"x_min", grid.x_min},
                     {"x_max", grid.x_max},
                     {"dx", grid.dx},
                     {"dt0", dt0},
                     {"warnings", warnings}};
    return j;
  }
};

inline ResolvedExperiment resolve(const ExperimentConfig& cfg) {
  if (cfg.mode != "wave")
    throw std::invalid_argument("resolve: only wave-mode configs have a background profile");
  const GasModel gas(cfg.gas.R, cfg.gas.A, cfg.gas.gamma, cfg.gas.nu, cfg.gas.kappa);

  EndStates ends;
  ends.v_minus = cfg.ends.v_minus;
  ends.v_plus = cfg.ends.v_plus;
  ends.u_minus = cfg.ends.u_minus;
  ends.u_plus = cfg.ends.u_plus;
  if (cfg.ends.s_bar) {
    ends.theta_minus = gas.theta_from_vs(ends.v_minus, *cfg.ends.s_bar);
    ends.theta_plus = gas.theta_from_vs(ends.v_plus, *cfg.ends.s_bar);
  } else if (cfg.ends.theta_minus && cfg.ends.theta_plus) {
    ends.theta_minus = *cfg.ends.theta_minus;
    ends.theta_plus = *cfg.ends.theta_plus;
  } else {
    throw std::invalid_argument("ends: give either s_bar or both temperatures");
  }
  ends.validate(gas);

  const RiemannData rd = solve_intermediate(gas, ends);
  const SmoothingParams sp(cfg.smoothing.eps_w, cfg.smoothing.q_exp);
  WaveProfile profile(gas, ends, rd, sp);

  double x_min, x_max;
  if (cfg.grid.x_min && cfg.grid.x_max) {
    x_min = *cfg.grid.x_min;
    x_max = *cfg.grid.x_max;
  } else {
    const auto dom = profile.suggest_domain(cfg.solver.t_end);
    x_min = dom.first;
    x_max = dom.second;
  }
  const Grid grid(x_min, x_max, cfg.grid.n_cells);

  SolverConfig scfg;
  scfg.cfl_hyperbolic = cfg.solver.cfl_hyperbolic;
  scfg.cfl_parabolic = cfg.solver.cfl_parabolic;
  scfg.t_end = cfg.solver.t_end;
  scfg.snapshot_cadence = cfg.solver.snapshot_cadence;
  scfg.diag_cadence = cfg.solver.diag_cadence;
  scfg.phase_field = cfg.solver.phase_field;
  scfg.validate();

  PerturbationSet pert = cfg.perturbation;
  pert.validate();

  DiagThresholds th;
  th.chi_lo = -cfg.diagnostics.chi_tol;
  th.chi_hi = 1.0 + cfg.diagnostics.chi_tol;
  th.v_env_lo = cfg.diagnostics.v_env_lo;
  th.v_env_hi = cfg.diagnostics.v_env_hi;
  th.theta_env_lo = cfg.diagnostics.theta_env_lo;
  th.theta_env_hi = cfg.diagnostics.theta_env_hi;
  th.energy_factor = cfg.diagnostics.energy_factor;
  th.entropy_slack = cfg.diagnostics.entropy_slack;
  th.convexity_tol = cfg.diagnostics.convexity_tol;

  ResolvedExperiment r{cfg,  gas,  ends, rd, sp, std::move(profile), grid,
                       scfg, pert, th,   cfg.diagnostics.probes, 0.0, {}};

  const FieldState st0 = initial_state(r.profile, grid, pert);
  r.dt0 = compute_dt(gas, grid, st0, scfg);

  const double zw = std::sqrt(gas.gamma - 1.0);
  if (std::abs(pert.zeta.amplitude) > zw)
    r.warnings.push_back("theta perturbation amplitude exceeds sqrt(gamma-1) = " +
                         std::to_string(zw));
  return r;
}

// Built-in experiment presets; the JSON files under presets/ mirror these
// (guarded by a unit test).
inline ExperimentConfig make_preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "equilibrium") {
    c.gas.gamma = 1.4;
    c.ends = {1.0, 1.0, 0.0, 0.0, {}, {}, 0.0};
    c.grid.n_cells = 128;
    c.grid.x_min = -20.0;
    c.grid.x_max = 20.0;
    c.solver.t_end = 2.0;
    c.solver.diag_cadence = 0.5;
    c.solver.snapshot_cadence = 1.0;
  } else if (name == "chi_dip") {
    c.gas.gamma = 1.05;
    c.ends = {1.0, 1.0, 0.0, 0.0, {}, {}, 0.0};
    c.grid.n_cells = 512;
    c.grid.x_min = -30.0;
    c.grid.x_max = 30.0;
    c.solver.t_end = 20.0;
    c.solver.diag_cadence = 0.5;
    c.solver.snapshot_cadence = 5.0;
    c.perturbation.xi = {BumpShape::sech2, -0.5, 0.0, 2.0};
    c.diagnostics.probes = {-8.0, 0.0, 5.0};
  } else if (name == "riemann_ref" || name == "profile_ref") {
    c.gas.gamma = 1.4;
    c.ends = {1.0, 2.0, 0.0, 1.0, {}, {}, 0.0};
    c.smoothing = {0.1, 2.0};
    c.solver.t_end = 100.0;
  } else if (name == "stability_gamma105") {
    c.gas.gamma = 1.05;
    c.gas.nu = 1.0;
    c.gas.kappa = 6.0;
    c.ends = {1.0, 2.0, 0.0, 1.15, {}, {}, 0.0};
    c.smoothing = {0.3, 3.0};
    c.grid.n_cells = 4096;
    c.solver.t_end = 600.0;
    c.solver.diag_cadence = 0.5;
    c.solver.snapshot_cadence = 100.0;
    c.perturbation.phi = {BumpShape::bump, 0.4, -10.0, 8.0};
    c.perturbation.psi = {BumpShape::bump, 0.5, 15.0, 8.0};
    c.perturbation.zeta = {BumpShape::bump, 0.11, -25.0, 3.0};
    c.perturbation.xi = {BumpShape::sech2, -0.5, 0.0, 2.0};
    c.diagnostics.probes = {-30.0, -10.0, 5.0, 20.0};
  } else if (name == "vrepr_refine_coarse" || name == "vrepr_refine_fine") {
    c = make_preset("stability_gamma105");
    c.name = name;
    c.solver.t_end = 40.0;
    c.solver.snapshot_cadence = 20.0;
    if (name == "vrepr_refine_coarse") {
      c.grid.n_cells = 1024;
      c.solver.diag_cadence = 0.5;
    } else {
      c.grid.n_cells = 2048;
      c.solver.diag_cadence = 0.25;
    }
  } else if (name == "mms_ref") {
    c.mode = "mms";
    c.gas = {1.0, 1.0, 1.4, 0.7, 1.2};
    c.grid.n_cells = 1024;
    c.grid.x_min = 0.0;
    c.grid.x_max = 2.0 * 3.14159265358979323846;
    c.solver.t_end = 0.1;
    c.solver.diag_cadence = 0.0;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return c;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "equilibrium",    "chi_dip",          "riemann_ref",
      "profile_ref",    "stability_gamma105", "vrepr_refine_coarse",
      "vrepr_refine_fine", "mms_ref"};
  return names;
}

}  // namespace nsac
