#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nsac/config.hpp"
#include "nsac/csvio.hpp"
#include "nsac/diagnostics.hpp"
#include "nsac/mms.hpp"

namespace nsac {

inline const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {
      "t",
      "l2_phi", "h1_phi", "h2_phi", "linf_phi",
      "l2_psi", "h1_psi", "h2_psi", "linf_psi",
      "l2_zeta", "h1_zeta", "h2_zeta", "linf_zeta",
      "l2_xi", "h1_xi", "h2_xi", "linf_xi",
      "l2_varphi", "h1_varphi", "h2_varphi", "linf_varphi",
      "l2_zeta_weighted",
      "E", "D", "intD", "int_s_minus_S", "cvx", "cvx_min",
      "v_min", "v_max", "theta_min", "theta_max", "chi_min", "chi_max",
      "chi_flag", "v_flag", "theta_flag",
      "vrepr_rel_err", "vrepr_err_est",
      "energy_norm_C", "energy_norm_ok", "energy_bound_lhs", "energy_bound_ok"};
  return cols;
}

inline void write_diagnostics_row(CsvWriter& csv, const DiagnosticsReport& r) {
  const auto f = [](const FieldNorms& n) { return std::vector<double>{n.l2, n.h1, n.h2, n.linf}; };
  std::vector<double> row{r.t};
  for (const auto& n : {r.norms.phi, r.norms.psi, r.norms.zeta, r.norms.xi, r.norms.varphi})
    for (double x : f(n)) row.push_back(x);
  row.insert(row.end(),
             {r.norms.zeta_weighted_l2, r.E, r.D, r.intD, r.int_s_minus_S, r.cvx, r.cvx_min,
              r.bounds.v_min, r.bounds.v_max, r.bounds.theta_min, r.bounds.theta_max,
              r.bounds.chi_min, r.bounds.chi_max, double(r.flags.chi), double(r.flags.v),
              double(r.flags.theta), r.vrepr_rel_err, r.vrepr_err_est, r.energy_norm_C,
              double(r.energy_norm_ok), r.energy_bound_lhs, double(r.energy_bound_ok)});
  csv.row_values(row);
}

inline void write_fields_csv(const std::string& path, const GasModel& gas, const Grid& grid,
                             const FieldState& st) {
  CsvWriter csv(path, {"t", "x", "v", "u", "theta", "chi", "s", "mu"});
  const auto s = st.entropy(gas);
  const auto mu = chemical_potential(gas, grid, st);
  for (int i = 0; i < grid.n_cells; ++i)
    csv.row(st.t, grid.x(i), st.v[i], st.u[i], st.theta[i], st.chi[i], s[i], mu[i]);
}

struct RunOutcome {
  bool aborted = false;
  std::string abort_reason;
  int abort_cell = -1;
  double abort_time = 0.0;
  FieldState final_state;
  std::vector<DiagnosticsReport> reports;
  double E0 = 0.0, C_obs = 0.0;
  bool energy_bound_ok = true, energy_norm_ok = true;
  bool functionals_nonnegative = true;
  NormTable run_max;
  BoundsSnapshot bounds{};
  BoundsFlags flags{};
  std::vector<VolumeRepresentation::Result> vrepr;
  double cvx_min = 0.0;
  double entropy_worst_rate = 0.0;  // min over ticks of d/dt of int (s - S) dx
};

// Execute a resolved wave experiment, streaming diagnostics and snapshots to
// out_dir. A positivity breach aborts but leaves all output written so far.
inline RunOutcome run_experiment(const ResolvedExperiment& r, const std::string& out_dir,
                                 bool write_fields = true) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream cfgout(out_dir + "/config.resolved");
    cfgout << r.resolved_json().dump(2) << "\n";
  }

  RunOutcome out;
  DiagnosticsEngine engine(r.gas, r.grid, r.profile, r.thresholds, r.probes);
  CsvWriter diag_csv(out_dir + "/diagnostics.csv", diagnostics_columns());

  int snap_idx = 0;
  double prev_smS = 0.0, prev_t = 0.0;
  bool have_prev = false;

  RunCallbacks cb;
  cb.on_diag = [&](const FieldState& st) {
    const DiagnosticsReport rep = engine.tick(st);
    write_diagnostics_row(diag_csv, rep);
    out.reports.push_back(rep);
    if (rep.E < -1e-14 || rep.D < -1e-14) out.functionals_nonnegative = false;
    if (have_prev && rep.t > prev_t)
      out.entropy_worst_rate =
          std::min(out.entropy_worst_rate, (rep.int_s_minus_S - prev_smS) / (rep.t - prev_t));
    prev_smS = rep.int_s_minus_S;
    prev_t = rep.t;
    have_prev = true;
  };
  cb.on_snapshot = [&](const FieldState& st) {
    if (!write_fields) return;
    char name[32];
    std::snprintf(name, sizeof(name), "fields_%04d.csv", snap_idx++);
    write_fields_csv(out_dir + "/" + name, r.gas, r.grid, st);
  };
  long n_steps = 0;
  double dt_first = 0.0, dt_min = 0.0, dt_max = 0.0, dt_last = 0.0;
  cb.on_step = [&](const StepInfo& info) {
    if (n_steps == 0) {
      dt_first = dt_min = dt_max = info.dt;
    } else {
      dt_min = std::min(dt_min, info.dt);
      dt_max = std::max(dt_max, info.dt);
    }
    dt_last = info.dt;
    ++n_steps;
  };

  FieldState st = initial_state(r.profile, r.grid, r.perturbation);
  Stepper stepper(r.gas, r.grid, r.solver, profile_boundary(r.profile));
  stepper.apply_boundary(st, 0.0);
  try {
    run_loop(stepper, r.solver, st, cb);
  } catch (const PositivityBreach& e) {
    out.aborted = true;
    out.abort_reason = e.what();
    out.abort_cell = e.cell;
    out.abort_time = e.time;
  }
  out.final_state = st;
  out.E0 = engine.E0();
  out.C_obs = engine.observed_energy_constant();
  out.energy_bound_ok = engine.energy_bound_all_ok();
  out.energy_norm_ok = engine.energy_norm_all_ok();
  out.run_max = engine.running_linf_max();
  out.bounds = engine.bounds_monitor().extremes();
  out.flags = engine.bounds_monitor().flags(r.thresholds);
  if (!engine.volume_repr().empty()) out.vrepr = engine.volume_repr().results();
  out.cvx_min = engine.convexity_min();

  json summary;
  summary["aborted"] = out.aborted;
  if (out.aborted) {
    summary["abort"] = {{"reason", out.abort_reason},
                        {"cell", out.abort_cell},
                        {"time", out.abort_time}};
  }
  summary["t_final"] = st.t;
  summary["E0"] = out.E0;
  summary["observed_energy_constant"] = out.C_obs;
  summary["energy_bound_ok"] = out.energy_bound_ok;
  summary["energy_norm_ok"] = out.energy_norm_ok;
  summary["functionals_nonnegative"] = out.functionals_nonnegative;
  summary["bounds"] = {{"v_min", out.bounds.v_min},     {"v_max", out.bounds.v_max},
                       {"theta_min", out.bounds.theta_min}, {"theta_max", out.bounds.theta_max},
                       {"chi_min", out.bounds.chi_min}, {"chi_max", out.bounds.chi_max}};
  summary["flags"] = {{"chi", out.flags.chi}, {"v", out.flags.v}, {"theta", out.flags.theta}};
  summary["convexity_min"] = out.cvx_min;
  summary["convexity_ok"] = out.cvx_min >= r.thresholds.convexity_tol;
  summary["entropy_worst_rate"] = out.entropy_worst_rate;
  summary["dt"] = {{"steps", n_steps}, {"first", dt_first}, {"min", dt_min},
                   {"max", dt_max},    {"last", dt_last}};
  summary["grid"] = {{"x_min", r.grid.x_min}, {"x_max", r.grid.x_max},
                     {"n_cells", r.grid.n_cells}, {"dx", r.grid.dx}};
  if (!out.reports.empty()) {
    const auto& last = out.reports.back();
    summary["final_linf"] = {{"phi", last.norms.phi.linf},
                             {"psi", last.norms.psi.linf},
                             {"zeta", last.norms.zeta.linf},
                             {"xi", last.norms.xi.linf},
                             {"varphi", last.norms.varphi.linf}};
    summary["runmax_linf"] = {{"phi", out.run_max.phi.linf},
                              {"psi", out.run_max.psi.linf},
                              {"zeta", out.run_max.zeta.linf},
                              {"xi", out.run_max.xi.linf},
                              {"varphi", out.run_max.varphi.linf}};
  }
  json jj = json::array();
  for (const auto& p : out.vrepr)
    jj.push_back({{"x", p.x},
                  {"v_repr", p.v_repr},
                  {"v_solver", p.v_solver},
                  {"rel_err", p.rel_err},
                  {"err_estimate", p.err_estimate}});
  summary["volume_representation"] = jj;
  for (const auto& w : r.warnings) summary["warnings"].push_back(w);
  std::ofstream sj(out_dir + "/summary.json");
  sj << summary.dump(2) << "\n";
  return out;
}

// Single-level manufactured-solution run; reports the final L2 errors.
inline std::array<double, 4> run_mms_level(const ExperimentConfig& cfg, int n_cells) {
  const GasModel gas(cfg.gas.R, cfg.gas.A, cfg.gas.gamma, cfg.gas.nu, cfg.gas.kappa);
  const ManufacturedSolution ms{gas.R, gas.gamma, gas.nu, gas.kappa};
  const Grid grid(cfg.grid.x_min.value_or(0.0),
                  cfg.grid.x_max.value_or(2.0 * 3.14159265358979323846), n_cells);
  SolverConfig scfg;
  scfg.cfl_hyperbolic = cfg.solver.cfl_hyperbolic;
  scfg.cfl_parabolic = cfg.solver.cfl_parabolic;
  scfg.t_end = cfg.solver.t_end;
  scfg.diag_cadence = 0.0;
  scfg.snapshot_cadence = 0.0;
  FieldState st = ms.initial(grid);
  Stepper stepper(gas, grid, scfg, ms.boundary(), ms.source());
  stepper.apply_boundary(st, 0.0);
  run_loop(stepper, scfg, st, {});
  return ms.l2_error(grid, st);
}

}  // namespace nsac
