#pragma once

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nsac/runner.hpp"

namespace nsac {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

namespace verify_detail {

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

inline std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

}  // namespace verify_detail

// Criterion 1: thermodynamic closure. Round-trip s <-> theta at 1e-12 over
// 1000 random states per gamma, and FD order 2 for p~_v.
inline CriterionResult criterion_thermo(std::uint64_t seed) {
  verify_detail::Timer timer;
  CriterionResult r{1, "thermodynamic-closure", true, "", 0.0};
  double worst = 0.0;
  for (double gamma : {1.05, 1.4, 2.0}) {
    const GasModel g(1.0, 1.0, gamma, 1.0, 1.0);
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(gamma * 1000));
    std::uniform_real_distribution<double> dist(0.1, 10.0);
    for (int k = 0; k < 1000; ++k) {
      const double v = dist(rng), theta = dist(rng);
      const double s = g.entropy_from_vtheta(v, theta);
      const double back = g.theta_from_vs(v, s);
      worst = std::max(worst, std::abs(back - theta) / theta);
      const double p1 = g.p_tilde(v, s);
      const double p2 = g.pressure(v, back);
      worst = std::max(worst, std::abs(p1 - p2) / p1);
    }
  }
  if (worst > 1e-12) r.pass = false;

  const GasModel g(1.0, 1.0, 1.4, 1.0, 1.0);
  double prev_err = 0.0, worst_order = 3.0;
  const double exact = g.p_tilde_v(1.7, 0.3);
  for (int k = 0; k < 4; ++k) {
    const double h = 0.05 / (1 << k);
    const double fd = (g.p_tilde(1.7 + h, 0.3) - g.p_tilde(1.7 - h, 0.3)) / (2.0 * h);
    const double err = std::abs(fd - exact);
    if (k > 0) worst_order = std::min(worst_order, std::log2(prev_err / err));
    prev_err = err;
  }
  if (worst_order < 1.9) r.pass = false;
  r.details = "round-trip worst rel err " + verify_detail::fmt_g(worst) + ", FD order " +
              verify_detail::fmt_g(worst_order);
  r.seconds = timer.seconds();
  return r;
}

// Criterion 2: Riemann construction on the reference data set.
inline CriterionResult criterion_riemann(const std::string& out_dir) {
  verify_detail::Timer timer;
  CriterionResult r{2, "riemann-construction", true, "", 0.0};
  const ExperimentConfig cfg = make_preset("riemann_ref");
  const GasModel gas(cfg.gas.R, cfg.gas.A, cfg.gas.gamma, cfg.gas.nu, cfg.gas.kappa);
  const EndStates ends = EndStates::isentropic(gas, cfg.ends.v_minus, cfg.ends.u_minus,
                                               gas.theta_from_vs(cfg.ends.v_minus, 0.0),
                                               cfg.ends.v_plus, cfg.ends.u_plus);
  const RiemannData d = solve_intermediate(gas, ends);

  const double du = ends.u_plus - ends.u_minus;
  const double res = rarefaction_integral(gas, ends.v_minus, d.v_m, d.s_bar) +
                     rarefaction_integral(gas, ends.v_plus, d.v_m, d.s_bar) - du;
  if (std::abs(res) > 1e-12 * (1.0 + std::abs(du))) r.pass = false;

  double worst_fan = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double f = (k + 0.5) / 100.0;
    const double xi1 = d.fan1[0] + f * (d.fan1[1] - d.fan1[0]);
    worst_fan = std::max(worst_fan, std::abs(gas.lambda(WaveFamily::one,
                                                        riemann_eval(gas, d, ends, xi1).v,
                                                        d.s_bar) - xi1));
    const double xi3 = d.fan3[0] + f * (d.fan3[1] - d.fan3[0]);
    worst_fan = std::max(worst_fan, std::abs(gas.lambda(WaveFamily::three,
                                                        riemann_eval(gas, d, ends, xi3).v,
                                                        d.s_bar) - xi3));
  }
  if (worst_fan > 1e-12) r.pass = false;

  double worst_jump = 0.0;
  for (double edge : {d.fan1[0], d.fan1[1], d.fan3[0], d.fan3[1]}) {
    const double h = 1e-8;
    const RiemannState a = riemann_eval(gas, d, ends, edge - h);
    const RiemannState b = riemann_eval(gas, d, ends, edge + h);
    worst_jump = std::max(worst_jump, std::abs(a.v - b.v) + std::abs(a.u - b.u));
  }
  if (worst_jump > 1e-6) r.pass = false;

  // degenerate delta = 0 data collapses to the constant state, bit-exactly
  const EndStates flat{1.3, 1.3, 0.2, 0.2, 0.9, 0.9};
  const RiemannData dflat = solve_intermediate(gas, flat);
  bool exact = dflat.delta == 0.0;
  for (double xi : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    const RiemannState w = riemann_eval(gas, dflat, flat, xi);
    exact = exact && w.v == 1.3 && w.u == 0.2;
  }
  if (!exact) r.pass = false;

  std::filesystem::create_directories(out_dir);
  {
    CsvWriter csv(out_dir + "/riemann_fan.csv", {"xi", "V", "U", "Theta", "S"});
    const double lo = d.fan1[0] - 0.3, hi = d.fan3[1] + 0.3;
    for (int k = 0; k <= 400; ++k) {
      const double xi = lo + (hi - lo) * k / 400.0;
      const RiemannState w = riemann_eval(gas, d, ends, xi);
      csv.row(xi, w.v, w.u, w.theta, w.s);
    }
  }
  r.details = "v_m residual " + verify_detail::fmt_g(std::abs(res)) + ", fan self-similarity " +
              verify_detail::fmt_g(worst_fan) + ", edge jump " + verify_detail::fmt_g(worst_jump);
  r.seconds = timer.seconds();
  return r;
}

// Criterion 3: smoothed Burgers / profile structure.
inline CriterionResult criterion_profile(const std::string& out_dir, std::uint64_t seed) {
  verify_detail::Timer timer;
  CriterionResult r{3, "burgers-profile-structure", true, "", 0.0};
  const ExperimentConfig cfg = make_preset("profile_ref");
  const ResolvedExperiment rx = resolve(cfg);
  const WaveProfile& prof = rx.profile;
  const SmoothingParams& sp = rx.sp;

  // strict monotonicity of the Burgers slopes at 1e4 sampled points
  std::mt19937_64 rng(seed + 3);
  std::uniform_real_distribution<double> xr(-1.0, 1.0);
  long bad_slope = 0;
  for (double t : {10.0, 100.0, 1000.0, 10000.0}) {
    for (int k = 0; k < 1250; ++k) {
      for (auto fam : {WaveFamily::one, WaveFamily::three}) {
        const double wm = prof.w_edge(fam, 0), wp = prof.w_edge(fam, 1);
        const double span = 1.5 * (std::max(std::abs(wm), std::abs(wp)) * t + 10.0 / sp.eps_w);
        const BurgersValue b = burgers_eval(sp, wm, wp, t, xr(rng) * span);
        if (!(b.w_x > 0.0) || !(b.w > wm) || !(b.w < wp)) ++bad_slope;
      }
    }
  }
  if (bad_slope > 0) r.pass = false;

  // peak slope: sup_x w_x non-increasing across decades (5% slack) and
  // t sup_x w_x bounded by 1 (same slack)
  double worst_tsup = 0.0;
  bool sup_monotone = true;
  for (auto fam : {WaveFamily::one, WaveFamily::three}) {
    const double wm = prof.w_edge(fam, 0), wp = prof.w_edge(fam, 1);
    double prev_sup = 1e300;
    for (double t : {10.0, 100.0, 1000.0, 10000.0}) {
      double sup = 0.0;
      for (double y = -50.0 / sp.eps_w; y <= 50.0 / sp.eps_w; y += 0.02 / sp.eps_w) {
        const double s = burgers_initial_slope(sp, wm, wp, y);
        sup = std::max(sup, s / (1.0 + t * s));
      }
      if (sup > prev_sup * 1.05) sup_monotone = false;
      worst_tsup = std::max(worst_tsup, t * sup);
      prev_sup = sup;
    }
  }
  if (!sup_monotone || worst_tsup > 1.05) r.pass = false;

  // V_t = U_x > 0 pointwise
  std::uniform_real_distribution<double> tr(0.0, 2000.0);
  double worst_vtux = 0.0;
  bool ux_positive = true;
  for (int k = 0; k < 1000; ++k) {
    const double t = tr(rng);
    const double x = xr(rng) * 1.3 * (t + sp.t0 + 30.0);
    const ProfilePoint pt = prof.eval(t, x);
    worst_vtux = std::max(worst_vtux, std::abs(pt.Vt - pt.Ux));
    ux_positive = ux_positive && pt.Ux > 0.0;
  }
  if (worst_vtux > 1e-8 || !ux_positive) r.pass = false;

  // long-time convergence: sup distance to the exact fan strictly decreasing
  double prev_sup = 1e300;
  bool decades_decreasing = true;
  for (double t : {100.0, 1000.0, 10000.0}) {
    const double span = 1.4 * (t + sp.t0);
    std::vector<double> xs;
    for (int k = 0; k <= 2000; ++k) xs.push_back(-span + 2.0 * span * k / 2000.0);
    const auto pts = prof.eval_grid(t, xs);
    double sup = 0.0;
    for (size_t k = 0; k < xs.size(); ++k) {
      const RiemannState w = riemann_eval(rx.gas, rx.rd, rx.ends, xs[k] / t);
      sup = std::max({sup, std::abs(pts[k].V - w.v), std::abs(pts[k].U - w.u),
                      std::abs(pts[k].Th - w.theta)});
    }
    if (!(sup < prev_sup)) decades_decreasing = false;
    prev_sup = sup;
  }
  if (!decades_decreasing) r.pass = false;

  std::filesystem::create_directories(out_dir);
  {
    CsvWriter csv(out_dir + "/profile_snapshot.csv",
                  {"x", "V", "U", "Theta", "S", "V_x", "U_x", "g", "q", "r"});
    const double t = 10.0;
    const double span = 1.3 * (t + sp.t0);
    std::vector<double> xs;
    for (int k = 0; k <= 512; ++k) xs.push_back(-span + 2.0 * span * k / 512.0);
    const auto pts = prof.eval_grid(t, xs);
    for (size_t k = 0; k < xs.size(); ++k) {
      const ProfileResiduals res = prof.residuals(pts[k]);
      csv.row(xs[k], pts[k].V, pts[k].U, pts[k].Th, pts[k].S, pts[k].Vx, pts[k].Ux, res.g,
              res.q_res, res.r_res);
    }
  }
  r.details = "slope violations " + std::to_string(bad_slope) + ", max t*sup w_x " +
              verify_detail::fmt_g(worst_tsup) + ", |V_t-U_x| " +
              verify_detail::fmt_g(worst_vtux) + ", fan sup dist @1e4 " +
              verify_detail::fmt_g(prev_sup);
  r.seconds = timer.seconds();
  return r;
}

// Criterion 4: solver verification (MMS order, exact equilibrium, chi = 1
// reduction).
inline CriterionResult criterion_solver() {
  verify_detail::Timer timer;
  CriterionResult r{4, "solver-verification", true, "", 0.0};
  const ExperimentConfig cfg = make_preset("mms_ref");

  std::array<std::array<double, 4>, 3> errs{};
  int lev = 0;
  for (int n : {256, 512, 1024}) errs[lev++] = run_mms_level(cfg, n);
  double worst_order = 10.0;
  for (int f = 0; f < 4; ++f) {
    worst_order = std::min(worst_order, std::log2(errs[0][f] / errs[1][f]));
    worst_order = std::min(worst_order, std::log2(errs[1][f] / errs[2][f]));
  }
  if (worst_order < 1.9) r.pass = false;

  // equilibrium over 1e4 steps
  const GasModel gas(1.0, 1.0, 1.4, 1.0, 1.0);
  const Grid grid(-5.0, 5.0, 128);
  FieldState st(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) {
    st.v[i] = 1.3;
    st.theta[i] = 1.1;
  }
  SolverConfig scfg;
  scfg.t_end = 1e9;
  const std::array<double, 4> bc{1.3, 0.0, 1.1, 1.0};
  Stepper stepper(gas, grid, scfg, [bc](double, double) { return bc; });
  for (int k = 0; k < 10000; ++k) stepper.step(st);
  double eq_drift = 0.0;
  for (int i = 0; i < grid.n_cells; ++i)
    eq_drift = std::max({eq_drift, std::abs(st.v[i] - 1.3), std::abs(st.u[i]),
                         std::abs(st.theta[i] - 1.1), std::abs(st.chi[i] - 1.0)});
  if (eq_drift > 1e-12) r.pass = false;

  // chi = 1 reduction against the pure Navier-Stokes path
  const Grid g2(-20.0, 20.0, 512);
  FieldState init(g2.n_cells);
  for (int i = 0; i < g2.n_cells; ++i) {
    const double x = g2.x(i);
    init.v[i] = 1.0 + 0.3 * std::exp(-x * x / 8.0);
    init.u[i] = 0.4 * std::exp(-(x - 2.0) * (x - 2.0) / 6.0);
    init.theta[i] = 1.0 + 0.2 * std::exp(-(x + 3.0) * (x + 3.0) / 10.0);
  }
  const std::array<double, 4> bl{init.v[0], init.u[0], init.theta[0], 1.0};
  const std::array<double, 4> br{init.v[g2.n_cells - 1], init.u[g2.n_cells - 1],
                                 init.theta[g2.n_cells - 1], 1.0};
  const double xl = g2.x(0);
  const BoundaryFn bfn = [=](double, double x) { return x == xl ? bl : br; };
  SolverConfig c1;
  c1.t_end = 1.0;
  c1.diag_cadence = 0.0;
  FieldState full = init, reduced = init;
  {
    Stepper s(gas, g2, c1, bfn);
    run_loop(s, c1, full, {});
  }
  SolverConfig c2 = c1;
  c2.phase_field = false;
  {
    Stepper s(gas, g2, c2, bfn);
    run_loop(s, c2, reduced, {});
  }
  double red_diff = 0.0;
  for (int i = 0; i < g2.n_cells; ++i)
    red_diff = std::max({red_diff, std::abs(full.v[i] - reduced.v[i]),
                         std::abs(full.u[i] - reduced.u[i]),
                         std::abs(full.theta[i] - reduced.theta[i])});
  if (red_diff > 1e-10) r.pass = false;

  r.details = "MMS worst order " + verify_detail::fmt_g(worst_order) + ", equilibrium drift " +
              verify_detail::fmt_g(eq_drift) + ", reduction gap " +
              verify_detail::fmt_g(red_diff);
  r.seconds = timer.seconds();
  return r;
}

struct StabilityArtifacts {
  RunOutcome outcome;
  double slack_rate = 0.0;  // allowed entropy drop rate
  bool ready = false;
};

inline StabilityArtifacts run_stability(const std::string& out_dir) {
  const ExperimentConfig cfg = make_preset("stability_gamma105");
  const ResolvedExperiment rx = resolve(cfg);
  StabilityArtifacts art;
  art.outcome = run_experiment(rx, out_dir, true);
  art.slack_rate = rx.thresholds.entropy_slack * rx.grid.n_cells * rx.grid.dx;
  art.ready = true;
  return art;
}

// Criterion 5: the gamma = 1.05 stability experiment.
inline CriterionResult criterion_stability(const StabilityArtifacts& art, double runtime_s) {
  CriterionResult r{5, "stability-experiment", true, "", runtime_s};
  const RunOutcome& o = art.outcome;
  if (o.aborted) r.pass = false;                              // (a)
  if (o.flags.chi) r.pass = false;                            // (b)
  const auto ratio = [](double fin, double mx) { return mx > 0.0 ? fin / mx : 0.0; };
  double worst_ratio = 0.0;
  if (!o.reports.empty()) {
    const auto& last = o.reports.back().norms;
    worst_ratio = std::max({ratio(last.phi.linf, o.run_max.phi.linf),
                            ratio(last.psi.linf, o.run_max.psi.linf),
                            ratio(last.zeta.linf, o.run_max.zeta.linf),
                            ratio(last.xi.linf, o.run_max.xi.linf),
                            ratio(last.varphi.linf, o.run_max.varphi.linf)});
  } else {
    worst_ratio = 1e300;
  }
  if (worst_ratio > 0.2) r.pass = false;                      // (c)
  if (!o.energy_bound_ok || !o.functionals_nonnegative) r.pass = false;  // (d)
  r.details = std::string(o.aborted ? "ABORTED, " : "") + "chi in [" +
              verify_detail::fmt_g(o.bounds.chi_min) + ", " +
              verify_detail::fmt_g(o.bounds.chi_max) + "], worst decay ratio " +
              verify_detail::fmt_g(worst_ratio) + ", C_obs " + verify_detail::fmt_g(o.C_obs);
  return r;
}

// Criterion 6: volume representation cross-check and its refinement behavior.
inline CriterionResult criterion_volume_repr(const StabilityArtifacts& art, const std::string& out_dir) {
  verify_detail::Timer timer;
  CriterionResult r{6, "volume-representation", true, "", 0.0};
  int good = 0;
  double worst = 0.0;
  for (const auto& p : art.outcome.vrepr) {
    if (p.rel_err <= 0.03) ++good;
    worst = std::max(worst, p.rel_err);
  }
  if (good < 3) r.pass = false;

  double coarse_err = 0.0, fine_err = 0.0;
  for (const char* name : {"vrepr_refine_coarse", "vrepr_refine_fine"}) {
    const ResolvedExperiment rx = resolve(make_preset(name));
    const RunOutcome o = run_experiment(rx, out_dir + "/" + name, false);
    double m = 0.0;
    for (const auto& p : o.vrepr) m = std::max(m, p.rel_err);
    (std::string(name) == "vrepr_refine_coarse" ? coarse_err : fine_err) = m;
  }
  if (!(fine_err < coarse_err)) r.pass = false;

  r.details = std::to_string(good) + "/" + std::to_string(art.outcome.vrepr.size()) +
              " probes within 3% (worst " + verify_detail::fmt_g(worst) + "), refinement " +
              verify_detail::fmt_g(coarse_err) + " -> " + verify_detail::fmt_g(fine_err);
  r.seconds = timer.seconds();
  return r;
}

// Criterion 7: entropy monotonicity along the stability run.
inline CriterionResult criterion_entropy(const StabilityArtifacts& art) {
  CriterionResult r{7, "entropy-monotonicity", true, "", 0.0};
  if (art.outcome.entropy_worst_rate < -art.slack_rate) r.pass = false;
  r.details = "worst d/dt of int(s-S) = " + verify_detail::fmt_g(art.outcome.entropy_worst_rate) +
              " (slack " + verify_detail::fmt_g(art.slack_rate) + ")";
  return r;
}

// Small deterministic simulations included in the quick level so that byte
// comparison has real run output to look at.
inline void quick_smoke_runs(const std::string& out_dir) {
  for (const char* name : {"equilibrium", "chi_dip"}) {
    const ResolvedExperiment rx = resolve(make_preset(name));
    run_experiment(rx, out_dir + "/" + name, true);
  }
}

inline std::vector<CriterionResult> run_verify(const std::string& level,
                                               const std::string& out_dir, std::uint64_t seed) {
  std::vector<CriterionResult> results;
  results.push_back(criterion_thermo(seed));
  results.push_back(criterion_riemann(out_dir));
  results.push_back(criterion_profile(out_dir, seed));
  if (level == "full") {
    results.push_back(criterion_solver());
    verify_detail::Timer stab_timer;
    const StabilityArtifacts art = run_stability(out_dir + "/stability");
    const double stab_s = stab_timer.seconds();
    results.push_back(criterion_stability(art, stab_s));
    results.push_back(criterion_volume_repr(art, out_dir));
    results.push_back(criterion_entropy(art));
  } else {
    quick_smoke_runs(out_dir);
  }
  return results;
}

inline json verdict_json(const std::vector<CriterionResult>& results) {
  json j;
  j["criteria"] = json::array();
  bool all = true;
  for (const auto& r : results) {
    j["criteria"].push_back({{"id", r.id},
                             {"name", r.name},
                             {"pass", r.pass},
                             {"details", r.details},
                             {"seconds", r.seconds}});
    all = all && r.pass;
  }
  j["all_pass"] = all;
  return j;
}

}  // namespace nsac
