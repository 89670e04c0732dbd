#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "nsac/errors.hpp"
#include "nsac/grid.hpp"
#include "nsac/perturbation.hpp"
#include "nsac/profile.hpp"

namespace nsac {

// Boundary closure: values of (v, u, theta, chi) at a boundary cell center.
using BoundaryFn = std::function<std::array<double, 4>(double t, double x)>;
// Optional manufactured source, as additive contributions to d/dt of (v, u, theta, chi).
using SourceFn = std::function<std::array<double, 4>(double t, double x)>;

struct SolverConfig {
  double cfl_hyperbolic = 0.4;
  double cfl_parabolic = 0.15;
  double t_end = 10.0;
  double diag_cadence = 0.5;      // diagnostics tick spacing (0 disables)
  double snapshot_cadence = 0.0;  // field CSV spacing (0 disables)
  bool phase_field = true;
  long max_steps = 200'000'000;

  void validate() const {
    if (!(cfl_hyperbolic > 0.0 && cfl_hyperbolic <= 1.0))
      throw std::invalid_argument("SolverConfig: cfl_hyperbolic must be in (0,1]");
    if (!(cfl_parabolic > 0.0 && cfl_parabolic <= 1.0))
      throw std::invalid_argument("SolverConfig: cfl_parabolic must be in (0,1]");
    if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end must be > 0");
  }
};

// mu = -eps (chi_x / v)_x + (chi^3 - chi)/eps, with the second-order
// face-difference stencil inside and one-sided second-order stencils at the
// two boundary cells. The interface thickness eps is 1 throughout this study.
inline std::vector<double> chemical_potential(const GasModel& gas, const Grid& grid,
                                              const FieldState& st) {
  const int n = grid.n_cells;
  const double dx = grid.dx;
  const double eps = gas.eps_interface;
  const auto& v = st.v;
  const auto& c = st.chi;
  const auto well = [eps](double chi) { return chi * (chi * chi - 1.0) / eps; };
  std::vector<double> mu(n);
  for (int i = 1; i < n - 1; ++i) {
    const double gp = (c[i + 1] - c[i]) / (dx * 0.5 * (v[i] + v[i + 1]));
    const double gm = (c[i] - c[i - 1]) / (dx * 0.5 * (v[i - 1] + v[i]));
    mu[i] = -eps * (gp - gm) / dx + well(c[i]);
  }
  // one-sided closures, only ever used for reporting
  auto wcell = [&](int i, double cx) { return cx / v[i]; };
  {
    const double w0 = wcell(0, (-3.0 * c[0] + 4.0 * c[1] - c[2]) / (2.0 * dx));
    const double w1 = wcell(1, (c[2] - c[0]) / (2.0 * dx));
    const double w2 = wcell(2, (c[3] - c[1]) / (2.0 * dx));
    mu[0] = -eps * (-3.0 * w0 + 4.0 * w1 - w2) / (2.0 * dx) + well(c[0]);
  }
  {
    const int m = n - 1;
    const double w0 = wcell(m, (3.0 * c[m] - 4.0 * c[m - 1] + c[m - 2]) / (2.0 * dx));
    const double w1 = wcell(m - 1, (c[m] - c[m - 2]) / (2.0 * dx));
    const double w2 = wcell(m - 2, (c[m - 1] - c[m - 3]) / (2.0 * dx));
    mu[m] = -eps * (3.0 * w0 - 4.0 * w1 + w2) / (2.0 * dx) + well(c[m]);
  }
  return mu;
}

struct RhsScratch {
  std::vector<double> p;
};

// Semi-discrete right-hand side of the Lagrangian system:
//   v_t = u_x
//   u_t = -p_x + nu (u_x/v)_x - (eps/2)(chi_x^2/v^2)_x
//   chi_t = -v mu
//   C_v theta_t = -p u_x + kappa (theta_x/v)_x + nu u_x^2/v + v mu^2
// Second-order centered stencils; diffusive and capillary fluxes live on faces
// with face-averaged v. Boundary-cell derivatives are zero (Dirichlet closure).
// Returns the telescoped interior flux of u for the discrete mass ledger.
inline double rhs(const GasModel& gas, const Grid& grid, const FieldState& st, bool phase_field,
                  const SourceFn* source, FieldState& deriv, RhsScratch& ws) {
  const int n = grid.n_cells;
  const double dx = grid.dx;
  const double inv_dx = 1.0 / dx;
  const double Cv = gas.C_v();
  const double nu = gas.nu, kap = gas.kappa, R = gas.R;
  const double eps = gas.eps_interface;

  const double* v = st.v.data();
  const double* u = st.u.data();
  const double* th = st.theta.data();
  const double* c = st.chi.data();

  for (int i = 0; i < n; ++i) {
    if (!(v[i] > 0.0)) throw PositivityBreach("v", i, st.t, v[i]);
    if (!(th[i] > 0.0)) throw PositivityBreach("theta", i, st.t, th[i]);
  }

  ws.p.resize(n);
  double* p = ws.p.data();
  for (int i = 0; i < n; ++i) p[i] = R * th[i] / v[i];

  double* dv = deriv.v.data();
  double* du = deriv.u.data();
  double* dth = deriv.theta.data();
  double* dc = deriv.chi.data();
  dv[0] = du[0] = dth[0] = dc[0] = 0.0;
  dv[n - 1] = du[n - 1] = dth[n - 1] = dc[n - 1] = 0.0;

  for (int i = 1; i < n - 1; ++i) {
    const double vbp = 0.5 * (v[i] + v[i + 1]);
    const double vbm = 0.5 * (v[i - 1] + v[i]);
    const double ux = 0.5 * inv_dx * (u[i + 1] - u[i - 1]);
    const double visc =
        nu * inv_dx * ((u[i + 1] - u[i]) * inv_dx / vbp - (u[i] - u[i - 1]) * inv_dx / vbm);
    const double heat =
        kap * inv_dx * ((th[i + 1] - th[i]) * inv_dx / vbp - (th[i] - th[i - 1]) * inv_dx / vbm);

    dv[i] = ux;
    double dui = -0.5 * inv_dx * (p[i + 1] - p[i - 1]) + visc;
    double dthi = -p[i] * ux + heat + nu * ux * ux / v[i];

    if (phase_field) {
      const double cxp = (c[i + 1] - c[i]) * inv_dx;
      const double cxm = (c[i] - c[i - 1]) * inv_dx;
      dui -= 0.5 * eps * inv_dx * (cxp * cxp / (vbp * vbp) - cxm * cxm / (vbm * vbm));
      const double mu =
          -eps * (cxp / vbp - cxm / vbm) * inv_dx + c[i] * (c[i] * c[i] - 1.0) / eps;
      dc[i] = -v[i] * mu;
      dthi += v[i] * mu * mu;
    } else {
      dc[i] = 0.0;
    }
    du[i] = dui;
    dth[i] = dthi / Cv;
  }

  if (source) {
    for (int i = 1; i < n - 1; ++i) {
      const auto s = (*source)(st.t, grid.x(i));
      dv[i] += s[0];
      du[i] += s[1];
      dth[i] += s[2];
      dc[i] += s[3];
    }
  }

  return 0.5 * ((u[n - 1] + u[n - 2]) - (u[0] + u[1]));
}

// dt = min( cfl_h dx / max|lambda_3| , cfl_p dx^2 min(v) / max(nu, kappa/C_v, 1) );
// the trailing 1 covers the unit-mobility Allen-Cahn diffusion.
inline double compute_dt(const GasModel& gas, const Grid& grid, const FieldState& st,
                         const SolverConfig& cfg) {
  double max_lam = 0.0;
  double min_v = st.v[0];
  for (int i = 0; i < grid.n_cells; ++i) {
    const double lam = std::sqrt(gas.gamma * gas.R * st.theta[i]) / st.v[i];
    if (lam > max_lam) max_lam = lam;
    if (st.v[i] < min_v) min_v = st.v[i];
  }
  const double diff = std::max({gas.nu, gas.kappa / gas.C_v(), 1.0});
  const double dt_p = cfg.cfl_parabolic * grid.dx * grid.dx * min_v / diff;
  if (max_lam <= 0.0) return dt_p;
  const double dt_h = cfg.cfl_hyperbolic * grid.dx / max_lam;
  return std::min(dt_h, dt_p);
}

struct StepInfo {
  double dt;
  double mass_flux;  // stage-weighted interior boundary flux of u
};

// One SSP-RK3 step; boundary cells are overwritten from the closure at each
// stage time. Throws PositivityBreach (with cell and time) on a breach.
class Stepper {
 public:
  Stepper(const GasModel& gas, const Grid& grid, SolverConfig cfg, BoundaryFn boundary,
          SourceFn source = nullptr)
      : gas_(gas), grid_(grid), cfg_(cfg), boundary_(std::move(boundary)),
        source_(std::move(source)), s1_(grid.n_cells), s2_(grid.n_cells), d_(grid.n_cells) {}

  const SolverConfig& config() const { return cfg_; }

  void apply_boundary(FieldState& st, double t) const {
    if (!boundary_) return;
    const int n = grid_.n_cells;
    const auto bl = boundary_(t, grid_.x(0));
    const auto br = boundary_(t, grid_.x(n - 1));
    st.v[0] = bl[0]; st.u[0] = bl[1]; st.theta[0] = bl[2]; st.chi[0] = bl[3];
    st.v[n - 1] = br[0]; st.u[n - 1] = br[1]; st.theta[n - 1] = br[2]; st.chi[n - 1] = br[3];
  }

  StepInfo step(FieldState& st, double dt_cap = 0.0) {
    const int n = grid_.n_cells;
    double dt = compute_dt(gas_, grid_, st, cfg_);
    if (dt_cap > 0.0 && dt > dt_cap) dt = dt_cap;
    const double t0 = st.t;

    const SourceFn* src = source_ ? &source_ : nullptr;
    double flux = 0.0;

    // stage 1
    flux += rhs(gas_, grid_, st, cfg_.phase_field, src, d_, ws_) / 6.0;
    axpy(s1_, st, d_, dt);
    s1_.t = t0 + dt;
    apply_boundary(s1_, s1_.t);

    // stage 2
    flux += rhs(gas_, grid_, s1_, cfg_.phase_field, src, d_, ws_) / 6.0;
    for (int i = 0; i < n; ++i) {
      s2_.v[i] = 0.75 * st.v[i] + 0.25 * (s1_.v[i] + dt * d_.v[i]);
      s2_.u[i] = 0.75 * st.u[i] + 0.25 * (s1_.u[i] + dt * d_.u[i]);
      s2_.theta[i] = 0.75 * st.theta[i] + 0.25 * (s1_.theta[i] + dt * d_.theta[i]);
      s2_.chi[i] = 0.75 * st.chi[i] + 0.25 * (s1_.chi[i] + dt * d_.chi[i]);
    }
    s2_.t = t0 + 0.5 * dt;
    apply_boundary(s2_, s2_.t);

    // stage 3
    flux += rhs(gas_, grid_, s2_, cfg_.phase_field, src, d_, ws_) * (2.0 / 3.0);
    for (int i = 0; i < n; ++i) {
      st.v[i] = (1.0 / 3.0) * st.v[i] + (2.0 / 3.0) * (s2_.v[i] + dt * d_.v[i]);
      st.u[i] = (1.0 / 3.0) * st.u[i] + (2.0 / 3.0) * (s2_.u[i] + dt * d_.u[i]);
      st.theta[i] = (1.0 / 3.0) * st.theta[i] + (2.0 / 3.0) * (s2_.theta[i] + dt * d_.theta[i]);
      st.chi[i] = (1.0 / 3.0) * st.chi[i] + (2.0 / 3.0) * (s2_.chi[i] + dt * d_.chi[i]);
    }
    st.t = t0 + dt;
    apply_boundary(st, st.t);

    return {dt, flux};
  }

 private:
  static void axpy(FieldState& out, const FieldState& a, const FieldState& d, double dt) {
    const int n = a.size();
    for (int i = 0; i < n; ++i) {
      out.v[i] = a.v[i] + dt * d.v[i];
      out.u[i] = a.u[i] + dt * d.u[i];
      out.theta[i] = a.theta[i] + dt * d.theta[i];
      out.chi[i] = a.chi[i] + dt * d.chi[i];
    }
  }

  const GasModel gas_;
  Grid grid_;
  SolverConfig cfg_;
  BoundaryFn boundary_;
  SourceFn source_;
  FieldState s1_, s2_, d_;
  RhsScratch ws_;
};

// Profile-backed Dirichlet closure; chi is 1 in the far field. Characteristic
// hints per boundary side persist across calls, so successive stage
// evaluations warm-start.
inline BoundaryFn profile_boundary(const WaveProfile& profile) {
  struct Hints {
    double x = 0.0, h1 = 0.0, h3 = 0.0;
    bool used = false;
  };
  auto hints = std::make_shared<std::array<Hints, 2>>();
  return [&profile, hints](double t, double x) -> std::array<double, 4> {
    Hints* h = &(*hints)[0];
    if (h->used && h->x != x) h = &(*hints)[1];
    if (h->used && h->x != x) h = &(*hints)[0];  // more than two sites: just reuse slot 0
    h->x = x;
    h->used = true;
    const ProfilePoint p = profile.eval(t, x, h->h1, h->h3);
    return {p.V, p.U, p.Th, 1.0};
  };
}

// Initial data: background wave plus the configured perturbations.
inline FieldState initial_state(const WaveProfile& profile, const Grid& grid,
                                const PerturbationSet& pert) {
  pert.validate();
  FieldState st(grid.n_cells);
  st.t = 0.0;
  const auto xs = grid.cell_centers();
  const auto pts = profile.eval_grid(0.0, xs);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = xs[i];
    st.v[i] = pts[i].V + pert.phi(x);
    st.u[i] = pts[i].U + pert.psi(x);
    st.theta[i] = pts[i].Th + pert.zeta(x);
    st.chi[i] = 1.0 + pert.xi(x);
    if (!(st.v[i] > 0.0))
      throw std::invalid_argument("initial_state: perturbed v is nonpositive at cell " +
                                  std::to_string(i));
    if (!(st.theta[i] > 0.0))
      throw std::invalid_argument("initial_state: perturbed theta is nonpositive at cell " +
                                  std::to_string(i));
  }
  return st;
}

struct RunCallbacks {
  std::function<void(const FieldState&)> on_diag;
  std::function<void(const FieldState&)> on_snapshot;
  std::function<void(const StepInfo&)> on_step;
};

// Integrate to t_end, landing exactly on the diagnostic / snapshot cadence
// ticks. Deterministic: fixed orders, no timing dependence.
inline void run_loop(Stepper& stepper, const SolverConfig& cfg, FieldState& st,
                     const RunCallbacks& cb) {
  if (cb.on_diag) cb.on_diag(st);
  if (cb.on_snapshot) cb.on_snapshot(st);
  long diag_k = 1, snap_k = 1;
  long steps = 0;
  double last_diag = st.t;
  const double eps_t = 1e-9;
  while (st.t < cfg.t_end - eps_t) {
    double target = cfg.t_end;
    if (cfg.diag_cadence > 0.0) target = std::min(target, cfg.diag_cadence * diag_k);
    if (cfg.snapshot_cadence > 0.0) target = std::min(target, cfg.snapshot_cadence * snap_k);
    const StepInfo info = stepper.step(st, target - st.t);
    if (cb.on_step) cb.on_step(info);
    if (++steps > cfg.max_steps) throw NonConvergence("run: step budget exhausted");
    if (st.t >= target - eps_t) {
      st.t = target;  // absorb roundoff so cadence stays on the integer lattice
      if (cfg.diag_cadence > 0.0 && target >= cfg.diag_cadence * diag_k - eps_t) {
        if (cb.on_diag) cb.on_diag(st);
        last_diag = st.t;
        while (cfg.diag_cadence * diag_k <= target + eps_t) ++diag_k;
      }
      if (cfg.snapshot_cadence > 0.0 && target >= cfg.snapshot_cadence * snap_k - eps_t) {
        if (cb.on_snapshot) cb.on_snapshot(st);
        while (cfg.snapshot_cadence * snap_k <= target + eps_t) ++snap_k;
      }
    }
  }
  if (cb.on_diag && last_diag < st.t - eps_t) cb.on_diag(st);
}

inline FieldState run(const GasModel& gas, const Grid& grid, const SolverConfig& cfg,
                      const WaveProfile& profile, const PerturbationSet& pert,
                      const RunCallbacks& cb = {}) {
  cfg.validate();
  FieldState st = initial_state(profile, grid, pert);
  Stepper stepper(gas, grid, cfg, profile_boundary(profile));
  stepper.apply_boundary(st, 0.0);
  run_loop(stepper, cfg, st, cb);
  return st;
}

}  // namespace nsac
