#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nsac/errors.hpp"
#include "nsac/grid.hpp"
#include "nsac/profile.hpp"
#include "nsac/solver.hpp"

namespace nsac {

namespace fd {

// Same stencils the solver uses: centered inside, one-sided second order at the ends.
inline std::vector<double> first_derivative(const std::vector<double>& f, double dx) {
  const int n = static_cast<int>(f.size());
  std::vector<double> d(n);
  for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
  return d;
}

inline std::vector<double> second_derivative(const std::vector<double>& f, double dx) {
  const int n = static_cast<int>(f.size());
  std::vector<double> d(n);
  const double idx2 = 1.0 / (dx * dx);
  for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * idx2;
  d[0] = (f[0] - 2.0 * f[1] + f[2]) * idx2;
  d[n - 1] = (f[n - 1] - 2.0 * f[n - 2] + f[n - 3]) * idx2;
  return d;
}

inline double trapezoid_sq(const std::vector<double>& f, double dx) {
  const int n = static_cast<int>(f.size());
  double s = 0.5 * (f[0] * f[0] + f[n - 1] * f[n - 1]);
  for (int i = 1; i < n - 1; ++i) s += f[i] * f[i];
  return s * dx;
}

inline double trapezoid(const std::vector<double>& f, double dx) {
  const int n = static_cast<int>(f.size());
  double s = 0.5 * (f[0] + f[n - 1]);
  for (int i = 1; i < n - 1; ++i) s += f[i];
  return s * dx;
}

}  // namespace fd

// Perturbation fields (v-V, u-U, theta-Th, chi-1, s-S), always recomputed from
// the state and the background wave, never integrated on their own.
struct PerturbationState {
  std::vector<double> phi, psi, zeta, xi, varphi;
  std::vector<double> V, U, Th, Ux;  // profile values cached for the functionals

  static PerturbationState compute(const GasModel& gas, const Grid& grid, const FieldState& st,
                                   const std::vector<ProfilePoint>& pts) {
    const int n = grid.n_cells;
    PerturbationState p;
    p.phi.resize(n); p.psi.resize(n); p.zeta.resize(n); p.xi.resize(n); p.varphi.resize(n);
    p.V.resize(n); p.U.resize(n); p.Th.resize(n); p.Ux.resize(n);
    for (int i = 0; i < n; ++i) {
      p.V[i] = pts[i].V; p.U[i] = pts[i].U; p.Th[i] = pts[i].Th; p.Ux[i] = pts[i].Ux;
      p.phi[i] = st.v[i] - pts[i].V;
      p.psi[i] = st.u[i] - pts[i].U;
      p.zeta[i] = st.theta[i] - pts[i].Th;
      p.xi[i] = st.chi[i] - 1.0;
      p.varphi[i] = gas.entropy_from_vtheta(st.v[i], st.theta[i]) - pts[i].S;
    }
    return p;
  }
};

struct FieldNorms {
  double l2 = 0.0, h1 = 0.0, h2 = 0.0, linf = 0.0;
};

struct NormTable {
  FieldNorms phi, psi, zeta, xi, varphi;
  double zeta_weighted_l2 = 0.0;  // || zeta / sqrt(gamma-1) ||_L2
};

inline FieldNorms field_norms(const std::vector<double>& f, double dx) {
  FieldNorms n;
  const double l2s = fd::trapezoid_sq(f, dx);
  const auto d1 = fd::first_derivative(f, dx);
  const auto d2 = fd::second_derivative(f, dx);
  const double d1s = fd::trapezoid_sq(d1, dx);
  const double d2s = fd::trapezoid_sq(d2, dx);
  n.l2 = std::sqrt(l2s);
  n.h1 = std::sqrt(l2s + d1s);
  n.h2 = std::sqrt(l2s + d1s + d2s);
  for (double x : f) n.linf = std::max(n.linf, std::abs(x));
  return n;
}

inline NormTable norms(const Grid& grid, const PerturbationState& p, double gamma) {
  NormTable t;
  t.phi = field_norms(p.phi, grid.dx);
  t.psi = field_norms(p.psi, grid.dx);
  t.zeta = field_norms(p.zeta, grid.dx);
  t.xi = field_norms(p.xi, grid.dx);
  t.varphi = field_norms(p.varphi, grid.dx);
  t.zeta_weighted_l2 = t.zeta.l2 / std::sqrt(gamma - 1.0);
  return t;
}

// Relative-entropy functional
//   E(t) = int R Th Phi(v/V) + psi^2/2 + C_v Th Phi(theta/Th) + xi_x^2/(2v)
//          + xi^2 (xi+2)^2 / 4 dx.
inline double energy_functional(const GasModel& gas, const Grid& grid, const FieldState& st,
                                const PerturbationState& p) {
  const int n = grid.n_cells;
  const auto xix = fd::first_derivative(p.xi, grid.dx);
  const double Cv = gas.C_v();
  std::vector<double> integ(n);
  for (int i = 0; i < n; ++i) {
    const double xi = p.xi[i];
    integ[i] = gas.R * p.Th[i] * phi_convex(st.v[i] / p.V[i]) + 0.5 * p.psi[i] * p.psi[i] +
               Cv * p.Th[i] * phi_convex(st.theta[i] / p.Th[i]) +
               xix[i] * xix[i] / (2.0 * st.v[i]) + 0.25 * xi * xi * (xi + 2.0) * (xi + 2.0);
  }
  return fd::trapezoid(integ, grid.dx);
}

// Dissipation rate
//   D(t) = int (v Th/theta) mu^2 + nu Th/(v theta) psi_x^2 + kappa Th/(v theta^2) zeta_x^2 dx.
inline double dissipation_rate(const GasModel& gas, const Grid& grid, const FieldState& st,
                               const PerturbationState& p) {
  const int n = grid.n_cells;
  const auto mu = chemical_potential(gas, grid, st);
  const auto psix = fd::first_derivative(p.psi, grid.dx);
  const auto zetax = fd::first_derivative(p.zeta, grid.dx);
  std::vector<double> integ(n);
  for (int i = 0; i < n; ++i) {
    const double th = st.theta[i], v = st.v[i], Th = p.Th[i];
    integ[i] = v * Th / th * mu[i] * mu[i] + gas.nu * Th / (v * th) * psix[i] * psix[i] +
               gas.kappa * Th / (v * th * th) * zetax[i] * zetax[i];
  }
  return fd::trapezoid(integ, grid.dx);
}

// Convexity production term of the basic energy identity:
//   int [ p~(v,s) - p~(V,s_bar) - p~_v(V,s_bar) phi - p~_s(V,s_bar) varphi ] U_x dx,
// nonnegative where U_x > 0 by convexity of p~. Monitored, not enforced.
inline double convexity_term(const GasModel& gas, const Grid& grid, const FieldState& st,
                             const PerturbationState& p, double s_bar) {
  const int n = grid.n_cells;
  std::vector<double> integ(n);
  for (int i = 0; i < n; ++i) {
    const double pv = gas.R * st.theta[i] / st.v[i];  // p~(v,s(v,theta)) = p(v,theta)
    const double pV = gas.p_tilde(p.V[i], s_bar);
    const double bracket = pv - pV - gas.p_tilde_v(p.V[i], s_bar) * p.phi[i] -
                           gas.p_tilde_s(p.V[i], s_bar) * p.varphi[i];
    integ[i] = bracket * p.Ux[i];
  }
  return fd::trapezoid(integ, grid.dx);
}

struct BoundsSnapshot {
  double v_min, v_max, theta_min, theta_max, chi_min, chi_max;
};

inline BoundsSnapshot bounds_of(const FieldState& st) {
  BoundsSnapshot b{st.v[0], st.v[0], st.theta[0], st.theta[0], st.chi[0], st.chi[0]};
  for (int i = 1; i < st.size(); ++i) {
    b.v_min = std::min(b.v_min, st.v[i]);
    b.v_max = std::max(b.v_max, st.v[i]);
    b.theta_min = std::min(b.theta_min, st.theta[i]);
    b.theta_max = std::max(b.theta_max, st.theta[i]);
    b.chi_min = std::min(b.chi_min, st.chi[i]);
    b.chi_max = std::max(b.chi_max, st.chi[i]);
  }
  return b;
}

struct DiagThresholds {
  double chi_lo = -0.01, chi_hi = 1.01;
  double v_env_lo = 1e-3, v_env_hi = 1e3;
  double theta_env_lo = 1e-3, theta_env_hi = 1e3;
  double energy_factor = 10.0;
  double entropy_slack = 1e-8;       // per unit time, times n dx
  double convexity_tol = -1e-6;      // instantaneous excursions below this are flagged
};

struct BoundsFlags {
  bool chi = false, v = false, theta = false;
  bool any() const { return chi || v || theta; }
};

class BoundsMonitor {
 public:
  void update(const FieldState& st) {
    const BoundsSnapshot b = bounds_of(st);
    if (!init_) {
      run_ = b;
      init_ = true;
      return;
    }
    run_.v_min = std::min(run_.v_min, b.v_min);
    run_.v_max = std::max(run_.v_max, b.v_max);
    run_.theta_min = std::min(run_.theta_min, b.theta_min);
    run_.theta_max = std::max(run_.theta_max, b.theta_max);
    run_.chi_min = std::min(run_.chi_min, b.chi_min);
    run_.chi_max = std::max(run_.chi_max, b.chi_max);
  }
  const BoundsSnapshot& extremes() const { return run_; }
  BoundsFlags flags(const DiagThresholds& th) const {
    BoundsFlags f;
    f.chi = run_.chi_min < th.chi_lo || run_.chi_max > th.chi_hi;
    f.v = run_.v_min < th.v_env_lo || run_.v_max > th.v_env_hi;
    f.theta = run_.theta_min < th.theta_env_lo || run_.theta_max > th.theta_env_hi;
    return f;
  }

 private:
  BoundsSnapshot run_{};
  bool init_ = false;
};

// Integral representation of v(t,x) at a probe:
//   v = B(t,x) Y(t) [ 1 + (1/nu) int_0^t (R theta + chi_x^2/(2v))(tau,x) / (B Y)(tau) dtau ],
//   B = v0 exp{ (1/nu) int_x^inf (u0-u) beta dy },   Y = exp{ (1/nu) int_0^t avg_J E },
//   E = nu u_x/v - chi_x^2/(2v^2) - R theta / v,
// with beta the unit ramp cut-off whose plateau ends one unit right of the probe.
// The tau-integral is advanced with the integrating factor exact per step
// (trapezoid on the integrand), so constant states reproduce v exactly.
class VolumeRepresentation {
 public:
  struct Result {
    double x = 0.0;
    double v_repr = 0.0;
    double v_solver = 0.0;
    double rel_err = 0.0;
    double err_estimate = 0.0;  // Richardson estimate from the half-cadence twin
  };

  VolumeRepresentation() = default;

  VolumeRepresentation(const GasModel& gas, const Grid& grid, const std::vector<double>& probes)
      : gas_(&gas), grid_(grid) {
    const int n = grid_->n_cells;
    const int m1 = std::max(1, static_cast<int>(std::lround(1.0 / grid_->dx)));
    for (double xp : probes) {
      Probe p;
      p.ip = static_cast<int>(std::lround((xp - grid_->x_min) / grid_->dx - 0.5));
      p.ip = std::max(1, std::min(n - 2, p.ip));
      p.ia = p.ip + m1;
      p.ib = p.ip + 2 * m1;
      if (p.ib > n - 2)
        throw std::domain_error("volume-representation probe needs two unit intervals inside the grid to its right");
      probes_.push_back(p);
    }
  }

  void tick(const FieldState& st) {
    if (!u0_.size()) {  // first tick defines the initial data
      u0_ = st.u;
      v0_ = st.v;
    }
    for (auto& p : probes_) {
      const double logB = std::log(v0_[p.ip]) + b_exponent(p, st) / gas_->nu;
      const double Yint = ramp_average(p, st);
      const double E = probe_E(p, st);
      advance(p.fine, st.t, logB, Yint, E, v0_[p.ip]);
      if (p.tick_count % 2 == 0) advance(p.coarse, st.t, logB, Yint, E, v0_[p.ip]);
      ++p.tick_count;
      p.last_v = st.v[p.ip];
      p.last_x = grid_->x(p.ip);
    }
  }

  std::vector<Result> results() const {
    std::vector<Result> out;
    for (const auto& p : probes_) {
      Result r;
      r.x = p.last_x;
      r.v_repr = p.fine.v_repr;
      r.v_solver = p.last_v;
      r.rel_err = std::abs(p.fine.v_repr - p.last_v) / p.last_v;
      r.err_estimate = std::abs(p.fine.v_repr - p.coarse.v_repr) / 3.0;
      out.push_back(r);
    }
    return out;
  }

  double max_rel_err() const {
    double m = 0.0;
    for (const auto& r : results()) m = std::max(m, r.rel_err);
    return m;
  }

  bool empty() const { return probes_.empty(); }

 private:
  struct Acc {
    bool init = false;
    double prev_t = 0.0, prev_Yint = 0.0, prev_E = 0.0, prev_logBY = 0.0;
    double Yexp = 0.0;
    double v_repr = 0.0;
  };
  struct Probe {
    int ip, ia, ib;
    int tick_count = 0;
    double last_v = 0.0, last_x = 0.0;
    Acc fine, coarse;
  };

  double b_exponent(const Probe& p, const FieldState& st) const {
    // int_{x_p}^{x_b} (u0 - u) beta dy, beta = 1 up to x_a then a down ramp.
    const double xa = grid_->x(p.ia), xb = grid_->x(p.ib);
    double s = 0.0;
    for (int j = p.ip; j <= p.ib; ++j) {
      const double xj = grid_->x(j);
      double beta = 1.0;
      if (xj >= xb) beta = 0.0;
      else if (xj > xa) beta = (xb - xj) / (xb - xa);
      double h = (u0_[j] - st.u[j]) * beta;
      if (j == p.ip || j == p.ib) h *= 0.5;
      s += h;
    }
    return s * grid_->dx;
  }

  double ramp_average(const Probe& p, const FieldState& st) const {
    // (1/(x_b-x_a)) int_{x_a}^{x_b} E dx with E = nu u_x/v - chi_x^2/(2v^2) - R theta/v
    const double dx = grid_->dx;
    double s = 0.0;
    for (int j = p.ia; j <= p.ib; ++j) {
      const double ux = (st.u[j + 1] - st.u[j - 1]) / (2.0 * dx);
      const double cx = (st.chi[j + 1] - st.chi[j - 1]) / (2.0 * dx);
      const double v = st.v[j];
      double h = gas_->nu * ux / v - gas_->eps_interface * cx * cx / (2.0 * v * v) -
                 gas_->R * st.theta[j] / v;
      if (j == p.ia || j == p.ib) h *= 0.5;
      s += h;
    }
    return s * dx / (grid_->x(p.ib) - grid_->x(p.ia));
  }

  double probe_E(const Probe& p, const FieldState& st) const {
    const double cx = (st.chi[p.ip + 1] - st.chi[p.ip - 1]) / (2.0 * grid_->dx);
    return gas_->R * st.theta[p.ip] + gas_->eps_interface * cx * cx / (2.0 * st.v[p.ip]);
  }

  void advance(Acc& a, double t, double logB, double Yint, double E, double v0p) const {
    if (!a.init) {
      a.init = true;
      a.prev_t = t;
      a.prev_Yint = Yint;
      a.prev_E = E;
      a.prev_logBY = logB;  // Yexp = 0
      a.v_repr = v0p;
      return;
    }
    const double dt = t - a.prev_t;
    if (dt <= 0.0) return;
    a.Yexp += 0.5 * (a.prev_Yint + Yint) * dt;
    const double logBY = logB + a.Yexp / gas_->nu;
    const double dL = logBY - a.prev_logBY;
    const double phi1 = std::abs(dL) > 1e-12 ? std::expm1(dL) / dL : 1.0 + 0.5 * dL;
    a.v_repr = std::exp(dL) * a.v_repr + dt * 0.5 * (a.prev_E + E) / gas_->nu * phi1;
    a.prev_t = t;
    a.prev_Yint = Yint;
    a.prev_E = E;
    a.prev_logBY = logBY;
  }

  const GasModel* gas_ = nullptr;
  std::optional<Grid> grid_;
  std::vector<double> u0_, v0_;
  std::vector<Probe> probes_;
};

// History-based reconstruction check. With enforce_cadence, throws
// InsufficientHistory when the estimated tau-quadrature error dominates a
// residual that is itself material (the reconstruction then says nothing
// about the solver).
inline std::vector<VolumeRepresentation::Result> volume_repr_check(const GasModel& gas, const Grid& grid,
                                                         const std::vector<FieldState>& history,
                                                         const std::vector<double>& probes,
                                                         bool enforce_cadence = true) {
  if (history.size() < 3) throw InsufficientHistory("volume_repr_check: need at least 3 snapshots");
  VolumeRepresentation acc(gas, grid, probes);
  for (const auto& st : history) acc.tick(st);
  auto res = acc.results();
  if (enforce_cadence) {
    for (const auto& r : res) {
      if (r.rel_err > 1e-8 && r.err_estimate > 0.1 * r.rel_err * r.v_solver)
        throw InsufficientHistory("volume_repr_check: snapshot cadence too coarse at probe x = " +
                                  std::to_string(r.x));
    }
  }
  return res;
}

// Elementary bound Phi(x) <= (x-1)^2 / (2 min(1,x)^2) turned into a norm-wise
// constant: E <= C (||phi||^2 + ||psi||^2 + ||zeta||^2 + ||xi||_H1^2).
struct EnergyNormCheck {
  double C = 0.0;
  bool ok = false;
};

inline EnergyNormCheck energy_norm_consistency(const GasModel& gas, const Grid& grid,
                                               const FieldState& st, const PerturbationState& p,
                                               double E) {
  double th_max = 0.0, vmin = std::numeric_limits<double>::infinity();
  double thmin = std::numeric_limits<double>::infinity(), ximax = 0.0;
  double vmin_state = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.n_cells; ++i) {
    th_max = std::max(th_max, p.Th[i]);
    vmin = std::min(vmin, std::min(st.v[i], p.V[i]));
    thmin = std::min(thmin, std::min(st.theta[i], p.Th[i]));
    ximax = std::max(ximax, std::abs(p.xi[i] + 2.0));
    vmin_state = std::min(vmin_state, st.v[i]);
  }
  const double C = std::max({gas.R * th_max / (2.0 * vmin * vmin), 0.5,
                             gas.C_v() * th_max / (2.0 * thmin * thmin),
                             0.25 * ximax * ximax, 1.0 / (2.0 * vmin_state)});
  const double rhs = C * (fd::trapezoid_sq(p.phi, grid.dx) + fd::trapezoid_sq(p.psi, grid.dx) +
                          fd::trapezoid_sq(p.zeta, grid.dx) + fd::trapezoid_sq(p.xi, grid.dx) +
                          fd::trapezoid_sq(fd::first_derivative(p.xi, grid.dx), grid.dx));
  return {C, E <= rhs * (1.0 + 1e-12) + 1e-14};
}

struct DiagnosticsReport {
  double t = 0.0;
  NormTable norms;
  double E = 0.0, D = 0.0, intD = 0.0;
  double int_s_minus_S = 0.0;
  double cvx = 0.0, cvx_min = 0.0;
  BoundsSnapshot bounds{};
  BoundsFlags flags{};
  double vrepr_rel_err = 0.0, vrepr_err_est = 0.0;
  double energy_norm_C = 0.0;
  bool energy_norm_ok = true;
  double energy_bound_lhs = 0.0;
  bool energy_bound_ok = true;
};

// Per-tick evaluation of every functional the stability analysis tracks.
class DiagnosticsEngine {
 public:
  DiagnosticsEngine(const GasModel& gas, const Grid& grid, const WaveProfile& profile,
                    DiagThresholds thresholds, const std::vector<double>& probes)
      : gas_(gas), grid_(grid), profile_(profile), th_(thresholds), xs_(grid.cell_centers()),
        vrepr_(probes.empty() ? VolumeRepresentation()
                              : VolumeRepresentation(gas, grid, probes)) {}

  const DiagThresholds& thresholds() const { return th_; }
  const BoundsMonitor& bounds_monitor() const { return bounds_; }
  const VolumeRepresentation& volume_repr() const { return vrepr_; }

  // Running maxima of the L-inf norms, for the decay criterion.
  const NormTable& running_linf_max() const { return run_max_; }

  DiagnosticsReport tick(const FieldState& st) {
    DiagnosticsReport rep;
    rep.t = st.t;
    const auto pts = profile_.eval_grid(st.t, xs_);
    const auto pert = PerturbationState::compute(gas_, grid_, st, pts);
    rep.norms = norms(grid_, pert, gas_.gamma);
    track_max(rep.norms);
    rep.E = energy_functional(gas_, grid_, st, pert);
    rep.D = dissipation_rate(gas_, grid_, st, pert);
    if (have_prev_) intD_ += 0.5 * (prev_D_ + rep.D) * (st.t - prev_t_);
    rep.intD = intD_;
    rep.cvx = convexity_term(gas_, grid_, st, pert, profile_.riemann().s_bar);
    cvx_min_ = std::min(cvx_min_, rep.cvx);
    rep.cvx_min = cvx_min_;
    {
      std::vector<double> smS(grid_.n_cells);
      for (int i = 0; i < grid_.n_cells; ++i)
        smS[i] = gas_.entropy_from_vtheta(st.v[i], st.theta[i]) - pts[i].S;
      rep.int_s_minus_S = fd::trapezoid(smS, grid_.dx);
    }
    bounds_.update(st);
    rep.bounds = bounds_.extremes();
    rep.flags = bounds_.flags(th_);
    if (!vrepr_.empty()) {
      vrepr_.tick(st);
      rep.vrepr_rel_err = vrepr_.max_rel_err();
      double est = 0.0;
      for (const auto& r : vrepr_.results()) est = std::max(est, r.err_estimate);
      rep.vrepr_err_est = est;
    }
    const auto enc = energy_norm_consistency(gas_, grid_, st, pert, rep.E);
    rep.energy_norm_C = enc.C;
    rep.energy_norm_ok = enc.ok;
    energy_norm_all_ok_ = energy_norm_all_ok_ && enc.ok;
    if (!have_prev_) E0_ = rep.E;
    rep.energy_bound_lhs = rep.E + rep.intD;
    rep.energy_bound_ok = rep.energy_bound_lhs <= th_.energy_factor * (E0_ + 1.0);
    energy_bound_all_ok_ = energy_bound_all_ok_ && rep.energy_bound_ok;
    c_obs_ = std::max(c_obs_, rep.energy_bound_lhs / (E0_ + 1.0));

    prev_t_ = st.t;
    prev_D_ = rep.D;
    have_prev_ = true;
    return rep;
  }

  double E0() const { return E0_; }
  double observed_energy_constant() const { return c_obs_; }
  bool energy_bound_all_ok() const { return energy_bound_all_ok_; }
  bool energy_norm_all_ok() const { return energy_norm_all_ok_; }
  double convexity_min() const { return cvx_min_; }

 private:
  void track_max(const NormTable& n) {
    run_max_.phi.linf = std::max(run_max_.phi.linf, n.phi.linf);
    run_max_.psi.linf = std::max(run_max_.psi.linf, n.psi.linf);
    run_max_.zeta.linf = std::max(run_max_.zeta.linf, n.zeta.linf);
    run_max_.xi.linf = std::max(run_max_.xi.linf, n.xi.linf);
    run_max_.varphi.linf = std::max(run_max_.varphi.linf, n.varphi.linf);
  }

  const GasModel gas_;
  Grid grid_;
  const WaveProfile& profile_;
  DiagThresholds th_;
  std::vector<double> xs_;
  BoundsMonitor bounds_;
  VolumeRepresentation vrepr_;
  NormTable run_max_;
  double intD_ = 0.0, prev_t_ = 0.0, prev_D_ = 0.0;
  double E0_ = 0.0, c_obs_ = 0.0;
  double cvx_min_ = std::numeric_limits<double>::infinity();
  bool have_prev_ = false;
  bool energy_bound_all_ok_ = true;
  bool energy_norm_all_ok_ = true;
};

}  // namespace nsac
