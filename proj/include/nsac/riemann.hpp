#pragma once

#include <algorithm>
#include <cmath>

#include "nsac/errors.hpp"
#include "nsac/gas.hpp"

namespace nsac {

// Far-field states of the Cauchy problem. Both sides share one entropy
// (rarefactions carry no entropy jump) and the pure phase chi = 1.
struct EndStates {
  double v_minus, v_plus;
  double u_minus, u_plus;
  double theta_minus, theta_plus;
  double chi_far = 1.0;

  void validate(const GasModel& gas) const {
    if (!(v_minus > 0.0) || !(v_plus > 0.0))
      throw std::domain_error("EndStates: specific volumes must be > 0");
    if (!(theta_minus > 0.0) || !(theta_plus > 0.0))
      throw std::domain_error("EndStates: temperatures must be > 0");
    const double sm = gas.entropy_from_vtheta(v_minus, theta_minus);
    const double sp = gas.entropy_from_vtheta(v_plus, theta_plus);
    const double tol = 1e-10 * std::max({1.0, std::abs(sm), std::abs(sp)});
    if (std::abs(sm - sp) > tol)
      throw std::domain_error("EndStates: end-state entropies do not match (s- != s+)");
    if (chi_far != 1.0) throw std::domain_error("EndStates: chi_far must be 1");
  }

  // Build the right state on the shared isentrope through (v_minus, theta_minus).
  static EndStates isentropic(const GasModel& gas, double v_minus, double u_minus, double theta_minus,
                              double v_plus, double u_plus) {
    const double s = gas.entropy_from_vtheta(v_minus, theta_minus);
    return EndStates{v_minus, v_plus, u_minus, u_plus, theta_minus, gas.theta_from_vs(v_plus, s)};
  }
};

struct RiemannData {
  double s_bar;
  double v_m, u_m;
  double fan1[2];  // lambda_1(v-), lambda_1(v_m)
  double fan3[2];  // lambda_3(v_m), lambda_3(v+)
  double delta;    // |v+ - v-| + |u+ - u-|
};

struct RiemannState {
  double v, u, theta, s;
};

// Velocity increment along a rarefaction curve:
//   integral over [v_a, v_b] of sqrt(A gamma z^(-gamma-1) exp((gamma-1) s / R)) dz.
// Evaluated through h(v) = -expm1(-m ln v)/m with m = (gamma-1)/2, which is
// exact, bitwise antisymmetric under swap, and smooth through gamma -> 1
// (h -> ln v, the isothermal limit).
inline double rarefaction_integral(const GasModel& gas, double v_a, double v_b, double s) {
  if (!(v_a > 0.0) || !(v_b > 0.0))
    throw std::domain_error("rarefaction_integral: volumes must be > 0");
  const double m = 0.5 * (gas.gamma - 1.0);
  const double pref = std::sqrt(gas.A * gas.gamma) * std::exp(0.5 * (gas.gamma - 1.0) * s / gas.R);
  const auto h = [m](double v) { return -std::expm1(-m * std::log(v)) / m; };
  return pref * (h(v_b) - h(v_a));
}

// d/dv_b of rarefaction_integral = lambda_3(v_b, s).
inline double rarefaction_integral_dvb(const GasModel& gas, double v_b, double s) {
  return gas.lambda(WaveFamily::three, v_b, s);
}

// Supremum of the velocity increment as v_b -> infinity (the vacuum limit).
inline double rarefaction_integral_limit(const GasModel& gas, double v_a, double s) {
  const double m = 0.5 * (gas.gamma - 1.0);
  const double pref = std::sqrt(gas.A * gas.gamma) * std::exp(0.5 * (gas.gamma - 1.0) * s / gas.R);
  return pref * std::pow(v_a, -m) / m;
}

namespace detail {

inline RiemannData riemann_from_vm(const GasModel& gas, const EndStates& e, double s_bar, double v_m) {
  RiemannData d;
  d.s_bar = s_bar;
  d.v_m = v_m;
  d.u_m = e.u_minus + rarefaction_integral(gas, e.v_minus, v_m, s_bar);
  d.fan1[0] = gas.lambda(WaveFamily::one, e.v_minus, s_bar);
  d.fan1[1] = gas.lambda(WaveFamily::one, v_m, s_bar);
  d.fan3[0] = gas.lambda(WaveFamily::three, v_m, s_bar);
  d.fan3[1] = gas.lambda(WaveFamily::three, e.v_plus, s_bar);
  d.delta = std::abs(e.v_plus - e.v_minus) + std::abs(e.u_plus - e.u_minus);
  return d;
}

}  // namespace detail

// Intermediate state of the two-rarefaction Riemann solution: v_m solves
//   u+ - u- = I(v- -> v_m) + I(v+ -> v_m),
// which is strictly increasing in v_m. Bracketed bisection plus Newton polish.
inline RiemannData solve_intermediate(const GasModel& gas, const EndStates& ends) {
  ends.validate(gas);
  const double s_bar = 0.5 * (gas.entropy_from_vtheta(ends.v_minus, ends.theta_minus) +
                              gas.entropy_from_vtheta(ends.v_plus, ends.theta_plus));
  const double du = ends.u_plus - ends.u_minus;

  if (ends.v_plus == ends.v_minus && du == 0.0)
    return detail::riemann_from_vm(gas, ends, s_bar, ends.v_minus);

  const auto F = [&](double vm) {
    return rarefaction_integral(gas, ends.v_minus, vm, s_bar) +
           rarefaction_integral(gas, ends.v_plus, vm, s_bar) - du;
  };

  const double scale = 1.0 + std::abs(du);
  const double vm_floor = std::max(ends.v_minus, ends.v_plus);
  if (F(vm_floor) > 1e-12 * scale)
    throw NoTwoRarefactionSolution(
        "end states require a compression (shock) branch: u+ - u- below the two-rarefaction range");
  const double du_vacuum = rarefaction_integral_limit(gas, ends.v_minus, s_bar) +
                           rarefaction_integral_limit(gas, ends.v_plus, s_bar);
  if (du >= du_vacuum)
    throw NoTwoRarefactionSolution("end states pull apart into vacuum: no finite intermediate state");

  double lo = std::min(ends.v_minus, ends.v_plus) * 1e-6;
  double hi = vm_floor * 1e6;
  if (F(hi) < 0.0)
    throw NoTwoRarefactionSolution("intermediate volume exceeds bracket: data is near vacuum");

  double flo = F(lo);
  double vm = 0.5 * (lo + hi);
  const int max_iter = 300;
  int it = 0;
  // Bisect to a narrow bracket, then polish with Newton (F' = 2 lambda_3(vm) > 0).
  for (; it < max_iter && (hi - lo) > 1e-9 * vm_floor; ++it) {
    vm = 0.5 * (lo + hi);
    const double f = F(vm);
    if ((f < 0.0) == (flo < 0.0)) {
      lo = vm;
      flo = f;
    } else {
      hi = vm;
    }
  }
  vm = 0.5 * (lo + hi);
  for (; it < max_iter; ++it) {
    const double f = F(vm);
    if (std::abs(f) <= 1e-13 * scale) break;
    const double df = 2.0 * gas.lambda(WaveFamily::three, vm, s_bar);
    double next = vm - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (f > 0.0) hi = vm; else lo = vm;
    vm = next;
  }
  if (std::abs(F(vm)) > 1e-12 * scale)
    throw NonConvergence("solve_intermediate: root residual above 1e-12 tolerance");

  // Snap to an end volume when one wave is degenerate, so the matching fan
  // collapses exactly.
  if (std::abs(vm - ends.v_minus) <= 1e-13 * ends.v_minus) vm = ends.v_minus;
  else if (std::abs(vm - ends.v_plus) <= 1e-13 * ends.v_plus) vm = ends.v_plus;

  RiemannData d = detail::riemann_from_vm(gas, ends, s_bar, vm);
  const double adm = 1e-10 * (1.0 + std::abs(d.u_m));
  if (d.v_m < ends.v_minus - 1e-10 * ends.v_minus || d.v_m < ends.v_plus - 1e-10 * ends.v_plus ||
      d.u_m < ends.u_minus - adm || ends.u_plus < d.u_m - adm)
    throw NoTwoRarefactionSolution("admissibility violated: solution needs a shock branch");
  return d;
}

// Self-similar composite solution (1-fan + 3-fan) at xi = x/t.
inline RiemannState riemann_eval(const GasModel& gas, const RiemannData& d, const EndStates& e,
                                 double xi) {
  const double s = d.s_bar;
  double V1, U1;
  if (xi <= d.fan1[0]) {
    V1 = e.v_minus;
    U1 = e.u_minus;
  } else if (xi >= d.fan1[1]) {
    V1 = d.v_m;
    U1 = d.u_m;
  } else {
    V1 = gas.lambda_inverse(WaveFamily::one, xi, s);
    U1 = e.u_minus + rarefaction_integral(gas, e.v_minus, V1, s);
  }
  double V3, U3;
  if (xi <= d.fan3[0]) {
    V3 = d.v_m;
    U3 = d.u_m;
  } else if (xi >= d.fan3[1]) {
    V3 = e.v_plus;
    U3 = e.u_plus;
  } else {
    V3 = gas.lambda_inverse(WaveFamily::three, xi, s);
    U3 = d.u_m - rarefaction_integral(gas, d.v_m, V3, s);
  }
  // The fans are disjoint, so on each side one summand sits exactly on its
  // middle plateau; picking the active branch keeps the plateaus bit-exact.
  double V, U;
  if (xi <= d.fan3[0]) {
    V = V1;
    U = U1;
  } else if (xi >= d.fan1[1]) {
    V = V3;
    U = U3;
  } else {
    V = V1 + V3 - d.v_m;
    U = U1 + U3 - d.u_m;
  }
  const double theta_m = gas.theta_from_vs(d.v_m, s);
  const double Th = gas.theta_from_vs(V1, s) + gas.theta_from_vs(V3, s) - theta_m;
  return RiemannState{V, U, Th, s};
}

}  // namespace nsac
