#pragma once

#include <array>
#include <cmath>

#include "nsac/grid.hpp"
#include "nsac/solver.hpp"

namespace nsac {

// Smooth manufactured fields for the full system, with the sources that make
// them exact solutions. Everything is sin/cos so all derivatives are closed
// form; fields stay well inside the positive cone.
struct ManufacturedSolution {
  double R, gamma, nu, kappa;

  std::array<double, 4> value(double t, double x) const {
    return {v(t, x), u(t, x), th(t, x), chi(t, x)};
  }

  BoundaryFn boundary() const {
    return [*this](double t, double x) { return value(t, x); };
  }

  // Contributions to d/dt of (v, u, theta, chi) that the discrete operator
  // must reproduce; the theta component is already divided by C_v.
  SourceFn source() const {
    return [*this](double t, double x) -> std::array<double, 4> {
      const double Cv = R / (gamma - 1.0);
      const double vv = v(t, x), vx = v_x(t, x);
      const double ux = u_x(t, x), uxx = u_xx(t, x);
      const double thx = th_x(t, x), thxx = th_xx(t, x);
      const double cx = chi_x(t, x), cxx = chi_xx(t, x);
      const double cc = chi(t, x);
      const double p = R * th(t, x) / vv;
      const double p_x = R * (thx * vv - th(t, x) * vx) / (vv * vv);
      const double visc_x = nu * (uxx / vv - ux * vx / (vv * vv));
      const double cap_x = 2.0 * cx * cxx / (vv * vv) - 2.0 * cx * cx * vx / (vv * vv * vv);
      const double mu = -(cxx / vv - cx * vx / (vv * vv)) + cc * (cc * cc - 1.0);
      const double heat = kappa * (thxx / vv - thx * vx / (vv * vv));
      const double s_v = v_t(t, x) - ux;
      const double s_u = u_t(t, x) + p_x - visc_x + 0.5 * cap_x;
      const double s_th = (Cv * th_t(t, x) + p * ux - heat - nu * ux * ux / vv - vv * mu * mu) / Cv;
      const double s_chi = chi_t(t, x) + vv * mu;
      return {s_v, s_u, s_th, s_chi};
    };
  }

  FieldState initial(const Grid& grid) const {
    FieldState st(grid.n_cells);
    st.t = 0.0;
    for (int i = 0; i < grid.n_cells; ++i) {
      const auto w = value(0.0, grid.x(i));
      st.v[i] = w[0];
      st.u[i] = w[1];
      st.theta[i] = w[2];
      st.chi[i] = w[3];
    }
    return st;
  }

  std::array<double, 4> l2_error(const Grid& grid, const FieldState& st) const {
    std::array<double, 4> e{};
    for (int i = 0; i < grid.n_cells; ++i) {
      const auto w = value(st.t, grid.x(i));
      e[0] += (st.v[i] - w[0]) * (st.v[i] - w[0]);
      e[1] += (st.u[i] - w[1]) * (st.u[i] - w[1]);
      e[2] += (st.theta[i] - w[2]) * (st.theta[i] - w[2]);
      e[3] += (st.chi[i] - w[3]) * (st.chi[i] - w[3]);
    }
    for (auto& x : e) x = std::sqrt(x * grid.dx);
    return e;
  }

  double v(double t, double x) const { return 2.0 + 0.2 * std::sin(x - t); }
  double v_t(double t, double x) const { return -0.2 * std::cos(x - t); }
  double v_x(double t, double x) const { return 0.2 * std::cos(x - t); }

  double u(double t, double x) const { return 0.3 * std::cos(x + 0.5 * t); }
  double u_t(double t, double x) const { return -0.15 * std::sin(x + 0.5 * t); }
  double u_x(double t, double x) const { return -0.3 * std::sin(x + 0.5 * t); }
  double u_xx(double t, double x) const { return -0.3 * std::cos(x + 0.5 * t); }

  double th(double t, double x) const { return 1.5 + 0.2 * std::cos(x - 0.5 * t); }
  double th_t(double t, double x) const { return 0.1 * std::sin(x - 0.5 * t); }
  double th_x(double t, double x) const { return -0.2 * std::sin(x - 0.5 * t); }
  double th_xx(double t, double x) const { return -0.2 * std::cos(x - 0.5 * t); }

  double chi(double t, double x) const { return 0.8 + 0.1 * std::sin(x + t); }
  double chi_t(double t, double x) const { return 0.1 * std::cos(x + t); }
  double chi_x(double t, double x) const { return 0.1 * std::cos(x + t); }
  double chi_xx(double t, double x) const { return -0.1 * std::sin(x + t); }
};

// Closed-form family that satisfies mass and momentum exactly (chi = 1, so the
// phase terms drop): u = a(t) sin(kx), v integrates v_t = u_x, and theta is
// chosen so that u_t + p_x = nu (u_x/v)_x holds identically. The volume
// representation formula is an identity on such histories, which isolates the
// tau-quadrature error of the reconstruction.
struct MomentumExactHistory {
  double R = 1.0;
  double nu = 1.3;
  double alpha = 0.1, omega = 0.7, k = 0.5;
  double P0 = 2.0, v0 = 2.0;

  double a(double t) const { return alpha * std::sin(omega * t); }
  double a_t(double t) const { return alpha * omega * std::cos(omega * t); }
  double A(double t) const { return alpha * (1.0 - std::cos(omega * t)) / omega; }

  double u(double t, double x) const { return a(t) * std::sin(k * x); }
  double u_x(double t, double x) const { return a(t) * k * std::cos(k * x); }
  double v(double t, double x) const { return v0 + A(t) * k * std::cos(k * x); }
  // p = P0 + nu u_x / v - a'(t) * int sin(kx) dx makes the momentum balance exact
  double p(double t, double x) const {
    return P0 + nu * u_x(t, x) / v(t, x) + a_t(t) * std::cos(k * x) / k;
  }
  double theta(double t, double x) const { return v(t, x) * p(t, x) / R; }

  FieldState state(const Grid& grid, double t) const {
    FieldState st(grid.n_cells);
    st.t = t;
    for (int i = 0; i < grid.n_cells; ++i) {
      const double x = grid.x(i);
      st.v[i] = v(t, x);
      st.u[i] = u(t, x);
      st.theta[i] = theta(t, x);
      st.chi[i] = 1.0;
    }
    return st;
  }

  std::vector<FieldState> history(const Grid& grid, double t_end, double cadence) const {
    std::vector<FieldState> h;
    for (double t = 0.0; t <= t_end + 1e-12; t += cadence) h.push_back(state(grid, t));
    return h;
  }
};

}  // namespace nsac
