#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "nsac/burgers.hpp"
#include "nsac/gas.hpp"
#include "nsac/riemann.hpp"

namespace nsac {

struct FamilyPoint {
  double V, U, Th;
  double Vx, Ux, Thx;
  double Vt, Ut, Tht;
};

struct ProfilePoint {
  double V, U, Th, S;
  double Vx, Ux, Thx;
  double Vt, Ut, Tht;
  FamilyPoint f1, f3;
};

struct ProfileResiduals {
  double g;      // pressure interaction defect
  double g_x;
  double q_res;  // total-energy equation defect
  double r_res;  // temperature equation defect: C_v Th_t + p(V,Th) U_x
};

// Smooth approximate composite wave: per family i in {1,3},
//   lambda_i(V_i(t,x), s_bar) = w_i(t + t0, x)
// with w_i the exact smoothed-Burgers solution between the fan edge speeds,
// and the composite (V, U, Th) = (V1 + V3 - v_m, U1 + U3 - u_m, Th1 + Th3 - theta_m).
// Each single wave solves the Euler system exactly, so the residuals g, q, r
// are pure wave-interaction terms.
class WaveProfile {
 public:
  WaveProfile(const GasModel& gas, const EndStates& ends, const RiemannData& rd,
              const SmoothingParams& sp)
      : gas_(gas), ends_(ends), rd_(rd), sp_(sp) {
    w1_[0] = rd.fan1[0];
    w1_[1] = rd.fan1[1];
    w3_[0] = rd.fan3[0];
    w3_[1] = rd.fan3[1];
    theta_m_ = gas.theta_from_vs(rd.v_m, rd.s_bar);
    // A root-solve can leave a degenerate fan inverted at roundoff level.
    for (auto* w : {w1_, w3_}) {
      const double tol = 1e-10 * (std::abs(w[0]) + std::abs(w[1]));
      if (w[1] < w[0] && w[0] - w[1] <= tol) w[1] = w[0];
    }
    if (w1_[0] > w1_[1] || w3_[0] > w3_[1])
      throw std::invalid_argument("WaveProfile: fan edge speeds out of order");
  }

  const GasModel& gas() const { return gas_; }
  const EndStates& ends() const { return ends_; }
  const RiemannData& riemann() const { return rd_; }
  const SmoothingParams& smoothing() const { return sp_; }
  double theta_m() const { return theta_m_; }
  double w_edge(WaveFamily f, int side) const { return f == WaveFamily::one ? w1_[side] : w3_[side]; }

  ProfilePoint eval(double t, double x) const {
    double h1 = 0.0, h3 = 0.0;
    return eval_hinted(t, x, h1, h3);
  }

  // Caller-held characteristic hints; cheap when (t, x) moves slowly.
  ProfilePoint eval(double t, double x, double& hint1, double& hint3) const {
    return eval_hinted(t, x, hint1, hint3);
  }

  // Evaluate along an ascending x sweep; characteristic roots warm-start from
  // the previous point.
  std::vector<ProfilePoint> eval_grid(double t, std::span<const double> xs) const {
    std::vector<ProfilePoint> out;
    out.reserve(xs.size());
    double h1 = 0.0, h3 = 0.0;
    for (double x : xs) out.push_back(eval_hinted(t, x, h1, h3));
    return out;
  }

  ProfileResiduals residuals(double t, double x) const { return residuals(eval(t, x)); }

  ProfileResiduals residuals(const ProfilePoint& p) const {
    const double Cv = gas_.C_v();
    const auto pr = [this](double v, double th) { return gas_.R * th / v; };
    const auto pr_x = [this](const FamilyPoint& f) {
      return gas_.p_v(f.V, f.Th) * f.Vx + gas_.p_theta(f.V) * f.Thx;
    };
    ProfileResiduals res;
    res.g = pr(p.V, p.Th) - pr(p.f1.V, p.f1.Th) - pr(p.f3.V, p.f3.Th) + pr(rd_.v_m, theta_m_);
    const double px = gas_.p_v(p.V, p.Th) * p.Vx + gas_.p_theta(p.V) * p.Thx;
    res.g_x = px - pr_x(p.f1) - pr_x(p.f3);
    res.r_res = Cv * p.Tht + pr(p.V, p.Th) * p.Ux;
    res.q_res = Cv * p.Tht + p.U * p.Ut + p.Ux * pr(p.V, p.Th) + p.U * px;
    return res;
  }

  // Domain on which the profile sits within tol of its far-field constants up
  // to time t_end, fan travel padded by the given margin.
  std::pair<double, double> suggest_domain(double t_end, double tol = 1e-6,
                                           double margin = 1.2) const {
    const double T = t_end + sp_.t0;
    const double y1 = tail_reach(w1_[0], w1_[1], tol);
    const double y3 = tail_reach(w3_[0], w3_[1], tol);
    const double ytail = std::max({y1, y3, 20.0});
    const double left = std::min({w1_[0], w3_[0], 0.0}) * T - ytail;
    const double right = std::max({w1_[1], w3_[1], 0.0}) * T + ytail;
    return {margin * left, margin * right};
  }

 private:
  FamilyPoint constant_family(double v, double u) const {
    FamilyPoint f{};
    f.V = v;
    f.U = u;
    f.Th = gas_.theta_from_vs(v, rd_.s_bar);
    return f;
  }

  FamilyPoint eval_family(WaveFamily fam, double tb, double x, double& hint) const {
    const double wm = w_edge(fam, 0), wp = w_edge(fam, 1);
    const bool one = fam == WaveFamily::one;
    if (wp - wm <= 1e-14 * (std::abs(wm) + std::abs(wp)))
      return one ? constant_family(ends_.v_minus, ends_.u_minus)
                 : constant_family(rd_.v_m, rd_.u_m);
    const BurgersValue b = burgers_eval(sp_, wm, wp, tb, x, &hint);
    FamilyPoint f;
    f.V = gas_.lambda_inverse(fam, b.w, rd_.s_bar);
    const double dlam = gas_.dlambda_dv(fam, f.V, rd_.s_bar);
    f.Vx = b.w_x / dlam;
    f.Vt = -b.w * f.Vx;
    f.Ux = f.Vt;
    f.Ut = b.w * b.w * f.Vx;
    f.U = one ? ends_.u_minus + rarefaction_integral(gas_, ends_.v_minus, f.V, rd_.s_bar)
              : rd_.u_m - rarefaction_integral(gas_, rd_.v_m, f.V, rd_.s_bar);
    f.Th = gas_.theta_from_vs(f.V, rd_.s_bar);
    const double dthdv = (1.0 - gas_.gamma) * f.Th / f.V;
    f.Thx = dthdv * f.Vx;
    f.Tht = dthdv * f.Vt;
    return f;
  }

  ProfilePoint eval_hinted(double t, double x, double& h1, double& h3) const {
    const double tb = t + sp_.t0;
    ProfilePoint p;
    p.f1 = eval_family(WaveFamily::one, tb, x, h1);
    p.f3 = eval_family(WaveFamily::three, tb, x, h3);
    p.V = p.f1.V + p.f3.V - rd_.v_m;
    p.U = p.f1.U + p.f3.U - rd_.u_m;
    p.Th = p.f1.Th + p.f3.Th - theta_m_;
    p.S = rd_.s_bar;
    p.Vx = p.f1.Vx + p.f3.Vx;
    p.Ux = p.f1.Ux + p.f3.Ux;
    p.Thx = p.f1.Thx + p.f3.Thx;
    p.Vt = p.f1.Vt + p.f3.Vt;
    p.Ut = p.f1.Ut + p.f3.Ut;
    p.Tht = p.f1.Tht + p.f3.Tht;
    return p;
  }

  // Distance (in the initial-data variable) past which |w0 - w_edge| stays
  // below the speed increment matching a far-field tolerance tol on V.
  double tail_reach(double wm, double wp, double tol) const {
    const double dw = wp - wm;
    if (dw <= 0.0) return 0.0;
    // |dlambda/dv| over the states involved; smallest value is conservative.
    double dmin = std::numeric_limits<double>::infinity();
    for (double v : {ends_.v_minus, rd_.v_m, ends_.v_plus})
      dmin = std::min(dmin, std::abs(gas_.dlambda_dv(WaveFamily::three, v, rd_.s_bar)));
    const double tol_w = tol * dmin;
    const double q = sp_.q_exp;
    // tail bound T(z) <= z^(1-2q) / (2q-1)
    const double z = std::pow(0.5 * dw * sp_.K_q / ((2.0 * q - 1.0) * tol_w), 1.0 / (2.0 * q - 1.0));
    return z / sp_.eps_w;
  }

  GasModel gas_;
  EndStates ends_;
  RiemannData rd_;
  SmoothingParams sp_;
  double w1_[2], w3_[2];
  double theta_m_;
};

}  // namespace nsac
