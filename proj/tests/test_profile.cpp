#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "nsac/profile.hpp"

using namespace nsac;

namespace {

const GasModel kGas(1.0, 1.0, 1.4, 1.0, 1.0);

WaveProfile ref_profile(double eps_w = 0.1, double q = 2.0) {
  const EndStates e = EndStates::isentropic(kGas, 1.0, 0.0, 1.0, 2.0, 1.0);
  const RiemannData d = solve_intermediate(kGas, e);
  return WaveProfile(kGas, e, d, SmoothingParams(eps_w, q));
}

WaveProfile constant_profile() {
  const EndStates e{1.0, 1.0, 0.2, 0.2, 1.0, 1.0};
  const RiemannData d = solve_intermediate(kGas, e);
  return WaveProfile(kGas, e, d, SmoothingParams(0.1, 2.0));
}

}  // namespace

TEST_CASE("constant end states give the constant profile", "[profile]") {
  const WaveProfile p = constant_profile();
  for (double t : {0.0, 5.0, 500.0}) {
    for (double x : {-100.0, 0.0, 37.0}) {
      const ProfilePoint pt = p.eval(t, x);
      CHECK(pt.V == 1.0);
      CHECK(pt.U == 0.2);
      CHECK(pt.Th == 1.0);
      CHECK(pt.Vx == 0.0);
      CHECK(pt.Ux == 0.0);
      CHECK(pt.Vt == 0.0);
      CHECK(pt.Tht == 0.0);
      const ProfileResiduals r = p.residuals(t, x);
      CHECK(r.g == 0.0);
      CHECK(r.q_res == 0.0);
      CHECK(r.r_res == 0.0);
    }
  }
}

TEST_CASE("V_t = U_x > 0 pointwise", "[profile]") {
  const WaveProfile p = ref_profile();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> tr(0.0, 2000.0);
  std::uniform_real_distribution<double> xr(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double t = tr(rng);
    const double x = xr(rng) * 1.3 * (t + p.smoothing().t0 + 30.0);
    const ProfilePoint pt = p.eval(t, x);
    CHECK(pt.Ux > 0.0);
    CHECK(std::abs(pt.Vt - pt.Ux) <= 1e-8);
  }
}

TEST_CASE("composition consistency: lambda_i(V_i) equals the Burgers speed", "[profile]") {
  const WaveProfile p = ref_profile();
  const auto& sp = p.smoothing();
  for (double t : {0.0, 10.0, 300.0}) {
    for (double x : {-40.0, -3.0, 0.0, 2.0, 60.0}) {
      const ProfilePoint pt = p.eval(t, x);
      const double w1 = burgers_eval(sp, p.w_edge(WaveFamily::one, 0), p.w_edge(WaveFamily::one, 1),
                                     t + sp.t0, x).w;
      CHECK(kGas.lambda(WaveFamily::one, pt.f1.V, p.riemann().s_bar) ==
            Catch::Approx(w1).epsilon(1e-12));
      const double w3 = burgers_eval(sp, p.w_edge(WaveFamily::three, 0),
                                     p.w_edge(WaveFamily::three, 1), t + sp.t0, x).w;
      CHECK(kGas.lambda(WaveFamily::three, pt.f3.V, p.riemann().s_bar) ==
            Catch::Approx(w3).epsilon(1e-12));
    }
  }
}

TEST_CASE("profile derivatives match centered differences at order 2", "[profile]") {
  const WaveProfile p = ref_profile();
  const double t = 7.0;
  for (double x : {-110.0, -50.0, 1.3, 47.0}) {
    double prev_err = 1e300;
    for (int k = 0; k < 3; ++k) {
      const double h = 0.5 / (1 << k);
      const ProfilePoint pp = p.eval(t, x + h);
      const ProfilePoint pm = p.eval(t, x - h);
      const ProfilePoint pc = p.eval(t, x);
      const ProfilePoint qp = p.eval(t + h, x);
      const ProfilePoint qm = p.eval(t - h, x);
      const double err = std::abs((pp.V - pm.V) / (2 * h) - pc.Vx) +
                         std::abs((pp.U - pm.U) / (2 * h) - pc.Ux) +
                         std::abs((pp.Th - pm.Th) / (2 * h) - pc.Thx) +
                         std::abs((qp.V - qm.V) / (2 * h) - pc.Vt) +
                         std::abs((qp.U - qm.U) / (2 * h) - pc.Ut) +
                         std::abs((qp.Th - qm.Th) / (2 * h) - pc.Tht);
      if (k > 0) CHECK(err <= prev_err * 0.3);  // better than order ~1.7 per halving
      prev_err = err;
    }
    CHECK(prev_err < 1e-6);
  }
}

TEST_CASE("far field reaches the end states within 1e-6 on the suggested domain", "[profile]") {
  const WaveProfile p = ref_profile();
  const double t_end = 100.0;
  const auto [x_min, x_max] = p.suggest_domain(t_end, 1e-6, 1.2);
  const EndStates& e = p.ends();
  for (double t : {0.0, t_end}) {
    const ProfilePoint pr = p.eval(t, x_max);
    CHECK(std::abs(pr.V - e.v_plus) <= 1e-6);
    CHECK(std::abs(pr.U - e.u_plus) <= 1e-6);
    const ProfilePoint pl = p.eval(t, x_min);
    CHECK(std::abs(pl.V - e.v_minus) <= 1e-6);
    CHECK(std::abs(pl.U - e.u_minus) <= 1e-6);
  }
}

TEST_CASE("sup distance to the exact Riemann fan decreases over time decades", "[profile]") {
  const WaveProfile p = ref_profile();
  const RiemannData& d = p.riemann();
  const EndStates& e = p.ends();
  double prev = 1e300;
  for (double t : {100.0, 1000.0, 10000.0}) {
    double sup = 0.0;
    const double span = 1.4 * (t + p.smoothing().t0);
    std::vector<double> xs;
    for (int k = 0; k <= 2400; ++k) xs.push_back(-span + 2.0 * span * k / 2400.0);
    const auto pts = p.eval_grid(t, xs);
    for (size_t k = 0; k < xs.size(); ++k) {
      const RiemannState w = riemann_eval(kGas, d, e, xs[k] / t);
      sup = std::max({sup, std::abs(pts[k].V - w.v), std::abs(pts[k].U - w.u),
                      std::abs(pts[k].Th - w.theta)});
    }
    CHECK(sup < prev);
    prev = sup;
  }
  CHECK(prev < 0.02);  // already close at t = 1e4
}

TEST_CASE("residuals vanish identically for one-wave data", "[profile]") {
  const double up = rarefaction_integral(kGas, 1.0, 2.0, 0.0);
  const EndStates e = EndStates::isentropic(kGas, 2.0, 0.0, std::pow(2.0, -0.4), 1.0, up);
  const RiemannData d = solve_intermediate(kGas, e);
  const WaveProfile p(kGas, e, d, SmoothingParams(0.1, 2.0));
  for (double t : {0.0, 15.0}) {
    for (double x : {-60.0, 0.0, 35.0}) {
      const ProfileResiduals r = p.residuals(t, x);
      CHECK(std::abs(r.g) <= 1e-10);
      CHECK(std::abs(r.q_res) <= 1e-10);
      CHECK(std::abs(r.r_res) <= 1e-10);
    }
  }
}

TEST_CASE("temperature residual agrees with its algebraic form", "[profile]") {
  const WaveProfile p = ref_profile();
  for (double t : {0.0, 4.0, 90.0}) {
    for (double x : {-30.0, -1.0, 0.5, 20.0}) {
      const ProfilePoint pt = p.eval(t, x);
      const ProfileResiduals r = p.residuals(pt);
      const auto pr = [&](double v, double th) { return kGas.R * th / v; };
      const double alg = pr(pt.V, pt.Th) * pt.Ux - pr(pt.f1.V, pt.f1.Th) * pt.f1.Ux -
                         pr(pt.f3.V, pt.f3.Th) * pt.f3.Ux;
      CHECK(r.r_res == Catch::Approx(alg).margin(1e-12));
    }
  }
}

TEST_CASE("energy residual agrees with its bracketed-difference form", "[profile]") {
  // q can also be assembled from per-family differences of the energy flux;
  // since each single wave is an exact solution the two forms must coincide.
  const WaveProfile p = ref_profile();
  const double Cv = kGas.C_v();
  const auto pr = [&](double v, double th) { return kGas.R * th / v; };
  for (double t : {0.0, 4.0, 90.0}) {
    for (double x : {-30.0, -1.0, 0.5, 20.0}) {
      const ProfilePoint pt = p.eval(t, x);
      const ProfileResiduals r = p.residuals(pt);
      const auto flux_x = [&](double U, double Ux, double Ut, const FamilyPoint& f) {
        (void)Ut;
        const double px = kGas.p_v(f.V, f.Th) * f.Vx + kGas.p_theta(f.V) * f.Thx;
        return Ux * pr(f.V, f.Th) + U * px;
      };
      const FamilyPoint comp{pt.V,  pt.U,  pt.Th, pt.Vx, pt.Ux,
                             pt.Thx, pt.Vt, pt.Ut, pt.Tht};
      const double alg = (Cv * pt.Tht - Cv * pt.f1.Tht - Cv * pt.f3.Tht) +
                         (pt.U * pt.Ut - pt.f1.U * pt.f1.Ut - pt.f3.U * pt.f3.Ut) +
                         (flux_x(pt.U, pt.Ux, pt.Ut, comp) -
                          flux_x(pt.f1.U, pt.f1.Ux, pt.f1.Ut, pt.f1) -
                          flux_x(pt.f3.U, pt.f3.Ux, pt.f3.Ut, pt.f3));
      CHECK(r.q_res == Catch::Approx(alg).margin(1e-11));
    }
  }
}

TEST_CASE("interaction residual g_x decays at the expected polynomial rate", "[profile]") {
  const WaveProfile p = ref_profile(0.1, 2.0);
  const double q = p.smoothing().q_exp;
  auto l1_gx = [&](double t) {
    const double span = 1.3 * (t + p.smoothing().t0) + 200.0;
    const int n = 30000;
    std::vector<double> xs(n + 1);
    for (int k = 0; k <= n; ++k) xs[k] = -span + 2.0 * span * k / n;
    const auto pts = p.eval_grid(t, xs);
    const double dx = 2.0 * span / n;
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double w = (k == 0 || k == n) ? 0.5 : 1.0;
      s += w * std::abs(p.residuals(pts[k]).g_x);
    }
    return s * dx;
  };
  const double n3 = l1_gx(1e3), n4 = l1_gx(1e4), n5 = l1_gx(1e5);
  const double slope43 = std::log(n4 / n3) / std::log(10.0);
  const double slope54 = std::log(n5 / n4) / std::log(10.0);
  CHECK(slope43 <= -2.0 * q / 3.0 + 0.3);
  CHECK(slope54 <= -2.0 * q / 3.0 + 0.3);
}
