#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "nsac/diagnostics.hpp"
#include "nsac/mms.hpp"
#include "nsac/solver.hpp"

using namespace nsac;

namespace {

const GasModel kGas(1.0, 1.0, 1.4, 1.0, 1.0);

BoundaryFn frozen_boundary(const FieldState& st, const Grid& grid) {
  const int n = grid.n_cells;
  const std::array<double, 4> left{st.v[0], st.u[0], st.theta[0], st.chi[0]};
  const std::array<double, 4> right{st.v[n - 1], st.u[n - 1], st.theta[n - 1], st.chi[n - 1]};
  const double xl = grid.x(0);
  return [=](double, double x) { return x == xl ? left : right; };
}

FieldState constant_state(int n, double v, double u, double th, double chi) {
  FieldState st(n);
  for (int i = 0; i < n; ++i) {
    st.v[i] = v;
    st.u[i] = u;
    st.theta[i] = th;
    st.chi[i] = chi;
  }
  return st;
}

}  // namespace

TEST_CASE("chemical potential vanishes in the pure phases", "[solver]") {
  const Grid grid(-5.0, 5.0, 64);
  for (double chi0 : {1.0, 0.0, -1.0}) {
    FieldState st = constant_state(64, 1.7, 0.0, 1.0, chi0);
    for (int i = 0; i < 64; ++i) st.v[i] = 1.0 + 0.3 * std::sin(0.7 * grid.x(i));
    const auto mu = chemical_potential(kGas, grid, st);
    for (double m : mu) CHECK(m == 0.0);
  }
}

TEST_CASE("chemical potential matches the linearized symbol", "[solver]") {
  const Grid grid(-std::numbers::pi, std::numbers::pi, 2048);
  const double a = 1e-3, k = 3.0;
  FieldState st = constant_state(2048, 1.0, 0.0, 1.0, 1.0);
  for (int i = 0; i < 2048; ++i) st.chi[i] = 1.0 + a * std::sin(k * grid.x(i));
  const auto mu = chemical_potential(kGas, grid, st);
  // chi = 1 + g: mu = -g_xx + 2g + 3g^2 + g^3
  for (int i = 1; i < 2047; ++i) {
    const double lin = (k * k + 2.0) * a * std::sin(k * grid.x(i));
    CHECK(std::abs(mu[i] - lin) <= 4.0 * a * a + 1e-4 * a);
  }
}

TEST_CASE("rhs: constant equilibrium state has exactly zero derivatives", "[solver]") {
  const Grid grid(-5.0, 5.0, 64);
  const FieldState st = constant_state(64, 1.3, 0.4, 0.9, 1.0);
  FieldState d(64);
  RhsScratch ws;
  rhs(kGas, grid, st, true, nullptr, d, ws);
  for (int i = 0; i < 64; ++i) {
    CHECK(d.v[i] == 0.0);
    CHECK(d.u[i] == 0.0);
    CHECK(d.theta[i] == 0.0);
    CHECK(d.chi[i] == 0.0);
  }
}

TEST_CASE("rhs: interior volume change telescopes to the boundary flux of u", "[solver]") {
  const Grid grid(-10.0, 10.0, 256);
  FieldState st = constant_state(256, 1.0, 0.0, 1.0, 1.0);
  for (int i = 0; i < 256; ++i) {
    const double x = grid.x(i);
    st.v[i] = 1.5 + 0.4 * std::sin(0.8 * x);
    st.u[i] = 0.3 * std::cos(0.5 * x);
    st.theta[i] = 1.0 + 0.2 * std::cos(x);
    st.chi[i] = 1.0 - 0.2 * std::exp(-x * x);
  }
  FieldState d(256);
  RhsScratch ws;
  const double flux = rhs(kGas, grid, st, true, nullptr, d, ws);
  double sum = 0.0;
  for (int i = 1; i < 255; ++i) sum += d.v[i];
  CHECK(sum * grid.dx == Catch::Approx(flux * grid.dx).margin(1e-13));
}

TEST_CASE("rhs: positivity breach reports the offending cell", "[solver]") {
  const Grid grid(-5.0, 5.0, 64);
  FieldState st = constant_state(64, 1.0, 0.0, 1.0, 1.0);
  st.t = 3.25;
  st.v[17] = -0.5;
  FieldState d(64);
  RhsScratch ws;
  try {
    rhs(kGas, grid, st, true, nullptr, d, ws);
    FAIL("expected PositivityBreach");
  } catch (const PositivityBreach& e) {
    CHECK(e.cell == 17);
    CHECK(e.time == 3.25);
    CHECK(e.field == "v");
  }
}

TEST_CASE("step: equilibrium is preserved exactly over 1e4 steps", "[solver]") {
  const Grid grid(-5.0, 5.0, 64);
  FieldState st = constant_state(64, 1.3, 0.0, 1.1, 1.0);
  SolverConfig cfg;
  cfg.t_end = 1e9;  // no cap
  Stepper stepper(kGas, grid, cfg, frozen_boundary(st, grid));
  for (int k = 0; k < 10000; ++k) stepper.step(st);
  for (int i = 0; i < 64; ++i) {
    CHECK(std::abs(st.v[i] - 1.3) <= 1e-12);
    CHECK(std::abs(st.u[i]) <= 1e-12);
    CHECK(std::abs(st.theta[i] - 1.1) <= 1e-12);
    CHECK(std::abs(st.chi[i] - 1.0) <= 1e-12);
  }
}

TEST_CASE("step: parabolic CFL binds when viscosity grows", "[solver]") {
  const Grid grid(-5.0, 5.0, 128);
  const FieldState st = constant_state(128, 1.0, 0.0, 1.0, 1.0);
  SolverConfig cfg;
  const double dt1 = compute_dt(kGas, grid, st, cfg);
  const GasModel thick(1.0, 1.0, 1.4, 100.0, 1.0);
  const double dt2 = compute_dt(thick, grid, st, cfg);
  CHECK(dt2 < dt1);
  CHECK(dt2 == Catch::Approx(dt1 * std::max(kGas.nu, 1.0) / 100.0).epsilon(1e-12));
}

TEST_CASE("manufactured solution: joint refinement converges at second order", "[solver]") {
  const ManufacturedSolution ms{kGas.R, kGas.gamma, kGas.nu, kGas.kappa};
  const double t_end = 0.1;
  std::array<std::array<double, 4>, 3> errs;
  int lev = 0;
  for (int n : {128, 256, 512}) {
    const Grid grid(0.0, 2.0 * std::numbers::pi, n);
    FieldState st = ms.initial(grid);
    SolverConfig cfg;
    cfg.t_end = t_end;
    cfg.diag_cadence = 0.0;
    cfg.snapshot_cadence = 0.0;
    Stepper stepper(kGas, grid, cfg, ms.boundary(), ms.source());
    stepper.apply_boundary(st, 0.0);
    run_loop(stepper, cfg, st, {});
    CHECK(st.t == Catch::Approx(t_end).margin(1e-12));
    errs[lev++] = ms.l2_error(grid, st);
  }
  for (int f = 0; f < 4; ++f) {
    const double o1 = std::log2(errs[0][f] / errs[1][f]);
    const double o2 = std::log2(errs[1][f] / errs[2][f]);
    INFO("field " << f << " orders " << o1 << " " << o2);
    CHECK(o1 >= 1.9);
    CHECK(o2 >= 1.9);
  }
}

TEST_CASE("chi = 1 initial data evolves exactly like the pure Navier-Stokes path", "[solver]") {
  const Grid grid(-20.0, 20.0, 256);
  FieldState st0 = constant_state(256, 1.0, 0.0, 1.0, 1.0);
  for (int i = 0; i < 256; ++i) {
    const double x = grid.x(i);
    st0.v[i] = 1.0 + 0.3 * std::exp(-x * x / 8.0);
    st0.u[i] = 0.4 * std::exp(-(x - 2.0) * (x - 2.0) / 6.0);
    st0.theta[i] = 1.0 + 0.2 * std::exp(-(x + 3.0) * (x + 3.0) / 10.0);
  }
  SolverConfig cfg;
  cfg.t_end = 1.0;
  FieldState full = st0, reduced = st0;
  {
    Stepper s(kGas, grid, cfg, frozen_boundary(st0, grid));
    run_loop(s, cfg, full, {});
  }
  {
    SolverConfig c2 = cfg;
    c2.phase_field = false;
    Stepper s(kGas, grid, c2, frozen_boundary(st0, grid));
    run_loop(s, c2, reduced, {});
  }
  for (int i = 0; i < 256; ++i) {
    CHECK(std::abs(full.v[i] - reduced.v[i]) <= 1e-10);
    CHECK(std::abs(full.u[i] - reduced.u[i]) <= 1e-10);
    CHECK(std::abs(full.theta[i] - reduced.theta[i]) <= 1e-10);
    CHECK(full.chi[i] == 1.0);
  }
}

TEST_CASE("discrete energy budget closes to boundary fluxes on near-equilibrium data",
          "[solver]") {
  const Grid grid(-10.0, 10.0, 512);
  const int n = grid.n_cells;
  const double a = 3e-4;
  FieldState st = constant_state(n, 1.0, 0.0, 1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    st.v[i] = 1.0 + a * std::exp(-x * x / 4.0);
    st.u[i] = a * std::exp(-(x - 1.0) * (x - 1.0) / 5.0);
    st.theta[i] = 1.0 + a * std::exp(-(x + 1.0) * (x + 1.0) / 3.0);
    st.chi[i] = 1.0 - a * std::exp(-x * x / 6.0);
  }
  FieldState d(n);
  RhsScratch ws;
  rhs(kGas, grid, st, true, nullptr, d, ws);
  const auto mu = chemical_potential(kGas, grid, st);
  const double dx = grid.dx;
  const double Cv = kGas.C_v();

  // d/dt of the total energy density, assembled from the rhs
  auto cx = [&](int i) { return (st.chi[i + 1] - st.chi[i - 1]) / (2.0 * dx); };
  auto dcx = [&](int i) { return (d.chi[i + 1] - d.chi[i - 1]) / (2.0 * dx); };
  double dE = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    dE += Cv * d.theta[i] + st.u[i] * d.u[i] + cx(i) * dcx(i) / st.v[i] -
          cx(i) * cx(i) * d.v[i] / (2.0 * st.v[i] * st.v[i]) +
          st.chi[i] * (st.chi[i] * st.chi[i] - 1.0) * d.chi[i];
  }
  dE *= dx;

  // flux through the faces bounding the interior cells
  auto face_flux = [&](int i) {  // face between cells i and i+1
    const double vb = 0.5 * (st.v[i] + st.v[i + 1]);
    const double ub = 0.5 * (st.u[i] + st.u[i + 1]);
    const double pb = 0.5 * (ws.p[i] + ws.p[i + 1]);
    const double du_ = (st.u[i + 1] - st.u[i]) / dx;
    const double dth = (st.theta[i + 1] - st.theta[i]) / dx;
    const double dchi = (st.chi[i + 1] - st.chi[i]) / dx;
    const double mub = 0.5 * (mu[i] + mu[i + 1]);
    return -pb * ub + kGas.nu * ub * du_ / vb + kGas.kappa * dth / vb -
           0.5 * ub * dchi * dchi / (vb * vb) - mub * dchi;
  };
  const double res = dE - (face_flux(n - 2) - face_flux(0));
  CHECK(std::abs(res) <= 1e-8);
}

TEST_CASE("run: delta = 0 with zero perturbation stays put", "[solver]") {
  const EndStates e{1.0, 1.0, 0.0, 0.0, 1.0, 1.0};
  const RiemannData rd = solve_intermediate(kGas, e);
  const WaveProfile prof(kGas, e, rd, SmoothingParams(0.1, 2.0));
  const Grid grid(-20.0, 20.0, 128);
  SolverConfig cfg;
  cfg.t_end = 2.0;
  cfg.diag_cadence = 0.0;
  const FieldState st = run(kGas, grid, cfg, prof, PerturbationSet{});
  for (int i = 0; i < 128; ++i) {
    CHECK(std::abs(st.v[i] - 1.0) <= 1e-12);
    CHECK(std::abs(st.u[i]) <= 1e-12);
    CHECK(std::abs(st.theta[i] - 1.0) <= 1e-12);
    CHECK(std::abs(st.chi[i] - 1.0) <= 1e-12);
  }
}

TEST_CASE("run: zero perturbation tracks the background wave", "[solver]") {
  const GasModel gas(1.0, 1.0, 1.05, 1.0, 1.0);
  const EndStates e = EndStates::isentropic(gas, 1.0, 0.0, 1.0, 2.0, 1.0);
  const RiemannData rd = solve_intermediate(gas, e);
  const WaveProfile prof(gas, e, rd, SmoothingParams(0.3, 3.0));
  const double t_end = 10.0;
  const auto [xl, xr] = prof.suggest_domain(t_end);
  const Grid grid(xl, xr, 1024);
  SolverConfig cfg;
  cfg.t_end = t_end;
  cfg.diag_cadence = 0.0;
  const FieldState st = run(gas, grid, cfg, prof, PerturbationSet{});
  const auto pts = prof.eval_grid(st.t, grid.cell_centers());
  double sup = 0.0;
  for (int i = 0; i < grid.n_cells; ++i)
    sup = std::max({sup, std::abs(st.v[i] - pts[i].V), std::abs(st.u[i] - pts[i].U),
                    std::abs(st.theta[i] - pts[i].Th)});
  INFO("tracking envelope sup = " << sup);
  CHECK(sup <= 0.1);  // loose envelope; the profile residuals are the only forcing
}

TEST_CASE("run: localized chi dip relaxes back toward the pure phase", "[solver]") {
  const GasModel gas(1.0, 1.0, 1.05, 1.0, 1.0);
  const EndStates e{1.0, 1.0, 0.0, 0.0, 1.0, 1.0};
  const RiemannData rd = solve_intermediate(gas, e);
  const WaveProfile prof(gas, e, rd, SmoothingParams(0.1, 2.0));
  const Grid grid(-30.0, 30.0, 512);
  SolverConfig cfg;
  cfg.t_end = 20.0;
  cfg.diag_cadence = 0.5;
  PerturbationSet pert;
  pert.xi = {BumpShape::sech2, -0.5, 0.0, 2.0};
  std::vector<double> xi_l2;
  RunCallbacks cb;
  cb.on_diag = [&](const FieldState& st) {
    double s = 0.0;
    for (int i = 0; i < grid.n_cells; ++i) s += (st.chi[i] - 1.0) * (st.chi[i] - 1.0);
    xi_l2.push_back(std::sqrt(s * grid.dx));
  };
  run(gas, grid, cfg, prof, pert, cb);
  REQUIRE(xi_l2.size() > 10);
  const double peak = *std::max_element(xi_l2.begin(), xi_l2.end());
  CHECK(xi_l2.back() < 0.1 * peak);
  for (size_t k = xi_l2.size() / 2; k + 1 < xi_l2.size(); ++k)
    CHECK(xi_l2[k + 1] <= xi_l2[k] * (1.0 + 1e-12));
}

TEST_CASE("step: interior mass changes only by the stage-weighted boundary flux", "[solver]") {
  const Grid grid(-10.0, 10.0, 256);
  const int n = grid.n_cells;
  FieldState st = constant_state(n, 1.0, 0.0, 1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    st.v[i] = 1.5 + 0.4 * std::sin(0.8 * x);
    st.u[i] = 0.3 * std::cos(0.5 * x);
    st.theta[i] = 1.0 + 0.2 * std::cos(x);
    st.chi[i] = 1.0 - 0.2 * std::exp(-x * x);
  }
  SolverConfig cfg;
  cfg.t_end = 1e9;
  Stepper stepper(kGas, grid, cfg, frozen_boundary(st, grid));
  for (int k = 0; k < 20; ++k) {
    double before = 0.0;
    for (int i = 1; i < n - 1; ++i) before += st.v[i];
    before *= grid.dx;
    const StepInfo info = stepper.step(st);
    double after = 0.0;
    for (int i = 1; i < n - 1; ++i) after += st.v[i];
    after *= grid.dx;
    CHECK(std::abs((after - before) - info.dt * info.mass_flux) <= 1e-10);
  }
}

TEST_CASE("grid and solver-config validation", "[solver]") {
  CHECK_THROWS_AS(Grid(1.0, -1.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(Grid(-1.0, 1.0, 8), std::invalid_argument);
  SolverConfig cfg;
  cfg.cfl_parabolic = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.t_end = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("run loop lands on the cadence lattice", "[solver]") {
  const Grid grid(-5.0, 5.0, 64);
  FieldState st = constant_state(64, 1.0, 0.0, 1.0, 1.0);
  SolverConfig cfg;
  cfg.t_end = 1.0;
  cfg.diag_cadence = 0.3;
  std::vector<double> ticks;
  Stepper stepper(kGas, grid, cfg, frozen_boundary(st, grid));
  RunCallbacks cb;
  cb.on_diag = [&](const FieldState& s) { ticks.push_back(s.t); };
  run_loop(stepper, cfg, st, cb);
  REQUIRE(ticks.size() == 5);  // 0, .3, .6, .9, 1.0
  CHECK(ticks[1] == 0.3);
  CHECK(ticks[3] == Catch::Approx(0.9).margin(1e-12));
  CHECK(ticks.back() == 1.0);
}
