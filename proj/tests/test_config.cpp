#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "nsac/config.hpp"
#include "nsac/csvio.hpp"
#include "nsac/runner.hpp"

using namespace nsac;

TEST_CASE("configs survive a JSON round trip", "[config]") {
  for (const auto& name : preset_names()) {
    const ExperimentConfig a = make_preset(name);
    const ExperimentConfig b = config_from_json(to_json(a));
    CHECK(to_json(a) == to_json(b));
  }
}

TEST_CASE("shipped preset files match the built-in table", "[config]") {
  const std::filesystem::path dir = std::filesystem::path(NSAC_SOURCE_DIR) / "presets";
  if (const char* regen = std::getenv("NSAC_REGEN_PRESETS"); regen && *regen == '1') {
    std::filesystem::create_directories(dir);
    for (const auto& name : preset_names()) {
      std::ofstream out(dir / (name + ".json"));
      out << to_json(make_preset(name)).dump(2) << "\n";
    }
  }
  for (const auto& name : preset_names()) {
    std::ifstream in(dir / (name + ".json"));
    REQUIRE(in.good());
    json j;
    in >> j;
    CHECK(j == to_json(make_preset(name)));
  }
}

TEST_CASE("resolution derives the intermediate state and the domain", "[config]") {
  const ExperimentConfig cfg = make_preset("stability_gamma105");
  const ResolvedExperiment rx = resolve(cfg);
  CHECK(rx.rd.v_m > 2.0);
  CHECK(rx.rd.delta == Catch::Approx(1.0 + 1.15));
  CHECK(rx.sp.K_q > 0.0);
  CHECK(rx.sp.t0 == Catch::Approx(1.0 / (0.3 * 0.3)));
  CHECK(rx.grid.x_min < -300.0);
  CHECK(rx.grid.x_max > 150.0);
  CHECK(rx.dt0 > 0.0);
  CHECK(rx.warnings.empty());  // zeta amplitude deliberately below sqrt(gamma-1)
  // entropies of the resolved end states match
  const double sm = rx.gas.entropy_from_vtheta(rx.ends.v_minus, rx.ends.theta_minus);
  const double sp = rx.gas.entropy_from_vtheta(rx.ends.v_plus, rx.ends.theta_plus);
  CHECK(sm == Catch::Approx(sp).margin(1e-12));
}

TEST_CASE("resolution rejects inconsistent end-state blocks", "[config]") {
  ExperimentConfig cfg = make_preset("equilibrium");
  cfg.ends.s_bar.reset();
  CHECK_THROWS_AS(resolve(cfg), std::invalid_argument);

  cfg = make_preset("equilibrium");
  cfg.ends.v_plus = 2.0;
  cfg.ends.s_bar.reset();
  cfg.ends.theta_minus = 1.0;
  cfg.ends.theta_plus = 1.0;  // off the isentrope
  CHECK_THROWS_AS(resolve(cfg), std::domain_error);
}

TEST_CASE("a large temperature perturbation triggers the gamma-weight warning", "[config]") {
  ExperimentConfig cfg = make_preset("chi_dip");
  cfg.perturbation.zeta = {BumpShape::bump, 0.5, 0.0, 4.0};  // >> sqrt(0.05)
  const ResolvedExperiment rx = resolve(cfg);
  REQUIRE(rx.warnings.size() == 1);
  CHECK(rx.warnings[0].find("sqrt(gamma-1)") != std::string::npos);
}

TEST_CASE("unknown preset names are rejected", "[config]") {
  CHECK_THROWS_AS(make_preset("nope"), std::invalid_argument);
}

TEST_CASE("a breached run aborts with partial output in place", "[config]") {
  ExperimentConfig cfg = make_preset("chi_dip");
  cfg.grid.n_cells = 128;
  cfg.solver.t_end = 2.0;
  cfg.solver.diag_cadence = 0.1;
  cfg.perturbation.phi = {BumpShape::bump, -0.9, 0.0, 6.0};
  cfg.perturbation.psi = {BumpShape::bump, -60.0, 0.0, 1.5};  // colliding jet into thin gas
  const ResolvedExperiment rx = resolve(cfg);
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "nsac_breach_test";
  std::filesystem::remove_all(dir);
  const RunOutcome o = run_experiment(rx, dir.string(), false);
  CHECK(o.aborted);
  CHECK(o.abort_cell >= 0);
  CHECK(o.abort_time > 0.0);
  CHECK(std::filesystem::exists(dir / "config.resolved"));
  CHECK(std::filesystem::exists(dir / "diagnostics.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  std::ifstream sj(dir / "summary.json");
  json s;
  sj >> s;
  CHECK(s.at("aborted").get<bool>());
  CHECK(s.at("abort").at("cell").get<int>() == o.abort_cell);
}

TEST_CASE("float formatting round-trips exactly", "[config]") {
  for (double x : {0.1, -1.0 / 3.0, 1e-300, 12345.6789, 2.2437013755407385}) {
    CHECK(std::stod(fmt(x)) == x);
  }
}
