// Command-line front end: constructs experiments from JSON configs or built-in
// presets, runs them deterministically, and writes CSV/JSON outputs under
// <out-root>/<name>/.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsac/config.hpp"
#include "nsac/runner.hpp"
#include "nsac/verify.hpp"

namespace fs = std::filesystem;
using nsac::json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
  std::string out_root;
  std::string name;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment config file");
  cmd->add_option("--preset", o.preset,
                  "built-in preset (equilibrium, chi_dip, riemann_ref, profile_ref, "
                  "stability_gamma105, vrepr_refine_coarse, vrepr_refine_fine, mms_ref)");
  cmd->add_option("--set", o.overrides, "override a config key, e.g. --set gas.gamma=1.2")
      ->take_all();
  cmd->add_option("--out-root", o.out_root, "output root (default $NSAC_OUT_ROOT or ./runs)");
  cmd->add_option("--name", o.name, "run name (default: config name)");
}

json parse_value(const std::string& s) {
  try {
    return json::parse(s);
  } catch (...) {
    return json(s);
  }
}

void apply_override(json& j, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("--set expects key.path=value: " + kv);
  std::string path = kv.substr(0, eq);
  const json val = parse_value(kv.substr(eq + 1));
  json* node = &j;
  size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot - pos);
    if (dot == std::string::npos) {
      (*node)[key] = val;
      return;
    }
    node = &(*node)[key];
    pos = dot + 1;
  }
}

nsac::ExperimentConfig load_from_opts(const CommonOpts& o) {
  json j;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open config " + o.config_path);
    in >> j;
  } else if (!o.preset.empty()) {
    j = nsac::to_json(nsac::make_preset(o.preset));
  } else {
    throw std::runtime_error("give --config or --preset");
  }
  for (const auto& kv : o.overrides) apply_override(j, kv);
  nsac::ExperimentConfig cfg = nsac::config_from_json(j);
  if (!o.name.empty()) cfg.name = o.name;
  return cfg;
}

std::string out_dir_for(const CommonOpts& o, const std::string& name) {
  std::string root = o.out_root;
  if (root.empty()) {
    if (const char* env = std::getenv("NSAC_OUT_ROOT")) root = env;
    else root = "runs";
  }
  return root + "/" + name;
}

int cmd_riemann(const CommonOpts& opts, int samples) {
  const nsac::ExperimentConfig cfg = load_from_opts(opts);
  const nsac::ResolvedExperiment rx = nsac::resolve(cfg);
  const auto& d = rx.rd;
  std::printf("s_bar   = %.17g\n", d.s_bar);
  std::printf("v_m     = %.17g\n", d.v_m);
  std::printf("u_m     = %.17g\n", d.u_m);
  std::printf("delta   = %.17g\n", d.delta);
  if (d.fan1[0] == d.fan1[1]) std::printf("fan1    : empty\n");
  else std::printf("fan1    : [%.17g, %.17g]\n", d.fan1[0], d.fan1[1]);
  if (d.fan3[0] == d.fan3[1]) std::printf("fan3    : empty\n");
  else std::printf("fan3    : [%.17g, %.17g]\n", d.fan3[0], d.fan3[1]);

  const std::string dir = out_dir_for(opts, cfg.name);
  fs::create_directories(dir);
  {
    std::ofstream cfgout(dir + "/config.resolved");
    cfgout << rx.resolved_json().dump(2) << "\n";
  }
  nsac::CsvWriter csv(dir + "/riemann.csv", {"xi", "V", "U", "Theta", "S"});
  const double pad = 0.3 * (d.fan3[1] - d.fan1[0]) + 0.1;
  const double lo = d.fan1[0] - pad, hi = d.fan3[1] + pad;
  for (int k = 0; k <= samples; ++k) {
    const double xi = lo + (hi - lo) * k / samples;
    const nsac::RiemannState w = nsac::riemann_eval(rx.gas, d, rx.ends, xi);
    csv.row(xi, w.v, w.u, w.theta, w.s);
  }
  std::printf("wrote %s/riemann.csv\n", dir.c_str());
  return 0;
}

int cmd_profile(const CommonOpts& opts, const std::string& times, int samples) {
  const nsac::ExperimentConfig cfg = load_from_opts(opts);
  const nsac::ResolvedExperiment rx = nsac::resolve(cfg);
  const std::string dir = out_dir_for(opts, cfg.name);
  fs::create_directories(dir);
  {
    std::ofstream cfgout(dir + "/config.resolved");
    cfgout << rx.resolved_json().dump(2) << "\n";
  }
  std::vector<double> ts;
  std::stringstream ss(times);
  std::string tok;
  while (std::getline(ss, tok, ',')) ts.push_back(std::stod(tok));
  int idx = 0;
  for (double t : ts) {
    char name[48];
    std::snprintf(name, sizeof(name), "profile_t%02d.csv", idx++);
    nsac::CsvWriter csv(dir + "/" + name,
                        {"x", "V", "U", "Theta", "S", "V_x", "U_x", "g", "q", "r"});
    const double span = 1.3 * (t + rx.sp.t0) * std::max(std::abs(rx.rd.fan1[0]),
                                                        std::abs(rx.rd.fan3[1])) +
                        30.0 / rx.sp.eps_w;
    std::vector<double> xs;
    for (int k = 0; k <= samples; ++k) xs.push_back(-span + 2.0 * span * k / samples);
    const auto pts = rx.profile.eval_grid(t, xs);
    for (size_t k = 0; k < xs.size(); ++k) {
      const nsac::ProfileResiduals res = rx.profile.residuals(pts[k]);
      csv.row(xs[k], pts[k].V, pts[k].U, pts[k].Th, pts[k].S, pts[k].Vx, pts[k].Ux, res.g,
              res.q_res, res.r_res);
    }
    std::printf("wrote %s/%s (t = %g)\n", dir.c_str(), name, t);
  }
  return 0;
}

int cmd_simulate(const CommonOpts& opts) {
  const nsac::ExperimentConfig cfg = load_from_opts(opts);
  const std::string dir = out_dir_for(opts, cfg.name);
  if (cfg.mode == "mms") {
    fs::create_directories(dir);
    const auto err = nsac::run_mms_level(cfg, cfg.grid.n_cells);
    nsac::CsvWriter csv(dir + "/mms_errors.csv", {"n_cells", "l2_v", "l2_u", "l2_theta", "l2_chi"});
    csv.row(cfg.grid.n_cells, err[0], err[1], err[2], err[3]);
    std::printf("MMS L2 errors at n=%d: v %.3e, u %.3e, theta %.3e, chi %.3e\n", cfg.grid.n_cells,
                err[0], err[1], err[2], err[3]);
    return 0;
  }
  const nsac::ResolvedExperiment rx = nsac::resolve(cfg);
  for (const auto& w : rx.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  const nsac::RunOutcome o = nsac::run_experiment(rx, dir, true);
  std::printf("run %s: t_final=%g E0=%.6g C_obs=%.6g chi in [%.4g, %.4g]\n", cfg.name.c_str(),
              o.final_state.t, o.E0, o.C_obs, o.bounds.chi_min, o.bounds.chi_max);
  if (o.aborted) {
    std::fprintf(stderr, "ABORTED: %s\n", o.abort_reason.c_str());
    return 4;
  }
  return 0;
}

bool compare_csv_trees(const std::string& a, const std::string& b, std::string& why) {
  std::vector<std::string> rels;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file() && e.path().extension() == ".csv")
      rels.push_back(fs::relative(e.path(), a).string());
  std::sort(rels.begin(), rels.end());
  if (rels.empty()) {
    why = "no CSV files produced";
    return false;
  }
  for (const auto& rel : rels) {
    std::ifstream fa(a + "/" + rel, std::ios::binary);
    std::ifstream fb(b + "/" + rel, std::ios::binary);
    if (!fb) {
      why = rel + " missing in second run";
      return false;
    }
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str()) {
      why = rel + " differs";
      return false;
    }
  }
  why = std::to_string(rels.size()) + " CSV files byte-identical";
  return true;
}

// Criterion 8: two back-to-back `verify quick` invocations must produce
// byte-identical CSVs. Re-executes this binary.
nsac::CriterionResult criterion_determinism(const std::string& out_dir, std::uint64_t seed) {
  nsac::verify_detail::Timer timer;
  nsac::CriterionResult r{8, "determinism", false, "", 0.0};
  const std::string self = fs::read_symlink("/proc/self/exe").string();
  const std::string base = out_dir + "/determinism";
  fs::create_directories(base);
  for (const char* sub : {"A", "B"}) {
    const std::string cmd = "\"" + self + "\" verify quick --out-root \"" + base + "\" --name " +
                            sub + " --seed " + std::to_string(seed) + " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      r.details = std::string("sub-invocation ") + sub + " failed";
      r.seconds = timer.seconds();
      return r;
    }
  }
  std::string why;
  r.pass = compare_csv_trees(base + "/A", base + "/B", why);
  r.details = why;
  r.seconds = timer.seconds();
  return r;
}

int cmd_verify(const std::string& level, const CommonOpts& opts, std::uint64_t seed) {
  const std::string dir = out_dir_for(opts, opts.name.empty() ? "verify_" + level : opts.name);
  fs::create_directories(dir);
  std::vector<nsac::CriterionResult> results = nsac::run_verify(level, dir, seed);
  if (level == "full") results.push_back(criterion_determinism(dir, seed));
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] criterion %d %-26s %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.details.c_str(), r.seconds);
    all = all && r.pass;
  }
  std::ofstream vj(dir + "/verdict.json");
  vj << nsac::verdict_json(results).dump(2) << "\n";
  std::printf("%s: %s (verdict in %s/verdict.json)\n", level.c_str(),
              all ? "all criteria passed" : "FAILURES present", dir.c_str());
  return all ? 0 : 1;
}

int cmd_sweep(const CommonOpts& opts, const std::string& param, const std::string& values) {
  json base;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw std::runtime_error("cannot open config " + opts.config_path);
    in >> base;
  } else if (!opts.preset.empty()) {
    base = nsac::to_json(nsac::make_preset(opts.preset));
  } else {
    throw std::runtime_error("give --config or --preset");
  }
  for (const auto& kv : opts.overrides) apply_override(base, kv);
  std::stringstream ss(values);
  std::string tok;
  int idx = 0;
  int rc = 0;
  while (std::getline(ss, tok, ',')) {
    json j = base;
    apply_override(j, param + "=" + tok);
    nsac::ExperimentConfig cfg = nsac::config_from_json(j);
    cfg.name = cfg.name + "_sweep" + std::to_string(idx++);
    const std::string dir = out_dir_for(opts, cfg.name);
    try {
      const nsac::ResolvedExperiment rx = nsac::resolve(cfg);
      const nsac::RunOutcome o = nsac::run_experiment(rx, dir, true);
      std::printf("sweep %s=%s -> %s%s\n", param.c_str(), tok.c_str(), dir.c_str(),
                  o.aborted ? " (ABORTED)" : "");
      if (o.aborted) rc = 4;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "sweep %s=%s failed: %s\n", param.c_str(), tok.c_str(), e.what());
      rc = 1;
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nsac: compressible Navier-Stokes-Allen-Cahn rarefaction-wave laboratory.\n"
      "CSV columns: fields_*.csv (t,x,v,u,theta,chi,s,mu); diagnostics.csv (t, L2/H1/H2/Linf of\n"
      "phi,psi,zeta,xi,varphi, weighted zeta, E, D, intD, int_s_minus_S, convexity terms,\n"
      "field bounds and flags, volume-representation errors, energy checks); riemann.csv (xi,V,U,Theta,S);\n"
      "profile_t*.csv (x,V,U,Theta,S,V_x,U_x,g,q,r)."};
  app.require_subcommand(1);

  CommonOpts opts;
  int samples = 400;
  std::string times = "0,10,100";
  std::string level;
  std::uint64_t seed = 1;
  std::string sweep_param, sweep_values;

  auto* riemann = app.add_subcommand(
      "riemann", "print the two-rarefaction fan structure and sample it to riemann.csv");
  add_common(riemann, opts);
  riemann->add_option("--samples", samples, "number of xi samples");

  auto* profile = app.add_subcommand(
      "profile", "sample the smoothed composite wave to profile_t*.csv at the given times");
  add_common(profile, opts);
  profile->add_option("--t", times, "comma-separated snapshot times");
  profile->add_option("--samples", samples, "number of x samples");

  auto* simulate = app.add_subcommand(
      "simulate", "integrate the NSAC system from profile-plus-perturbation initial data");
  add_common(simulate, opts);

  auto* verify = app.add_subcommand(
      "verify", "run the acceptance criteria (quick: 1-3 + smoke runs, full: 1-8)");
  verify->add_option("level", level, "quick or full")->required()
      ->check(CLI::IsMember({"quick", "full"}));
  add_common(verify, opts);
  verify->add_option("--seed", seed, "RNG seed for sampled checks");

  auto* sweep = app.add_subcommand("sweep", "run one experiment per value of a config key");
  add_common(sweep, opts);
  sweep->add_option("--param", sweep_param, "config key, e.g. gas.gamma")->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (riemann->parsed()) return cmd_riemann(opts, samples);
    if (profile->parsed()) return cmd_profile(opts, times, samples);
    if (simulate->parsed()) return cmd_simulate(opts);
    if (verify->parsed()) return cmd_verify(level, opts, seed);
    if (sweep->parsed()) return cmd_sweep(opts, sweep_param, sweep_values);
  } catch (const nsac::NoTwoRarefactionSolution& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
