// patholab: constructs the catalog of pathological solutions to
// -Div(A grad u) = 0 with continuous coefficients and verifies every
// checkable claim about them.  Writes report.json plus CSV sidecars.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "patholab/quadrature.hpp"
#include "patholab/runners.hpp"
#include "patholab/version.hpp"

namespace {

int run(const patholab::RunConfig& cfg) {
  const patholab::RunArtifacts art = patholab::run_command(cfg);
  patholab::write_artifacts(art, cfg);
  int fails = 0, inconclusive = 0;
  for (const auto& c : art.report.checks) {
    if (c.status == patholab::CheckStatus::Fail) ++fails;
    if (c.status == patholab::CheckStatus::Inconclusive) ++inconclusive;
  }
  std::printf("%s: %zu checks, %d FAIL, %d INCONCLUSIVE -> %s/report.json\n",
              cfg.command.c_str(), art.report.checks.size(), fails, inconclusive,
              cfg.out_dir.c_str());
  return art.report.any_fail(cfg.strict) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pathological-solution verification toolkit"};
  app.set_version_flag("--version", patholab::kVersion);

  patholab::RunConfig cfg;
  std::string r0_raw = "auto";
  std::string config_path;

  const std::vector<std::string> commands = {"families",     "verify-identity", "weak-form",
                                             "norms",        "asymptotics",     "nonunique",
                                             "full-suite"};
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--family", cfg.family, "power | w11 | lipschitz-log | bmo-logsq")
        ->check(CLI::IsMember({"power", "w11", "lipschitz-log", "bmo-logsq"}));
    sub->add_option("--n", cfg.n, "space dimension")->check(CLI::Range(2, 8));
    sub->add_option("--beta", cfg.beta, "w11 exponent (> 1)");
    sub->add_option("--a", cfg.a, "power exponent");
    sub->add_option("--r0", r0_raw, "log offset: auto or a value > e");
    sub->add_option("--margin", cfg.margin, "ellipticity margin for auto r0");
    sub->add_option("--samples", cfg.samples, "sample count for identity sweeps");
    sub->add_option("-J,--J", cfg.J, "dyadic annulus depth");
    sub->add_option("--p-grid", cfg.p_grid, "L^p exponent grid")->delimiter(',');
    sub->add_option("--c-grid", cfg.c_grid, "exp(c|Du|) coefficient grid")->delimiter(',');
    sub->add_option("--rho-min", cfg.rho_min, "smallest inner radius for weak-form checks");
    sub->add_option("--functional", cfg.functional,
                    "norms filter: all | lp | llogl | exp | hess")
        ->check(CLI::IsMember({"all", "lp", "llogl", "exp", "hess"}));
    sub->add_option("--seed", cfg.seed, "PRNG seed");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_flag("--strict", cfg.strict, "INCONCLUSIVE rows fail the exit code");
    sub->add_option("--config", config_path, "load a persisted config.json, then apply flags");
  }
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is) {
      std::cerr << "cannot read config: " << config_path << "\n";
      return 2;
    }
    std::stringstream buf;
    buf << is.rdbuf();
    try {
      patholab::RunConfig loaded = patholab::RunConfig::from_json_text(buf.str());
      // flags given on the command line override the loaded config
      loaded.command = sub->get_name();
      if (sub->count("--family")) loaded.family = cfg.family;
      if (sub->count("--n")) loaded.n = cfg.n;
      if (sub->count("--beta")) loaded.beta = cfg.beta;
      if (sub->count("--a")) loaded.a = cfg.a;
      if (sub->count("--r0")) loaded.r0_spec = r0_raw;
      if (sub->count("--margin")) loaded.margin = cfg.margin;
      if (sub->count("--samples")) loaded.samples = cfg.samples;
      if (sub->count("--J")) loaded.J = cfg.J;
      if (sub->count("--p-grid")) loaded.p_grid = cfg.p_grid;
      if (sub->count("--c-grid")) loaded.c_grid = cfg.c_grid;
      if (sub->count("--rho-min")) loaded.rho_min = cfg.rho_min;
      if (sub->count("--functional")) loaded.functional = cfg.functional;
      if (sub->count("--seed")) loaded.seed = cfg.seed;
      if (sub->count("--out")) loaded.out_dir = cfg.out_dir;
      if (sub->count("--strict")) loaded.strict = cfg.strict;
      cfg = loaded;
    } catch (const std::exception& e) {
      std::cerr << "bad config: " << e.what() << "\n";
      return 2;
    }
  } else {
    cfg.command = sub->get_name();
    cfg.r0_spec = r0_raw;
  }

  try {
    return run(cfg);
  } catch (const patholab::QuadratureError& e) {
    std::cerr << "quadrature failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
