#include "patholab/run_config.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace patholab {

FamilyParams RunConfig::make_family() const {
  const Family fam = family_from_name(family);
  const bool auto_r0 = r0_spec == "auto";
  const double r0 = auto_r0 ? kAutoR0 : std::stod(r0_spec);
  switch (fam) {
    case Family::Power:
      return make_power(n, a);
    case Family::W11LogPow:
      return make_w11(n, beta, r0, margin);
    case Family::LipschitzLog:
      return make_lipschitz_log(n, r0, margin);
    case Family::BmoLogSq:
      return make_bmo_logsq(n, r0, margin);
  }
  throw std::logic_error("unreachable");
}

JsonValue RunConfig::to_json() const {
  JsonValue j = JsonValue::object();
  j["command"] = command;
  j["family"] = family;
  j["n"] = n;
  j["beta"] = beta;
  j["a"] = a;
  j["r0"] = r0_spec;
  j["margin"] = margin;
  j["samples"] = samples;
  j["J"] = J;
  JsonValue pg = JsonValue::array();
  for (double p : p_grid) pg.push_back(p);
  j["p_grid"] = pg;
  JsonValue cg = JsonValue::array();
  for (double c : c_grid) cg.push_back(c);
  j["c_grid"] = cg;
  j["rho_min"] = rho_min;
  j["functional"] = functional;
  j["seed"] = static_cast<std::int64_t>(seed);
  j["out"] = out_dir;
  j["strict"] = strict;
  return j;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  RunConfig cfg;
  cfg.command = j.value("command", cfg.command);
  cfg.family = j.value("family", cfg.family);
  cfg.n = j.value("n", cfg.n);
  cfg.beta = j.value("beta", cfg.beta);
  cfg.a = j.value("a", cfg.a);
  if (j.contains("r0")) {
    if (j["r0"].is_string())
      cfg.r0_spec = j["r0"].get<std::string>();
    else
      cfg.r0_spec = JsonValue::format_double(j["r0"].get<double>());
  }
  cfg.margin = j.value("margin", cfg.margin);
  cfg.samples = j.value("samples", cfg.samples);
  cfg.J = j.value("J", cfg.J);
  if (j.contains("p_grid")) cfg.p_grid = j["p_grid"].get<std::vector<double>>();
  if (j.contains("c_grid")) cfg.c_grid = j["c_grid"].get<std::vector<double>>();
  cfg.rho_min = j.value("rho_min", cfg.rho_min);
  cfg.functional = j.value("functional", cfg.functional);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.out_dir = j.value("out", cfg.out_dir);
  cfg.strict = j.value("strict", cfg.strict);
  return cfg;
}

}  // namespace patholab
