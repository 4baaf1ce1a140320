#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "patholab/families.hpp"
#include "patholab/report.hpp"

namespace patholab {

// Fully resolved run configuration; serializes to config.json and re-executes
// to byte-identical reports for the same seed.
struct RunConfig {
  std::string command = "full-suite";
  std::string family = "w11";  // ignored by full-suite
  int n = 2;
  double beta = 2.0;
  double a = -0.5;
  std::string r0_spec = "auto";  // "auto" or a literal value
  double margin = 0.5;
  int samples = 1000;
  int J = 48;
  std::vector<double> p_grid = {1.0, 1.01, 1.05, 1.5, 2.0, 4.0, 10.0};
  std::vector<double> c_grid = {0.1, 1.0, 10.0};
  double rho_min = std::pow(2.0, -20);
  std::string functional = "all";  // norms filter: all | lp | llogl | exp | hess
  std::uint64_t seed = 7;
  std::string out_dir = "out";
  bool strict = false;

  FamilyParams make_family() const;  // resolves r0 per r0_spec
  JsonValue to_json() const;
  static RunConfig from_json_text(const std::string& text);
};

}  // namespace patholab
