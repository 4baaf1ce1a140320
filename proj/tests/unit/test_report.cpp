#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "patholab/report.hpp"
#include "patholab/run_config.hpp"
#include "patholab/runners.hpp"

using namespace patholab;

TEST_CASE("json emitter: escaping, 17-digit doubles, ordered keys") {
  JsonValue j = JsonValue::object();
  j["b"] = 1;
  j["a"] = std::string("line\nbreak \"q\"");
  j["x"] = 0.1;
  j["arr"] = JsonValue::array();
  j["arr"].push_back(2.5);
  j["arr"].push_back(nullptr);
  const std::string s = j.dump();
  // insertion order preserved, not alphabetical
  CHECK(s.find("\"b\"") < s.find("\"a\""));
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("\\n") != std::string::npos);
  CHECK(s.find("null") != std::string::npos);

  CHECK(JsonValue::format_double(1.0) == "1");
  CHECK(JsonValue::format_double(0.5) == "0.5");
}

TEST_CASE("empty check list still yields a valid document") {
  ReportDocument doc;
  doc.version = "0.0.0";
  doc.seed = 1;
  doc.family = "w11";
  doc.n = 2;
  const std::string s = doc.to_json().dump();
  CHECK(s.find("\"checks\": []") != std::string::npos);
  CHECK(!doc.any_fail(false));
}

TEST_CASE("exit-code contract: FAIL always fails, INCONCLUSIVE only under strict") {
  ReportDocument doc;
  CheckReport ok;
  ok.name = "ok";
  ok.status = CheckStatus::Pass;
  doc.checks.push_back(ok);
  CHECK(!doc.any_fail(false));
  CHECK(!doc.any_fail(true));

  CheckReport inc;
  inc.name = "maybe";
  inc.status = CheckStatus::Inconclusive;
  doc.checks.push_back(inc);
  CHECK(!doc.any_fail(false));
  CHECK(doc.any_fail(true));

  CheckReport bad;
  bad.name = "bad";
  bad.status = CheckStatus::Fail;
  doc.checks.push_back(bad);
  CHECK(doc.any_fail(false));
  CHECK(doc.any_fail(true));
}

TEST_CASE("run config round-trips through json") {
  RunConfig cfg;
  cfg.command = "norms";
  cfg.family = "bmo-logsq";
  cfg.n = 3;
  cfg.beta = 1.75;
  cfg.r0_spec = "123.5";
  cfg.p_grid = {1.0, 3.5};
  cfg.c_grid = {0.25};
  cfg.seed = 987654321;
  cfg.strict = true;
  cfg.out_dir = "some/dir";

  const RunConfig back = RunConfig::from_json_text(cfg.to_json().dump());
  CHECK(back.command == cfg.command);
  CHECK(back.family == cfg.family);
  CHECK(back.n == cfg.n);
  CHECK(back.beta == cfg.beta);
  CHECK(back.r0_spec == cfg.r0_spec);
  CHECK(back.p_grid == cfg.p_grid);
  CHECK(back.c_grid == cfg.c_grid);
  CHECK(back.seed == cfg.seed);
  CHECK(back.strict == cfg.strict);
  CHECK(back.out_dir == cfg.out_dir);
  // and the re-serialization is byte-identical
  CHECK(back.to_json().dump() == cfg.to_json().dump());
}

TEST_CASE("atomic_write creates directories and replaces contents") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "patholab_report_test";
  fs::remove_all(dir);
  const std::string path = (dir / "sub" / "file.txt").string();
  atomic_write(path, "one");
  atomic_write(path, "two");
  std::ifstream is(path);
  std::string contents;
  is >> contents;
  CHECK(contents == "two");
  CHECK(!fs::exists(path + ".tmp"));
  fs::remove_all(dir);
}

TEST_CASE("csv table writes the documented annulus header") {
  CsvTable t;
  t.name = "x";
  t.header = {"j", "inner", "outer", "partial"};
  t.add_row({1.0, 0.25, 0.5, 3.0});
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "patholab_csv_test";
  fs::remove_all(dir);
  write_csv((dir / "x.csv").string(), t);
  std::ifstream is(dir / "x.csv");
  std::string line;
  std::getline(is, line);
  CHECK(line == "j,inner,outer,partial");
  std::getline(is, line);
  CHECK(line == "1,0.25,0.5,3");
  fs::remove_all(dir);
}

TEST_CASE("every full-suite check carries a non-empty anchor") {
  RunConfig cfg;
  cfg.command = "full-suite";
  cfg.n = 2;
  cfg.seed = 7;
  const RunArtifacts art = run_full_suite(cfg);
  CHECK(art.report.checks.size() > 100);
  for (const auto& c : art.report.checks) {
    INFO(c.name);
    CHECK(!c.paper_anchor.empty());
  }
  CHECK(!art.report.any_fail(false));
}

TEST_CASE("families runner is deterministic given the seed") {
  RunConfig cfg;
  cfg.command = "families";
  cfg.family = "lipschitz-log";
  cfg.n = 2;
  cfg.seed = 7;
  const RunArtifacts a = run_families(cfg);
  const RunArtifacts b = run_families(cfg);
  CHECK(a.report.to_json().dump() == b.report.to_json().dump());
  // and no failures on the catalog default
  CHECK(!a.report.any_fail(false));
}

namespace {

int spawn_cli(const std::string& args) {
  const char* cli = std::getenv("PATHOLAB_CLI");
  REQUIRE(cli != nullptr);
  const std::string cmd = std::string(cli) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str()) / 256;
}

}  // namespace

TEST_CASE("cli exit codes: pass, forced failure, strict promotion, usage error") {
  if (!std::getenv("PATHOLAB_CLI")) return;  // spawn tests need the binary path
  namespace fs = std::filesystem;
  const std::string out = (fs::temp_directory_path() / "patholab_cli_exit").string();

  // clean run: exit 0
  CHECK(spawn_cli("families --family lipschitz-log --n 2 --out " + out) == 0);

  // forced failure: a legal but non-elliptic explicit r0 (log r0 = 1.2 < 4)
  CHECK(spawn_cli("families --family lipschitz-log --n 2 --r0 3.4 --out " + out) == 1);

  // INCONCLUSIVE (LlogL exactly at beta = 2) passes by default, fails --strict
  const std::string norms = "norms --family w11 --beta 2 --functional llogl --out " + out;
  CHECK(spawn_cli(norms) == 0);
  CHECK(spawn_cli(norms + " --strict") == 1);

  // usage error: unknown family
  CHECK(spawn_cli("families --family nosuch --out " + out) > 1);
  fs::remove_all(out);
}
