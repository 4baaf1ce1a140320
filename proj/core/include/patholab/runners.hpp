#pragma once

#include "patholab/report.hpp"
#include "patholab/run_config.hpp"

namespace patholab {

struct RunArtifacts {
  ReportDocument report;
  std::vector<CsvTable> tables;
  std::vector<CsvTable> plotdata;
};

// One runner per CLI subcommand.  Each produces the CheckReport rows plus the
// CSV sidecars; write_artifacts persists them under cfg.out_dir.
RunArtifacts run_families(const RunConfig& cfg);
RunArtifacts run_verify_identity(const RunConfig& cfg);
RunArtifacts run_weak_form(const RunConfig& cfg);
RunArtifacts run_norms(const RunConfig& cfg);
RunArtifacts run_asymptotics(const RunConfig& cfg);
RunArtifacts run_nonunique(const RunConfig& cfg);
RunArtifacts run_full_suite(const RunConfig& cfg);

RunArtifacts run_command(const RunConfig& cfg);  // dispatch on cfg.command

// Writes report.json, config.json, tables/*.csv, plotdata/*.csv, schema.md.
void write_artifacts(const RunArtifacts& artifacts, const RunConfig& cfg);

}  // namespace patholab
