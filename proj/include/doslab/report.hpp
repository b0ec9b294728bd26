#pragma once

#include <map>
#include <string>
#include <vector>

#include "doslab/config.hpp"

namespace doslab {

// One gated quantity inside a run. deviation is relative where a reference
// exists, otherwise the raw quantity being bounded (see label).
struct CheckLine {
  std::string label;
  double value = 0.0;
  double reference = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct RunResult {
  ExperimentConfig config;
  std::string report_json;                       // full report document
  std::map<std::string, std::string> csv_files;  // file name -> content
  std::vector<CheckLine> checks;
  bool pass = true;
};

// Executes one experiment. Throws std::invalid_argument on unusable configs;
// numerical gate failures are reported through checks/pass, not exceptions.
RunResult run_experiment(const ExperimentConfig& config);

// Writes <name>_report.json plus the CSVs into out_dir (created if missing);
// returns the paths written, report first.
std::vector<std::string> write_outputs(const RunResult& result, const std::string& out_dir);

}  // namespace doslab
