#pragma once

#include <string>
#include <vector>

#include "orlhom/config.hpp"

namespace orlhom {

struct RunReport {
  int exit_code = 0;  // 0 pass, 1 execution error, 2 tolerance failure
  bool pass = true;
  std::vector<std::string> lines;
  std::vector<std::string> files;
  double wall_seconds = 0.0;

  std::string summary() const;
};

// Executes the configured scenario, writes CSV (and optional SVG) artifacts
// plus report.txt into out_dir.
RunReport run_experiment(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace orlhom
