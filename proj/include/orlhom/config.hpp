#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orlhom/integrand.hpp"
#include "orlhom/nfunc.hpp"
#include "orlhom/solver.hpp"

namespace orlhom {

enum class Scenario { NfuncCheck, Cell, FhomTable, EpsSweep, Recovery, TwoScaleCheck };

const char* scenario_name(Scenario s);
std::optional<Scenario> scenario_from_name(const std::string& name);

struct NFuncSpec {
  std::string family = "power";  // power | power-log | quadratic | exponential
  double p = 2.0;
  double scale = 1.0;  // power family only
  double t0 = 1.0;     // doubling-estimate range
  double T = 1e3;
  double delta2_threshold = 1e3;  // estimate above this is reported as a failure
};

struct IntegrandSpec {
  std::string coefficient = "constant";  // constant | sine | laminate | checkerboard
  double a0 = 1.0;
  double alpha = 2.0;
  double beta = 1.0;
  double a1 = 1.0;
  double a2 = 4.0;
  int axis = 0;
  std::string potential = "quadratic";  // quadratic | power | orlicz
  double p = 2.0;
};

struct GridSpec {
  int dim = 1;
  int cell_n = 256;
  int domain_n = 2048;
};

struct ProblemSpec {
  std::vector<double> xi{1.0};
  std::vector<double> eps{0.125, 0.0625, 0.03125, 0.015625};
  std::vector<double> xi_min{-2.0};
  std::vector<double> xi_max{2.0};
  std::vector<int> xi_count{5};
  std::string delta_schedule = "sqrt";  // sqrt | linear
  std::string twoscale_mode = "synthetic";  // synthetic | minimizer-gradients
};

struct CheckSpec {
  double rel_gap = 0.05;       // terminal energy gap, eps-sweep
  double lower_slack = 1e-3;   // lower-bound slack, eps-sweep
  double slope_min = 0.5;      // two-scale decay order
  double defect_rel = 0.05;    // two-scale / recovery relative tolerance
  double decrease_floor = 1e-6;  // noise floor for decreasing-sequence checks
};

struct OutputSpec {
  bool csv = true;
  bool svg = false;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::Cell;
  std::uint64_t seed = 12345;
  NFuncSpec nfunc;
  IntegrandSpec integrand;
  GridSpec grid;
  ProblemSpec problem;
  SolverOptions solver;
  CheckSpec check;
  OutputSpec output;

  // Normalized round-trippable echo of the effective configuration.
  std::string echo() const;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;  // every violation, not just the first
  bool ok() const { return errors.empty() && config.has_value(); }
};

ParseResult parse_config_text(const std::string& text);
ParseResult parse_config_file(const std::string& path);

NFunction make_nfunc(const NFuncSpec& spec);
Integrand make_integrand(const IntegrandSpec& spec, int dim, const NFuncSpec& nfunc);

}  // namespace orlhom
