#pragma once

#include <string>
#include <vector>

#include "orlhom/epsproblem.hpp"
#include "orlhom/grid.hpp"

namespace orlhom {

// Separable oscillating test function phi(x) psi(x/eps), both closed-form.
struct TestPair {
  std::string id;
  SmoothFn phi;   // smooth on the closure of Omega
  SmoothFn psi;   // Y-periodic
};

// phi in {1, x, x^2, cos(pi x)} times psi in {1, sin(2 pi y)}; the computable
// surrogate for the full class of admissible test functions in 1D.
std::vector<TestPair> default_battery_1d();

// int_Omega u_eps(x) phi(x) psi(x/eps) dx with x/eps reduced mod 1 exactly.
double pairing(const ScalarField& u_eps, double eps, const TestPair& t);

// Candidate two-scale limit u0(x, y) = u(x) + sum_j phi_j(x) psi_j(y).
struct TwoScaleLimit {
  SmoothFn u = SmoothFn::constant(0.0);
  std::vector<SeparableCorrector> u1;
};

// iint u0(x,y) phi(x) psi(y) dx dy by tensor quadrature on (domain, cell).
double target(const TwoScaleLimit& u0, const TestPair& t, const PeriodicGrid& domain,
              const PeriodicGrid& cell);

struct DefectSeries {
  std::string test_id;
  std::vector<double> eps;
  std::vector<double> pairing_value;
  double target_value = 0.0;
  std::vector<double> defect;
  double fitted_slope = 0.0;  // log-defect vs log-eps; +inf when at the floor
  double tolerance = 0.0;
  bool pass = false;
};

struct TwoScaleOptions {
  double rel_tol = 0.05;       // terminal defect vs |target|
  double abs_tol = -1.0;       // < 0: auto, 0.05 * max |target| over the battery
  double slope_min = 0.5;      // required decay order
  double floor = 1e-9;         // defects below this count as converged
};

struct TwoScaleReport {
  std::vector<DefectSeries> tests;
  bool pass = false;
  double abs_tol_used = 0.0;
};

// Defects per test per eps; a test passes when its terminal defect is within
// tolerance and the fitted decay order exceeds slope_min (sequences entirely
// at the floor pass trivially).  eps must be strictly decreasing.
TwoScaleReport check_weak_2s(const std::vector<std::pair<double, ScalarField>>& sequence,
                             const TwoScaleLimit& u0, const std::vector<TestPair>& tests,
                             const PeriodicGrid& cell, const TwoScaleOptions& opts = {});

struct Prop1Report {
  std::vector<TwoScaleReport> per_component;
  bool pass = false;
};

// Gradient decomposition check: each gradient component of the eps-minimizers
// must two-scale converge to xi_k + D_{y_k} u1* with u1* the cell corrector.
Prop1Report check_proposition1(const std::vector<std::pair<double, EpsSolution>>& solutions,
                               Vec xi, const ScalarField& cell_corrector,
                               const std::vector<TestPair>& tests,
                               const TwoScaleOptions& opts = {});

// Least-squares slope of log(y) vs log(x); entries y <= floor are skipped.
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y, double floor);

}  // namespace orlhom
