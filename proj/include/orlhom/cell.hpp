#pragma once

#include <vector>

#include "orlhom/grid.hpp"
#include "orlhom/integrand.hpp"
#include "orlhom/solver.hpp"

namespace orlhom {

// min over periodic zero-mean u of int_Y f(y, xi + Du); the value is the
// homogenized density at xi and the minimizer is the corrector.
struct CellProblem {
  Integrand integrand;
  PeriodicGrid grid;  // role Cell
  Vec xi{0.0, 0.0};
  SolverOptions solver;

  CellProblem(Integrand f, PeriodicGrid g, Vec xi_, SolverOptions s = {});
};

struct CellSolution {
  ScalarField corrector;  // zero mean
  double value = 0.0;
  double gradient_residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

// h^d * sum_i f(y_i, xi + (grad_h u)_i) with the periodic forward-difference
// gradient.
double discrete_energy(const CellProblem& p, const ScalarField& u);

CellSolution solve_cell(const CellProblem& p);

// Regular grid of xi values, per-axis range and count.
struct XiGrid {
  int dim = 1;
  Vec min{0.0, 0.0};
  Vec max{0.0, 0.0};
  std::array<int, 2> count{2, 2};

  std::size_t node_count() const;
  Vec node(std::size_t flat) const;
  double step(int axis) const;
};

struct XiNodeStats {
  long iterations = 0;
  double gradient_residual = 0.0;
  bool converged = false;
};

// Interpolated table xi -> f_hom(xi).
struct HomogenizedDensity {
  XiGrid xi_grid;
  std::vector<double> values;
  std::vector<XiNodeStats> stats;
  bool complete = false;  // all nodes converged

  double operator()(const Vec& xi) const;  // multilinear; throws outside range
  Vec gradient(const Vec& xi) const;       // piecewise gradient of the interpolant
};

// Independent solve_cell per xi node; nodes run concurrently.
HomogenizedDensity tabulate_fhom(const Integrand& f, const PeriodicGrid& grid,
                                 const XiGrid& xi_grid, const SolverOptions& solver = {});

struct TableConvexityReport {
  double worst_slack = 0.0;  // min over aligned triples of (v(a)+v(c))/2 - v(b)
  std::size_t worst_node = 0;
  bool pass(double slack_floor) const { return worst_slack >= slack_floor; }
};

// Midpoint convexity along all aligned node triples (axes plus diagonals in 2D).
TableConvexityReport fhom_convexity_check(const HomogenizedDensity& table);

}  // namespace orlhom
