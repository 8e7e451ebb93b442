#pragma once

#include <functional>
#include <vector>

#include "orlhom/cell.hpp"
#include "orlhom/grid.hpp"
#include "orlhom/integrand.hpp"
#include "orlhom/norms.hpp"
#include "orlhom/solver.hpp"

namespace orlhom {

// min of int_Omega f(x/eps, Du) over fields matching the affine data
// xi . x on the boundary.  Admissible eps are reciprocals of integers
// dividing n, with at least 8 nodes per period, so the oscillation is
// resolved exactly by the mesh.
struct OscillatingProblem {
  Integrand integrand;
  PeriodicGrid grid;  // role Domain
  double epsilon = 0.125;
  Vec xi{0.0, 0.0};
  SolverOptions solver;

  OscillatingProblem(Integrand f, PeriodicGrid g, double eps, Vec xi_, SolverOptions s = {});

  int inv_eps() const;            // 1/eps as an integer
  int nodes_per_period() const;   // n * eps
};

// Checks the admissibility constraints without constructing; returns a
// human-readable violation or empty string.
std::string epsilon_admissibility_error(int n, double eps);

struct EpsSolution {
  ScalarField minimizer;
  double energy = 0.0;
  double gradient_residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

EpsSolution solve_eps(const OscillatingProblem& p);
// Warm-started variant: the energy is convex, so the starting point affects
// cost only; boundary nodes of the guess are clamped to the affine data.
EpsSolution solve_eps(const OscillatingProblem& p, const ScalarField& initial_guess);

// Homogenization ansatz xi . x + eps * (psi(x/eps) - psi(0)) with boundary
// nodes clamped to the affine data; the natural warm start once the cell
// corrector psi is known.
ScalarField two_scale_ansatz(const PeriodicGrid& domain, Vec xi,
                             const ScalarField& cell_corrector, double eps);

// Same solver over the tabulated density xi -> table(xi); with affine data
// and a convex table the minimizer is the affine extension, so the energy
// must come out as table(xi).
EpsSolution solve_homogenized(const HomogenizedDensity& table, const PeriodicGrid& grid,
                              Vec xi, const SolverOptions& solver = {});

// Closed-form scalar function with gradient, used for test functions,
// affine data, and separable correctors.
struct SmoothFn {
  std::function<double(Point)> value;
  std::function<Vec(Point)> grad;

  static SmoothFn constant(double c);
  static SmoothFn affine(Vec xi, int dim);  // x -> xi . x
};

// Separable corrector v(x, y) = phi(x) * psi(y) with psi Y-periodic and
// zero mean.  psi.grad is the periodic gradient D_y psi.
struct SeparableCorrector {
  SmoothFn phi;
  SmoothFn psi;
};

// Wraps a sampled cell field into a SmoothFn by periodic multilinear
// interpolation; the gradient is the forward-difference gradient of the
// field, piecewise constant per cell.
SmoothFn periodic_interpolant(const ScalarField& psi);

// Exact reduction of x/eps modulo 1 for admissible eps: node i of an n-grid
// maps to node (i * inv_eps) mod n.
Point fast_variable(const PeriodicGrid& grid, std::size_t node_index, int inv_eps);

// u(x) + eps * phi(x) * psi(x/eps) sampled on the grid of u.
ScalarField build_recovery(const ScalarField& u, const SeparableCorrector& v, double eps);
// Sum of separable terms u + eps * sum_j phi_j psi_j(x/eps); general
// correctors are approximated by such sums.
ScalarField build_recovery(const ScalarField& u, const std::vector<SeparableCorrector>& v,
                           double eps);
// Field-based variant: phi sampled on the grid of u, psi on a cell grid.
ScalarField build_recovery(const ScalarField& u, const ScalarField& phi,
                           const ScalarField& psi, double eps);

struct RecoveryMetrics {
  double eps = 0.0;
  double delta = 0.0;
  double sobolev_distance = 0.0;      // || u_de - u ||_{W^1 L^B(Omega)}
  double norm_defect_plus = 0.0;      // | ||Du_de||_B - ||Du + D_y u1||_{B, Omega x Y} |
  double norm_defect_minus = 0.0;     // same with the minus combination
  double c_delta_eps = 0.0;           // sobolev_distance + norm_defect_plus
  double c_delta_eps_minus = 0.0;     // sobolev_distance + norm_defect_minus
  double energy_of_recovery = 0.0;    // int_Omega f(x/eps, D u_de)
  double target_two_scale_energy = 0.0;  // iint f(y, Du + D_y u1)
};

struct RecoveryContext {
  Integrand integrand;
  NFunction norm_nfunc;  // B of the ambient Orlicz-Sobolev space
  PeriodicGrid domain;   // role Domain
  PeriodicGrid cell;     // quadrature grid for the Y factor
};

// Builds u_{delta,eps} = u + eps * v and measures the diagonalization
// metric, the recovery energy, and the two-scale target energy.  delta is
// the schedule value for this eps and is echoed into the metrics; the
// corrector v plays the role of the delta-approximant of u1.
RecoveryMetrics recovery_metrics(const RecoveryContext& ctx, const SmoothFn& u,
                                 const SeparableCorrector& u1, double eps, double delta);

// Default schedule delta(eps) = sqrt(eps).
double sqrt_schedule(double eps);

}  // namespace orlhom
