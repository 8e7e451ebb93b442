#include "orlhom/cell.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "orlhom/parallel.hpp"

namespace orlhom {

CellProblem::CellProblem(Integrand f, PeriodicGrid g, Vec xi_, SolverOptions s)
    : integrand(std::move(f)), grid(g), xi(xi_), solver(s) {
  if (grid.role != GridRole::Cell) {
    throw std::invalid_argument("CellProblem: grid role must be Cell");
  }
}

namespace {

// Energy and its gradient for the periodic cell problem.  The flux
// g_k(i) = d f / d xi_k (y_i, xi + grad u_i) is assembled per cell; the
// energy gradient at a node is the backward divergence of the flux scaled
// by h^(d-1).
class CellObjective {
 public:
  CellObjective(const CellProblem& p) : p_(p), flux_(p.grid) {
    const std::size_t count = p.grid.node_count();
    coeff_.resize(count);
    par::for_each(count, [&](std::size_t i) {
      coeff_[i] = p.integrand.coefficient(p.grid.node(i));
    });
  }

  double value_and_gradient(const std::vector<double>& u, std::vector<double>& grad) {
    const PeriodicGrid& g = p_.grid;
    const int n = g.n;
    const int dim = g.dim;
    const double inv_h = static_cast<double>(n);
    const std::size_t count = g.node_count();
    grad.assign(count, 0.0);
    auto& f0 = flux_.component(0);
    auto* f1 = dim == 2 ? &flux_.component(1) : nullptr;

    const double energy =
        g.cell_measure() * par::blocked_sum(count, [&](std::size_t idx) {
          Vec grad_u{0.0, 0.0};
          if (dim == 1) {
            const std::size_t ip = (idx + 1 == count) ? 0 : idx + 1;
            grad_u[0] = (u[ip] - u[idx]) * inv_h;
          } else {
            const int i = static_cast<int>(idx) / n;
            const int j = static_cast<int>(idx) % n;
            const std::size_t right = g.index(i + 1 == n ? 0 : i + 1, j);
            const std::size_t up = g.index(i, j + 1 == n ? 0 : j + 1);
            grad_u[0] = (u[right] - u[idx]) * inv_h;
            grad_u[1] = (u[up] - u[idx]) * inv_h;
          }
          const Vec z{p_.xi[0] + grad_u[0], p_.xi[1] + grad_u[1]};
          Vec dpot = p_.integrand.potential.grad(z, dim);
          f0[idx] = coeff_[idx] * dpot[0];
          if (f1) (*f1)[idx] = coeff_[idx] * dpot[1];
          return coeff_[idx] * p_.integrand.potential.eval(z, dim);
        });

    const double scale = std::pow(1.0 / inv_h, dim - 1);
    par::for_each(count, [&](std::size_t idx) {
      double div = 0.0;
      if (dim == 1) {
        const std::size_t im = (idx == 0) ? count - 1 : idx - 1;
        div = f0[im] - f0[idx];
      } else {
        const int i = static_cast<int>(idx) / n;
        const int j = static_cast<int>(idx) % n;
        const std::size_t left = g.index(i == 0 ? n - 1 : i - 1, j);
        const std::size_t down = g.index(i, j == 0 ? n - 1 : j - 1);
        div = (f0[left] - f0[idx]) + ((*f1)[down] - (*f1)[idx]);
      }
      grad[idx] = scale * div;
    });
    return energy;
  }

 private:
  const CellProblem& p_;
  VectorField flux_;
  std::vector<double> coeff_;
};

}  // namespace

double discrete_energy(const CellProblem& p, const ScalarField& u) {
  if (!(u.grid() == p.grid)) throw std::invalid_argument("discrete_energy: grid mismatch");
  const VectorField du = gradient_periodic(u);
  const int dim = p.grid.dim;
  return p.grid.cell_measure() * par::blocked_sum(u.size(), [&](std::size_t i) {
           const Vec d = du.at(i);
           const Vec z{p.xi[0] + d[0], p.xi[1] + d[1]};
           return p.integrand.eval(p.grid.node(i), z, dim);
         });
}

CellSolution solve_cell(const CellProblem& p) {
  CellObjective obj(p);
  std::vector<double> u(p.grid.node_count(), 0.0);
  const SolveStats stats = minimize_bb(obj, u, nullptr, p.solver);

  CellSolution sol;
  sol.corrector = ScalarField(p.grid);
  sol.corrector.values() = std::move(u);
  sol.corrector = zero_mean_project(sol.corrector);
  sol.value = stats.value;
  sol.gradient_residual = stats.gradient_norm;
  sol.iterations = stats.iterations;
  sol.converged = stats.converged;
  return sol;
}

std::size_t XiGrid::node_count() const {
  std::size_t c = static_cast<std::size_t>(count[0]);
  return dim == 2 ? c * static_cast<std::size_t>(count[1]) : c;
}

double XiGrid::step(int axis) const {
  const auto a = static_cast<std::size_t>(axis);
  return (max[a] - min[a]) / (count[a] - 1);
}

Vec XiGrid::node(std::size_t flat) const {
  if (dim == 1) return {min[0] + step(0) * static_cast<double>(flat), 0.0};
  const std::size_t n1 = static_cast<std::size_t>(count[1]);
  const std::size_t i = flat / n1, j = flat % n1;
  return {min[0] + step(0) * static_cast<double>(i),
          min[1] + step(1) * static_cast<double>(j)};
}

namespace {

// Locate xi along one axis of the table: cell index and local coordinate.
std::pair<int, double> locate(const XiGrid& g, const Vec& xi, int axis) {
  const auto a = static_cast<std::size_t>(axis);
  const double lo = g.min[a], hi = g.max[a];
  const double x = xi[a];
  if (x < lo - 1e-12 || x > hi + 1e-12) {
    std::ostringstream os;
    os << "HomogenizedDensity: xi[" << axis << "] = " << x << " outside table range ["
       << lo << ", " << hi << "]";
    throw std::domain_error(os.str());
  }
  const double step = g.step(axis);
  int c = static_cast<int>(std::floor((x - lo) / step));
  c = std::max(0, std::min(c, g.count[a] - 2));
  const double t = (x - (lo + c * step)) / step;
  return {c, t};
}

}  // namespace

double HomogenizedDensity::operator()(const Vec& xi) const {
  if (xi_grid.dim == 1) {
    const auto [c, t] = locate(xi_grid, xi, 0);
    return (1.0 - t) * values[static_cast<std::size_t>(c)] +
           t * values[static_cast<std::size_t>(c + 1)];
  }
  const auto [c0, t0] = locate(xi_grid, xi, 0);
  const auto [c1, t1] = locate(xi_grid, xi, 1);
  const std::size_t n1 = static_cast<std::size_t>(xi_grid.count[1]);
  auto v = [&](int i, int j) {
    return values[static_cast<std::size_t>(i) * n1 + static_cast<std::size_t>(j)];
  };
  return (1.0 - t0) * ((1.0 - t1) * v(c0, c1) + t1 * v(c0, c1 + 1)) +
         t0 * ((1.0 - t1) * v(c0 + 1, c1) + t1 * v(c0 + 1, c1 + 1));
}

Vec HomogenizedDensity::gradient(const Vec& xi) const {
  if (xi_grid.dim == 1) {
    const auto [c, t] = locate(xi_grid, xi, 0);
    (void)t;
    return {(values[static_cast<std::size_t>(c + 1)] - values[static_cast<std::size_t>(c)]) /
                xi_grid.step(0),
            0.0};
  }
  const auto [c0, t0] = locate(xi_grid, xi, 0);
  const auto [c1, t1] = locate(xi_grid, xi, 1);
  const std::size_t n1 = static_cast<std::size_t>(xi_grid.count[1]);
  auto v = [&](int i, int j) {
    return values[static_cast<std::size_t>(i) * n1 + static_cast<std::size_t>(j)];
  };
  const double d0 = ((1.0 - t1) * (v(c0 + 1, c1) - v(c0, c1)) +
                     t1 * (v(c0 + 1, c1 + 1) - v(c0, c1 + 1))) /
                    xi_grid.step(0);
  const double d1 = ((1.0 - t0) * (v(c0, c1 + 1) - v(c0, c1)) +
                     t0 * (v(c0 + 1, c1 + 1) - v(c0 + 1, c1))) /
                    xi_grid.step(1);
  return {d0, d1};
}

HomogenizedDensity tabulate_fhom(const Integrand& f, const PeriodicGrid& grid,
                                 const XiGrid& xi_grid, const SolverOptions& solver) {
  if (xi_grid.count[0] < 2 || (xi_grid.dim == 2 && xi_grid.count[1] < 2)) {
    throw std::invalid_argument("tabulate_fhom: need at least 2 nodes per axis");
  }
  if (xi_grid.dim != grid.dim) {
    throw std::invalid_argument("tabulate_fhom: xi grid and cell grid dimension mismatch");
  }
  if (grid.role != GridRole::Cell) {
    throw std::invalid_argument("tabulate_fhom: grid role must be Cell");
  }
  HomogenizedDensity table;
  table.xi_grid = xi_grid;
  const std::size_t count = xi_grid.node_count();
  table.values.assign(count, 0.0);
  table.stats.assign(count, {});

  par::for_each(count, [&](std::size_t k) {
    CellProblem p(f, grid, xi_grid.node(k), solver);
    const CellSolution sol = solve_cell(p);
    table.values[k] = sol.value;
    table.stats[k] = XiNodeStats{sol.iterations, sol.gradient_residual, sol.converged};
  });

  table.complete = true;
  for (const auto& s : table.stats) table.complete = table.complete && s.converged;
  return table;
}

TableConvexityReport fhom_convexity_check(const HomogenizedDensity& table) {
  if (!table.complete) {
    throw std::invalid_argument("fhom_convexity_check: table is partial");
  }
  const XiGrid& g = table.xi_grid;
  TableConvexityReport rep{std::numeric_limits<double>::infinity(), 0};
  auto consider = [&](std::size_t a, std::size_t b, std::size_t c) {
    const double slack = 0.5 * (table.values[a] + table.values[c]) - table.values[b];
    if (slack < rep.worst_slack) {
      rep.worst_slack = slack;
      rep.worst_node = b;
    }
  };
  if (g.dim == 1) {
    for (int i = 1; i + 1 < g.count[0]; ++i) {
      consider(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i),
               static_cast<std::size_t>(i + 1));
    }
    return rep;
  }
  const int n0 = g.count[0], n1 = g.count[1];
  auto id = [&](int i, int j) {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n1) +
           static_cast<std::size_t>(j);
  };
  const std::array<std::array<int, 2>, 4> dirs{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      for (const auto& d : dirs) {
        const int ia = i - d[0], ja = j - d[1];
        const int ic = i + d[0], jc = j + d[1];
        if (ia < 0 || ic >= n0 || ja < 0 || jc < 0 || ja >= n1 || jc >= n1) continue;
        consider(id(ia, ja), id(i, j), id(ic, jc));
      }
    }
  }
  return rep;
}

}  // namespace orlhom
