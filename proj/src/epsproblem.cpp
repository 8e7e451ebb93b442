#include "orlhom/epsproblem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "orlhom/parallel.hpp"

namespace orlhom {

std::string epsilon_admissibility_error(int n, double eps) {
  std::ostringstream os;
  if (!(eps > 0.0) || !(eps <= 1.0)) {
    os << "epsilon = " << eps << " must lie in (0, 1]";
    return os.str();
  }
  const double k = 1.0 / eps;
  const int ki = static_cast<int>(std::lround(k));
  if (std::abs(k - ki) > 1e-9 * k || ki < 1) {
    os << "epsilon = " << eps << " violates 1/epsilon in N (got 1/eps = " << k << ")";
    return os.str();
  }
  if (n % ki != 0) {
    os << "epsilon = " << eps << " violates the divisibility constraint: 1/eps = " << ki
       << " must divide n = " << n;
    return os.str();
  }
  if (n / ki < 8) {
    os << "epsilon = " << eps << " under-resolved: n*eps = " << n / ki
       << " nodes per period, need at least 8";
    return os.str();
  }
  return {};
}

OscillatingProblem::OscillatingProblem(Integrand f, PeriodicGrid g, double eps, Vec xi_,
                                       SolverOptions s)
    : integrand(std::move(f)), grid(g), epsilon(eps), xi(xi_), solver(s) {
  if (grid.role != GridRole::Domain) {
    throw std::invalid_argument("OscillatingProblem: grid role must be Domain");
  }
  const std::string err = epsilon_admissibility_error(grid.n, eps);
  if (!err.empty()) throw std::invalid_argument("OscillatingProblem: " + err);
}

int OscillatingProblem::inv_eps() const { return static_cast<int>(std::lround(1.0 / epsilon)); }
int OscillatingProblem::nodes_per_period() const { return grid.n / inv_eps(); }

Point fast_variable(const PeriodicGrid& grid, std::size_t node_index, int inv_eps) {
  const auto mi = grid.multi_index(node_index);
  Point y{0.0, 0.0};
  for (int k = 0; k < grid.dim; ++k) {
    const long long num = static_cast<long long>(mi[static_cast<std::size_t>(k)]) * inv_eps;
    y[static_cast<std::size_t>(k)] =
        static_cast<double>(num % grid.n) / static_cast<double>(grid.n);
  }
  return y;
}

namespace {

// Energy and gradient for the oscillating Dirichlet problem.  Cells are
// indexed by their lower-left node; the forward difference of the last cell
// along an axis reaches into the affine boundary data.  Nodes on the faces
// at coordinate 0 are pinned.
class EpsObjective {
 public:
  explicit EpsObjective(const OscillatingProblem& p)
      : p_(p), n_(p.grid.n), dim_(p.grid.dim), k_(p.inv_eps()) {
    const std::size_t count = p.grid.node_count();
    coeff_.resize(count);
    par::for_each(count, [&](std::size_t i) {
      coeff_[i] = p.integrand.coefficient(fast_variable(p.grid, i, k_));
    });
    f0_.assign(count, 0.0);
    if (dim_ == 2) f1_.assign(count, 0.0);
  }

  // Value of the affine data at a (possibly virtual) node index pair.
  double boundary_value(int i, int j) const {
    const double x0 = static_cast<double>(i) / n_;
    const double x1 = static_cast<double>(j) / n_;
    return dim_ == 2 ? p_.xi[0] * x0 + p_.xi[1] * x1 : p_.xi[0] * x0;
  }

  std::vector<std::uint8_t> pinned_mask() const {
    std::vector<std::uint8_t> mask(p_.grid.node_count(), 0);
    if (dim_ == 1) {
      mask[0] = 1;
    } else {
      for (int i = 0; i < n_; ++i) {
        mask[p_.grid.index(i, 0)] = 1;
        mask[p_.grid.index(0, i)] = 1;
      }
    }
    return mask;
  }

  double value_and_gradient(const std::vector<double>& u, std::vector<double>& grad) {
    const PeriodicGrid& g = p_.grid;
    const std::size_t count = g.node_count();
    const double inv_h = static_cast<double>(n_);
    grad.assign(count, 0.0);

    const double energy =
        g.cell_measure() * par::blocked_sum(count, [&](std::size_t idx) {
          const int i = static_cast<int>(idx) / (dim_ == 2 ? n_ : 1);
          const int j = dim_ == 2 ? static_cast<int>(idx) % n_ : 0;
          Vec grad_u{0.0, 0.0};
          if (dim_ == 1) {
            const double next =
                (idx + 1 == count) ? boundary_value(n_, 0) : u[idx + 1];
            grad_u[0] = (next - u[idx]) * inv_h;
          } else {
            const double right =
                (i + 1 == n_) ? boundary_value(n_, j) : u[g.index(i + 1, j)];
            const double up = (j + 1 == n_) ? boundary_value(i, n_) : u[g.index(i, j + 1)];
            grad_u[0] = (right - u[idx]) * inv_h;
            grad_u[1] = (up - u[idx]) * inv_h;
          }
          const Vec dpot = p_.integrand.potential.grad(grad_u, dim_);
          f0_[idx] = coeff_[idx] * dpot[0];
          if (dim_ == 2) f1_[idx] = coeff_[idx] * dpot[1];
          return coeff_[idx] * p_.integrand.potential.eval(grad_u, dim_);
        });

    const double scale = std::pow(1.0 / inv_h, dim_ - 1);
    par::for_each(count, [&](std::size_t idx) {
      const int i = static_cast<int>(idx) / (dim_ == 2 ? n_ : 1);
      const int j = dim_ == 2 ? static_cast<int>(idx) % n_ : 0;
      if (i == 0 || (dim_ == 2 && j == 0)) return;  // pinned
      double div = 0.0;
      if (dim_ == 1) {
        div = f0_[idx - 1] - f0_[idx];
      } else {
        div = (f0_[p_.grid.index(i - 1, j)] - f0_[idx]) +
              (f1_[p_.grid.index(i, j - 1)] - f1_[idx]);
      }
      grad[idx] = scale * div;
    });
    return energy;
  }

 private:
  const OscillatingProblem& p_;
  int n_, dim_, k_;
  std::vector<double> coeff_, f0_, f1_;
};

ScalarField affine_extension(const PeriodicGrid& g, Vec xi) {
  return ScalarField::sample(g, [&](Point x) { return dot(xi, x, g.dim); });
}

}  // namespace

EpsSolution solve_eps(const OscillatingProblem& p) {
  return solve_eps(p, affine_extension(p.grid, p.xi));
}

EpsSolution solve_eps(const OscillatingProblem& p, const ScalarField& initial_guess) {
  if (!(initial_guess.grid() == p.grid)) {
    throw std::invalid_argument("solve_eps: initial guess grid mismatch");
  }
  EpsObjective obj(p);
  std::vector<double> u = initial_guess.values();
  const std::vector<std::uint8_t> mask = obj.pinned_mask();
  // Pinned nodes carry the boundary data regardless of the guess.
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (mask[i]) {
      const Point x = p.grid.node(i);
      u[i] = dot(p.xi, x, p.grid.dim);
    }
  }
  const SolveStats stats = minimize_bb(obj, u, &mask, p.solver);

  EpsSolution sol;
  sol.minimizer = ScalarField(p.grid);
  sol.minimizer.values() = std::move(u);
  sol.energy = stats.value;
  sol.gradient_residual = stats.gradient_norm;
  sol.iterations = stats.iterations;
  sol.converged = stats.converged;
  return sol;
}

ScalarField two_scale_ansatz(const PeriodicGrid& domain, Vec xi,
                             const ScalarField& cell_corrector, double eps) {
  if (domain.role != GridRole::Domain) {
    throw std::invalid_argument("two_scale_ansatz: domain grid required");
  }
  const std::string err = epsilon_admissibility_error(domain.n, eps);
  if (!err.empty()) throw std::invalid_argument("two_scale_ansatz: " + err);
  const int k = static_cast<int>(std::lround(1.0 / eps));
  const SmoothFn psi = periodic_interpolant(cell_corrector);
  const double psi0 = psi.value({0.0, 0.0});
  ScalarField u(domain);
  par::for_each(u.size(), [&](std::size_t i) {
    const Point x = domain.node(i);
    const Point y = fast_variable(domain, i, k);
    u[i] = dot(xi, x, domain.dim) + eps * (psi.value(y) - psi0);
  });
  return u;
}

namespace {

// Dirichlet problem over the homogenized density: same stencil structure
// with f(x, xi) replaced by the xi-table.
class HomObjective {
 public:
  HomObjective(const HomogenizedDensity& table, const PeriodicGrid& g, Vec xi)
      : table_(table), g_(g), n_(g.n), dim_(g.dim), xi_(xi) {
    f0_.assign(g.node_count(), 0.0);
    if (dim_ == 2) f1_.assign(g.node_count(), 0.0);
  }

  double boundary_value(int i, int j) const {
    const double x0 = static_cast<double>(i) / n_;
    const double x1 = static_cast<double>(j) / n_;
    return dim_ == 2 ? xi_[0] * x0 + xi_[1] * x1 : xi_[0] * x0;
  }

  std::vector<std::uint8_t> pinned_mask() const {
    std::vector<std::uint8_t> mask(g_.node_count(), 0);
    if (dim_ == 1) {
      mask[0] = 1;
    } else {
      for (int i = 0; i < n_; ++i) {
        mask[g_.index(i, 0)] = 1;
        mask[g_.index(0, i)] = 1;
      }
    }
    return mask;
  }

  double value_and_gradient(const std::vector<double>& u, std::vector<double>& grad) {
    const std::size_t count = g_.node_count();
    const double inv_h = static_cast<double>(n_);
    grad.assign(count, 0.0);
    // Table lookups throw outside range; evaluate serially.
    double energy_sum = 0.0;
    for (std::size_t idx = 0; idx < count; ++idx) {
      const int i = static_cast<int>(idx) / (dim_ == 2 ? n_ : 1);
      const int j = dim_ == 2 ? static_cast<int>(idx) % n_ : 0;
      Vec grad_u{0.0, 0.0};
      if (dim_ == 1) {
        const double next = (idx + 1 == count) ? boundary_value(n_, 0) : u[idx + 1];
        grad_u[0] = (next - u[idx]) * inv_h;
      } else {
        const double right = (i + 1 == n_) ? boundary_value(n_, j) : u[g_.index(i + 1, j)];
        const double up = (j + 1 == n_) ? boundary_value(i, n_) : u[g_.index(i, j + 1)];
        grad_u[0] = (right - u[idx]) * inv_h;
        grad_u[1] = (up - u[idx]) * inv_h;
      }
      const Vec dpot = table_.gradient(grad_u);
      f0_[idx] = dpot[0];
      if (dim_ == 2) f1_[idx] = dpot[1];
      energy_sum += table_(grad_u);
    }
    const double scale = std::pow(1.0 / inv_h, dim_ - 1);
    par::for_each(count, [&](std::size_t idx) {
      const int i = static_cast<int>(idx) / (dim_ == 2 ? n_ : 1);
      const int j = dim_ == 2 ? static_cast<int>(idx) % n_ : 0;
      if (i == 0 || (dim_ == 2 && j == 0)) return;
      double div = 0.0;
      if (dim_ == 1) {
        div = f0_[idx - 1] - f0_[idx];
      } else {
        div = (f0_[g_.index(i - 1, j)] - f0_[idx]) + (f1_[g_.index(i, j - 1)] - f1_[idx]);
      }
      grad[idx] = scale * div;
    });
    return energy_sum * g_.cell_measure();
  }

 private:
  const HomogenizedDensity& table_;
  const PeriodicGrid& g_;
  int n_, dim_;
  Vec xi_;
  std::vector<double> f0_, f1_;
};

}  // namespace

EpsSolution solve_homogenized(const HomogenizedDensity& table, const PeriodicGrid& grid,
                              Vec xi, const SolverOptions& solver) {
  if (grid.role != GridRole::Domain) {
    throw std::invalid_argument("solve_homogenized: grid role must be Domain");
  }
  if (!table.complete) {
    throw std::invalid_argument("solve_homogenized: table is partial");
  }
  table(xi);  // range check up front: throws the extrapolation error
  HomObjective obj(table, grid, xi);
  ScalarField init = affine_extension(grid, xi);
  std::vector<double> u = init.values();
  const std::vector<std::uint8_t> mask = obj.pinned_mask();
  const SolveStats stats = minimize_bb(obj, u, &mask, solver);

  EpsSolution sol;
  sol.minimizer = ScalarField(grid);
  sol.minimizer.values() = std::move(u);
  sol.energy = stats.value;
  sol.gradient_residual = stats.gradient_norm;
  sol.iterations = stats.iterations;
  sol.converged = stats.converged;
  return sol;
}

SmoothFn SmoothFn::constant(double c) {
  return SmoothFn{[c](Point) { return c; }, [](Point) { return Vec{0.0, 0.0}; }};
}

SmoothFn SmoothFn::affine(Vec xi, int dim) {
  return SmoothFn{[xi, dim](Point x) { return dot(xi, x, dim); },
                  [xi](Point) { return xi; }};
}

SmoothFn periodic_interpolant(const ScalarField& psi) {
  if (psi.grid().role != GridRole::Cell) {
    throw std::invalid_argument("periodic_interpolant: field must live on a cell grid");
  }
  const PeriodicGrid g = psi.grid();
  auto values = std::make_shared<std::vector<double>>(psi.values());
  const VectorField dpsi = gradient_periodic(psi);
  auto d0 = std::make_shared<std::vector<double>>(dpsi.component(0));
  auto d1 = std::make_shared<std::vector<double>>(
      g.dim == 2 ? dpsi.component(1) : std::vector<double>{});

  auto cell_of = [g](Point y) {
    std::array<int, 2> c{0, 0};
    Point t{0.0, 0.0};
    for (int k = 0; k < g.dim; ++k) {
      double f = y[static_cast<std::size_t>(k)];
      f -= std::floor(f);
      const double scaled = f * g.n;
      int i = static_cast<int>(std::floor(scaled));
      if (i >= g.n) i = 0;
      c[static_cast<std::size_t>(k)] = i;
      t[static_cast<std::size_t>(k)] = scaled - i;
    }
    return std::pair{c, t};
  };

  SmoothFn fn;
  fn.value = [g, values, cell_of](Point y) {
    const auto [c, t] = cell_of(y);
    if (g.dim == 1) {
      const int ip = (c[0] + 1) % g.n;
      return (1.0 - t[0]) * (*values)[static_cast<std::size_t>(c[0])] +
             t[0] * (*values)[static_cast<std::size_t>(ip)];
    }
    const int i = c[0], j = c[1];
    const int ip = (i + 1) % g.n, jp = (j + 1) % g.n;
    auto v = [&](int a, int b) { return (*values)[g.index(a, b)]; };
    return (1.0 - t[0]) * ((1.0 - t[1]) * v(i, j) + t[1] * v(i, jp)) +
           t[0] * ((1.0 - t[1]) * v(ip, j) + t[1] * v(ip, jp));
  };
  fn.grad = [g, d0, d1, cell_of](Point y) {
    const auto [c, t] = cell_of(y);
    (void)t;
    const std::size_t idx = g.index(c[0], c[1]);
    Vec out{(*d0)[idx], 0.0};
    if (g.dim == 2) out[1] = (*d1)[idx];
    return out;
  };
  return fn;
}

ScalarField build_recovery(const ScalarField& u, const SeparableCorrector& v, double eps) {
  const PeriodicGrid& g = u.grid();
  const std::string err = epsilon_admissibility_error(g.n, eps);
  if (!err.empty()) throw std::invalid_argument("build_recovery: " + err);
  const int k = static_cast<int>(std::lround(1.0 / eps));
  ScalarField out = u;
  par::for_each(out.size(), [&](std::size_t i) {
    const Point x = g.node(i);
    const Point y = fast_variable(g, i, k);
    out[i] += eps * v.phi.value(x) * v.psi.value(y);
  });
  return out;
}

ScalarField build_recovery(const ScalarField& u, const std::vector<SeparableCorrector>& v,
                           double eps) {
  const PeriodicGrid& g = u.grid();
  const std::string err = epsilon_admissibility_error(g.n, eps);
  if (!err.empty()) throw std::invalid_argument("build_recovery: " + err);
  const int k = static_cast<int>(std::lround(1.0 / eps));
  ScalarField out = u;
  par::for_each(out.size(), [&](std::size_t i) {
    const Point x = g.node(i);
    const Point y = fast_variable(g, i, k);
    double sum = 0.0;
    for (const SeparableCorrector& term : v) sum += term.phi.value(x) * term.psi.value(y);
    out[i] += eps * sum;
  });
  return out;
}

ScalarField build_recovery(const ScalarField& u, const ScalarField& phi,
                           const ScalarField& psi, double eps) {
  if (!(phi.grid() == u.grid())) {
    throw std::invalid_argument("build_recovery: phi must live on the grid of u");
  }
  const PeriodicGrid& g = u.grid();
  const std::string err = epsilon_admissibility_error(g.n, eps);
  if (!err.empty()) throw std::invalid_argument("build_recovery: " + err);
  const int k = static_cast<int>(std::lround(1.0 / eps));
  const SmoothFn psi_fn = periodic_interpolant(psi);
  ScalarField out = u;
  par::for_each(out.size(), [&](std::size_t i) {
    out[i] += eps * phi[i] * psi_fn.value(fast_variable(g, i, k));
  });
  return out;
}

double sqrt_schedule(double eps) { return std::sqrt(eps); }

RecoveryMetrics recovery_metrics(const RecoveryContext& ctx, const SmoothFn& u,
                                 const SeparableCorrector& u1, double eps, double delta) {
  const PeriodicGrid& dg = ctx.domain;
  if (dg.role != GridRole::Domain) {
    throw std::invalid_argument("recovery_metrics: domain grid required");
  }
  const std::string err = epsilon_admissibility_error(dg.n, eps);
  if (!err.empty()) throw std::invalid_argument("recovery_metrics: " + err);
  const int k = static_cast<int>(std::lround(1.0 / eps));
  const int dim = dg.dim;

  // w(x) = eps * phi(x) * psi(x/eps); closed form, exact at virtual nodes.
  auto w_exact = [&](Point x) {
    Point y{0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
      const double s = x[static_cast<std::size_t>(a)] * k;
      y[static_cast<std::size_t>(a)] = s - std::floor(s);
    }
    return eps * u1.phi.value(x) * u1.psi.value(y);
  };

  ScalarField w(dg);
  par::for_each(w.size(), [&](std::size_t i) {
    const Point x = dg.node(i);
    const Point y = fast_variable(dg, i, k);
    w[i] = eps * u1.phi.value(x) * u1.psi.value(y);
  });

  RecoveryMetrics m;
  m.eps = eps;
  m.delta = delta;

  const BoundaryTrace w_trace{w_exact};
  m.sobolev_distance = sobolev_norm(w, ctx.norm_nfunc, w_trace);

  // Discrete gradient of the recovery field u + w against the boundary trace
  // of the exact construction.
  const BoundaryTrace rec_trace{[&](Point x) { return u.value(x) + w_exact(x); }};
  ScalarField rec(dg);
  par::for_each(rec.size(), [&](std::size_t i) { rec[i] = u.value(dg.node(i)) + w[i]; });
  const VectorField drec = gradient_domain(rec, rec_trace);

  double grad_norm_omega = 0.0;
  for (int a = 0; a < dim; ++a) {
    grad_norm_omega += luxemburg_norm(drec.component_field(a), ctx.norm_nfunc);
  }

  // Tensor-grid norms of Du +- D_y u1 over Omega x Y.
  double plus_norm = 0.0, minus_norm = 0.0;
  for (int a = 0; a < dim; ++a) {
    auto component = [&](double sign) {
      return [&, sign, a](std::size_t ix, std::size_t iy) {
        const Point x = dg.node(ix);
        const Point y = ctx.cell.node(iy);
        const double du = u.grad(x)[static_cast<std::size_t>(a)];
        const double dy1 = u1.phi.value(x) * u1.psi.grad(y)[static_cast<std::size_t>(a)];
        return du + sign * dy1;
      };
    };
    plus_norm += luxemburg_norm_product(dg, ctx.cell, component(+1.0), ctx.norm_nfunc);
    minus_norm += luxemburg_norm_product(dg, ctx.cell, component(-1.0), ctx.norm_nfunc);
  }
  m.norm_defect_plus = std::abs(grad_norm_omega - plus_norm);
  m.norm_defect_minus = std::abs(grad_norm_omega - minus_norm);
  m.c_delta_eps = m.sobolev_distance + m.norm_defect_plus;
  m.c_delta_eps_minus = m.sobolev_distance + m.norm_defect_minus;

  // Energy of the recovery field at this eps.
  m.energy_of_recovery =
      dg.cell_measure() * par::blocked_sum(rec.size(), [&](std::size_t i) {
        const Point y = fast_variable(dg, i, k);
        Vec z = drec.at(i);
        return ctx.integrand.eval(y, z, dim);
      });

  // Two-scale target energy iint f(y, Du(x) + D_y u1(x, y)).
  const std::size_t ny = ctx.cell.node_count();
  m.target_two_scale_energy =
      dg.cell_measure() * ctx.cell.cell_measure() *
      par::blocked_sum(rec.size() * ny, [&](std::size_t flat) {
        const std::size_t ix = flat / ny, iy = flat % ny;
        const Point x = dg.node(ix);
        const Point y = ctx.cell.node(iy);
        const Vec du = u.grad(x);
        const Vec dpsi = u1.psi.grad(y);
        const double ph = u1.phi.value(x);
        const Vec z{du[0] + ph * dpsi[0], du[1] + ph * dpsi[1]};
        return ctx.integrand.eval(y, z, dim);
      });
  return m;
}

}  // namespace orlhom
