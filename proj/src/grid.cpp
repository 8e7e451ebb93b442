#include "orlhom/grid.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "orlhom/parallel.hpp"

namespace orlhom {

PeriodicGrid::PeriodicGrid(int dim_, int n_, GridRole role_) : dim(dim_), n(n_), role(role_) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("PeriodicGrid: dim must be 1 or 2");
  if (n < 4) throw std::invalid_argument("PeriodicGrid: need n >= 4");
}

ScalarField::ScalarField(const PeriodicGrid& grid, double fill)
    : grid_(grid), values_(grid.node_count(), fill) {}

ScalarField ScalarField::sample(const PeriodicGrid& grid, const std::function<double(Point)>& f) {
  ScalarField u(grid);
  par::for_each(u.size(), [&](std::size_t i) { u[i] = f(grid.node(i)); });
  return u;
}

bool ScalarField::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField::VectorField(const PeriodicGrid& grid) : grid_(grid) {
  for (int k = 0; k < grid.dim; ++k) {
    comp_[static_cast<std::size_t>(k)].assign(grid.node_count(), 0.0);
  }
}

ScalarField VectorField::component_field(int k) const {
  ScalarField f(grid_);
  f.values() = comp_[static_cast<std::size_t>(k)];
  return f;
}

VectorField gradient_periodic(const ScalarField& u) {
  const PeriodicGrid& g = u.grid();
  if (g.role != GridRole::Cell) {
    throw std::invalid_argument("gradient_periodic: field must live on a cell grid");
  }
  VectorField du(g);
  const int n = g.n;
  const double inv_h = static_cast<double>(n);
  if (g.dim == 1) {
    auto& d0 = du.component(0);
    par::for_each(u.size(), [&](std::size_t i) {
      const std::size_t ip = (i + 1 == u.size()) ? 0 : i + 1;
      d0[i] = (u[ip] - u[i]) * inv_h;
    });
  } else {
    auto& d0 = du.component(0);
    auto& d1 = du.component(1);
    par::for_each(u.size(), [&](std::size_t idx) {
      const int i = static_cast<int>(idx) / n;
      const int j = static_cast<int>(idx) % n;
      const int ip = (i + 1 == n) ? 0 : i + 1;
      const int jp = (j + 1 == n) ? 0 : j + 1;
      d0[idx] = (u.at(ip, j) - u[idx]) * inv_h;
      d1[idx] = (u.at(i, jp) - u[idx]) * inv_h;
    });
  }
  return du;
}

BoundaryTrace BoundaryTrace::zero() {
  return BoundaryTrace{[](Point) { return 0.0; }};
}

BoundaryTrace BoundaryTrace::affine(Vec xi, int dim) {
  return BoundaryTrace{[xi, dim](Point x) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += xi[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
    return s;
  }};
}

VectorField gradient_domain(const ScalarField& u, const BoundaryTrace& trace) {
  const PeriodicGrid& g = u.grid();
  if (g.role != GridRole::Domain) {
    throw std::invalid_argument("gradient_domain: field must live on a domain grid");
  }
  VectorField du(g);
  const int n = g.n;
  const double inv_h = static_cast<double>(n);
  if (g.dim == 1) {
    auto& d0 = du.component(0);
    par::for_each(u.size(), [&](std::size_t i) {
      const double next = (i + 1 == u.size()) ? trace.value({1.0, 0.0}) : u[i + 1];
      d0[i] = (next - u[i]) * inv_h;
    });
  } else {
    auto& d0 = du.component(0);
    auto& d1 = du.component(1);
    par::for_each(u.size(), [&](std::size_t idx) {
      const int i = static_cast<int>(idx) / n;
      const int j = static_cast<int>(idx) % n;
      const Point x = g.node(idx);
      const double right = (i + 1 == n) ? trace.value({1.0, x[1]}) : u.at(i + 1, j);
      const double up = (j + 1 == n) ? trace.value({x[0], 1.0}) : u.at(i, j + 1);
      d0[idx] = (right - u[idx]) * inv_h;
      d1[idx] = (up - u[idx]) * inv_h;
    });
  }
  return du;
}

double integrate(const ScalarField& u) {
  const double sum = par::blocked_sum(u.size(), [&](std::size_t i) { return u[i]; });
  return sum * u.grid().cell_measure();
}

ScalarField zero_mean_project(const ScalarField& u) {
  const double mean = integrate(u);
  ScalarField out = u;
  for (double& v : out.values()) v -= mean;
  return out;
}

std::string field_to_csv(const ScalarField& u) {
  std::string out;
  const int dim = u.grid().dim;
  out += dim == 2 ? "x0,x1,value\n" : "x,value\n";
  char line[96];
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Point p = u.grid().node(i);
    if (dim == 2) {
      std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", p[0], p[1], u[i]);
    } else {
      std::snprintf(line, sizeof line, "%.12g,%.12g\n", p[0], u[i]);
    }
    out += line;
  }
  return out;
}

}  // namespace orlhom
