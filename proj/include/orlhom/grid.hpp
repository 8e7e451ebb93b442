#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace orlhom {

// Points and directions in the unit cell / unit square; the second entry is
// unused when dim == 1.
using Point = std::array<double, 2>;
using Vec = std::array<double, 2>;

inline double dot(const Vec& a, const Vec& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += a[k] * b[k];
  return s;
}

enum class GridRole { Cell, Domain };

// Uniform grid on (0,1)^dim with n nodes per axis at i/n.  Cell grids wrap
// periodically; domain grids carry Dirichlet data on the boundary, with the
// faces at coordinate 1 represented implicitly by boundary traces.
struct PeriodicGrid {
  int dim = 1;
  int n = 4;
  GridRole role = GridRole::Cell;

  PeriodicGrid() = default;
  PeriodicGrid(int dim_, int n_, GridRole role_);

  double spacing() const { return 1.0 / n; }
  std::size_t node_count() const {
    std::size_t c = static_cast<std::size_t>(n);
    return dim == 2 ? c * c : c;
  }
  double cell_measure() const {
    const double h = spacing();
    return dim == 2 ? h * h : h;
  }

  // Row-major flattening: index = i*n + j in 2D.
  std::size_t index(int i, int j = 0) const {
    return dim == 2 ? static_cast<std::size_t>(i) * n + j : static_cast<std::size_t>(i);
  }
  Point node(std::size_t idx) const {
    if (dim == 1) return {static_cast<double>(idx) / n, 0.0};
    return {static_cast<double>(idx / static_cast<std::size_t>(n)) / n,
            static_cast<double>(idx % static_cast<std::size_t>(n)) / n};
  }
  std::array<int, 2> multi_index(std::size_t idx) const {
    if (dim == 1) return {static_cast<int>(idx), 0};
    return {static_cast<int>(idx / static_cast<std::size_t>(n)),
            static_cast<int>(idx % static_cast<std::size_t>(n))};
  }

  bool operator==(const PeriodicGrid& o) const {
    return dim == o.dim && n == o.n && role == o.role;
  }
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const PeriodicGrid& grid, double fill = 0.0);
  static ScalarField sample(const PeriodicGrid& grid, const std::function<double(Point)>& f);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(int i, int j = 0) { return values_[grid_.index(i, j)]; }
  double at(int i, int j = 0) const { return values_[grid_.index(i, j)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const PeriodicGrid& grid);

  const PeriodicGrid& grid() const { return grid_; }
  std::vector<double>& component(int k) { return comp_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& component(int k) const {
    return comp_[static_cast<std::size_t>(k)];
  }
  ScalarField component_field(int k) const;
  Vec at(std::size_t idx) const {
    Vec v{comp_[0][idx], 0.0};
    if (grid_.dim == 2) v[1] = comp_[1][idx];
    return v;
  }

 private:
  PeriodicGrid grid_;
  std::array<std::vector<double>, 2> comp_;
};

// Forward differences with periodic wraparound; requires a cell grid.
VectorField gradient_periodic(const ScalarField& u);

// Values on the implicit boundary faces at coordinate 1 of a domain grid.
struct BoundaryTrace {
  std::function<double(Point)> value;

  static BoundaryTrace zero();
  static BoundaryTrace affine(Vec xi, int dim);
};

// Forward differences on a domain grid; the last cell along each axis
// differences into the supplied trace.
VectorField gradient_domain(const ScalarField& u, const BoundaryTrace& trace);

// Rectangle rule h^d * sum(values).
double integrate(const ScalarField& u);

// u - mean(u); output integrates to zero.
ScalarField zero_mean_project(const ScalarField& u);

// CSV snapshot (node coordinates + value), one row per node.
std::string field_to_csv(const ScalarField& u);

}  // namespace orlhom
