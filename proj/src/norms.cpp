#include "orlhom/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "orlhom/parallel.hpp"

namespace orlhom {

namespace {

double modular_of_magnitudes(const std::vector<double>& mags, double measure,
                             const NFunction& nf, double inv_k) {
  return measure * par::blocked_sum(mags.size(), [&](std::size_t i) {
           return nf(mags[i] * inv_k);
         });
}

// Bisection for modular(u/k) = 1 given the cached |u| samples.
double luxemburg_from_magnitudes(const std::vector<double>& mags, double measure,
                                 const NFunction& nf) {
  double maxabs = 0.0;
  for (double m : mags) maxabs = std::max(maxabs, m);
  if (maxabs == 0.0) return 0.0;

  auto mod = [&](double k) { return modular_of_magnitudes(mags, measure, nf, 1.0 / k); };

  double hi = maxabs;
  int guard = 0;
  while (mod(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 2000) throw std::domain_error("luxemburg_norm: bracket expansion failed");
  }
  double lo = hi;
  guard = 0;
  while (mod(lo) <= 1.0) {
    lo *= 0.5;
    if (lo < 1e-300) return 0.0;
    if (++guard > 2000) throw std::domain_error("luxemburg_norm: bracket shrink failed");
  }
  while (hi - lo > 1e-10 * (1.0 + hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mod(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> magnitudes(const ScalarField& u) {
  std::vector<double> mags(u.size());
  par::for_each(u.size(), [&](std::size_t i) { mags[i] = std::abs(u[i]); });
  for (double m : mags) {
    if (!std::isfinite(m)) throw std::domain_error("luxemburg_norm: non-finite field value");
  }
  return mags;
}

}  // namespace

double modular(const ScalarField& u, const NFunction& nf) {
  return u.grid().cell_measure() *
         par::blocked_sum(u.size(), [&](std::size_t i) { return nf(std::abs(u[i])); });
}

double luxemburg_norm(const ScalarField& u, const NFunction& nf) {
  return luxemburg_from_magnitudes(magnitudes(u), u.grid().cell_measure(), nf);
}

double sobolev_norm(const ScalarField& u, const NFunction& nf) {
  if (u.grid().role == GridRole::Cell) {
    double total = luxemburg_norm(u, nf);
    const VectorField du = gradient_periodic(u);
    for (int k = 0; k < u.grid().dim; ++k) {
      total += luxemburg_norm(du.component_field(k), nf);
    }
    return total;
  }
  return sobolev_norm(u, nf, BoundaryTrace::zero());
}

double sobolev_norm(const ScalarField& u, const NFunction& nf, const BoundaryTrace& trace) {
  if (u.grid().role != GridRole::Domain) {
    throw std::invalid_argument("sobolev_norm: trace form requires a domain grid");
  }
  double total = luxemburg_norm(u, nf);
  const VectorField du = gradient_domain(u, trace);
  for (int k = 0; k < u.grid().dim; ++k) {
    total += luxemburg_norm(du.component_field(k), nf);
  }
  return total;
}

double modular_product(const PeriodicGrid& gx, const PeriodicGrid& gy,
                       const std::function<double(std::size_t, std::size_t)>& value,
                       const NFunction& nf) {
  const std::size_t nx = gx.node_count(), ny = gy.node_count();
  const double measure = gx.cell_measure() * gy.cell_measure();
  return measure * par::blocked_sum(nx * ny, [&](std::size_t i) {
           return nf(std::abs(value(i / ny, i % ny)));
         });
}

double luxemburg_norm_product(const PeriodicGrid& gx, const PeriodicGrid& gy,
                              const std::function<double(std::size_t, std::size_t)>& value,
                              const NFunction& nf) {
  const std::size_t nx = gx.node_count(), ny = gy.node_count();
  std::vector<double> mags(nx * ny);
  par::for_each(nx * ny, [&](std::size_t i) { mags[i] = std::abs(value(i / ny, i % ny)); });
  for (double m : mags) {
    if (!std::isfinite(m)) throw std::domain_error("luxemburg_norm_product: non-finite sample");
  }
  return luxemburg_from_magnitudes(mags, gx.cell_measure() * gy.cell_measure(), nf);
}

}  // namespace orlhom
