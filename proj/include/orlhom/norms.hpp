#pragma once

#include <functional>

#include "orlhom/grid.hpp"
#include "orlhom/nfunc.hpp"

namespace orlhom {

// int B(|u|) by the rectangle rule.
double modular(const ScalarField& u, const NFunction& nf);

// Luxemburg norm inf{k > 0 : int B(|u|/k) <= 1}; 0 for the zero field.
// Bisection on the strictly decreasing map k -> modular(u/k) with geometric
// bracket expansion, absolute tolerance 1e-10 * (1 + k).  Throws
// std::domain_error on non-finite values.
double luxemburg_norm(const ScalarField& u, const NFunction& nf);

// Luxemburg norm of the field plus the norms of its gradient components.
// Cell fields use the periodic gradient; domain fields difference into the
// supplied trace (zero extension by default).
double sobolev_norm(const ScalarField& u, const NFunction& nf);
double sobolev_norm(const ScalarField& u, const NFunction& nf, const BoundaryTrace& trace);

// Same machinery on a tensor grid over Omega x Y; value(ix, iy) gives the
// integrand sample at (x-node ix, y-node iy).
double modular_product(const PeriodicGrid& gx, const PeriodicGrid& gy,
                       const std::function<double(std::size_t, std::size_t)>& value,
                       const NFunction& nf);
double luxemburg_norm_product(const PeriodicGrid& gx, const PeriodicGrid& gy,
                              const std::function<double(std::size_t, std::size_t)>& value,
                              const NFunction& nf);

}  // namespace orlhom
