#include <doctest.h>

#include <cmath>

#include "orlhom/cell.hpp"
#include "orlhom/norms.hpp"
#include "orlhom/parallel.hpp"
#include "test_util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace orlhom;

// The OpenMP kernels and the serial reference path run the same blocked
// arithmetic, so every result must agree bit-for-bit.

namespace {

struct ParallelGuard {
  ParallelGuard() {
#ifdef _OPENMP
    omp_set_num_threads(std::max(2, omp_get_max_threads()));
#endif
  }
  ~ParallelGuard() { par::set_enabled(true); }
};

template <class F>
auto with_backend(bool parallel, F&& f) {
  par::set_enabled(parallel);
  auto result = f();
  par::set_enabled(true);
  return result;
}

}  // namespace

TEST_CASE("blocked_sum and blocked_max are backend-independent") {
  ParallelGuard guard;
  auto r = orlhom_test::rng(40);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> data(100'003);
  for (double& v : data) v = dist(r);

  auto sum = [&]() { return par::blocked_sum(data.size(), [&](std::size_t i) { return data[i]; }); };
  auto mx = [&]() {
    return par::blocked_max(data.size(), [&](std::size_t i) { return std::abs(data[i]); });
  };
  CHECK(with_backend(false, sum) == with_backend(true, sum));
  CHECK(with_backend(false, mx) == with_backend(true, mx));
}

TEST_CASE("norm kernels are backend-independent") {
  ParallelGuard guard;
  auto r = orlhom_test::rng(41);
  const PeriodicGrid g(1, 4096, GridRole::Cell);
  const ScalarField u = orlhom_test::random_field(g, r, -3.0, 3.0);
  const NFunction b = NFunction::power_log(2.0);

  auto work = [&]() {
    return std::tuple{integrate(u), modular(u, b), luxemburg_norm(u, b), sobolev_norm(u, b)};
  };
  CHECK(with_backend(false, work) == with_backend(true, work));
}

TEST_CASE("cell solve is backend-independent") {
  ParallelGuard guard;
  const PeriodicGrid g(1, 256, GridRole::Cell);
  const Integrand f{CoefficientField::laminate(1.0, 4.0), Potential::quadratic()};
  auto work = [&]() {
    const CellSolution s = solve_cell(CellProblem(f, g, {1.0, 0.0}));
    return std::tuple{s.value, s.iterations, s.gradient_residual, s.corrector.values()};
  };
  const auto serial = with_backend(false, work);
  const auto parallel = with_backend(true, work);
  CHECK(std::get<0>(serial) == std::get<0>(parallel));
  CHECK(std::get<1>(serial) == std::get<1>(parallel));
  CHECK(std::get<2>(serial) == std::get<2>(parallel));
  CHECK(std::get<3>(serial) == std::get<3>(parallel));
}

TEST_CASE("fhom table is backend-independent including nested parallelism") {
  ParallelGuard guard;
  const PeriodicGrid g(1, 128, GridRole::Cell);
  const Integrand f{CoefficientField::sine(2.0, 1.0), Potential::quadratic()};
  XiGrid xg;
  xg.min = {-1.0, 0.0};
  xg.max = {1.0, 0.0};
  xg.count = {5, 2};
  auto work = [&]() { return tabulate_fhom(f, g, xg).values; };
  CHECK(with_backend(false, work) == with_backend(true, work));
}
