#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "orlhom/cell.hpp"
#include "orlhom/norms.hpp"
#include "orlhom/parallel.hpp"

// Timing comparison between the OpenMP kernels and the serial reference
// path.  Both paths run identical blocked arithmetic, so the value columns
// must agree bit-for-bit.

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Timing {
  double value;
  double ms;
};

template <class F>
Timing timed(F&& f, int reps) {
  double value = 0.0;
  const auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) value = f();
  return {value, ms_since(t0) / reps};
}

void row(const char* name, Timing serial, Timing parallel) {
  std::printf("%-28s %12.3f ms %12.3f ms   speedup %5.2fx   %s\n", name, serial.ms,
              parallel.ms, serial.ms / parallel.ms,
              serial.value == parallel.value ? "values identical" : "VALUES DIFFER");
}

}  // namespace

int main() {
  using namespace orlhom;
  std::printf("threads available: %d\n", par::max_threads());
  std::printf("%-28s %15s %15s\n", "kernel", "serial", "openmp");

  {
    const PeriodicGrid g(1, 1 << 20, GridRole::Cell);
    const ScalarField u = ScalarField::sample(
        g, [](Point x) { return std::sin(2.0 * M_PI * x[0]) + 0.3 * x[0]; });
    const NFunction b2 = NFunction::power(2.0);
    auto work = [&]() { return modular(u, b2); };
    par::set_enabled(false);
    const Timing s = timed(work, 5);
    par::set_enabled(true);
    const Timing p = timed(work, 5);
    row("modular, n = 2^20", s, p);
  }

  {
    const PeriodicGrid g(1, 1 << 20, GridRole::Cell);
    const ScalarField u = ScalarField::sample(
        g, [](Point x) { return std::cos(2.0 * M_PI * x[0]); });
    auto work = [&]() {
      const VectorField du = gradient_periodic(u);
      return du.component(0)[12345];
    };
    par::set_enabled(false);
    const Timing s = timed(work, 5);
    par::set_enabled(true);
    const Timing p = timed(work, 5);
    row("gradient, n = 2^20", s, p);
  }

  {
    const Integrand f{CoefficientField::laminate(1.0, 4.0), Potential::quadratic()};
    const PeriodicGrid g(1, 4096, GridRole::Cell);
    auto work = [&]() {
      const CellProblem p(f, g, {1.0, 0.0});
      return solve_cell(p).value;
    };
    par::set_enabled(false);
    const Timing s = timed(work, 1);
    par::set_enabled(true);
    const Timing p = timed(work, 1);
    row("cell solve 1d, n = 4096", s, p);
  }

  {
    const Integrand f{CoefficientField::checkerboard(1.0, 4.0), Potential::quadratic()};
    const PeriodicGrid g(2, 64, GridRole::Cell);
    auto work = [&]() {
      const CellProblem p(f, g, {1.0, 0.0});
      return solve_cell(p).value;
    };
    par::set_enabled(false);
    const Timing s = timed(work, 1);
    par::set_enabled(true);
    const Timing p = timed(work, 1);
    row("cell solve 2d, n = 64", s, p);
  }

  {
    // Table of 8 xi nodes; outer-level parallelism across independent solves.
    const Integrand f{CoefficientField::sine(2.0, 1.0), Potential::quadratic()};
    const PeriodicGrid g(1, 512, GridRole::Cell);
    XiGrid xg;
    xg.min = {-2.0, 0.0};
    xg.max = {2.0, 0.0};
    xg.count = {8, 2};
    auto work = [&]() { return tabulate_fhom(f, g, xg).values.back(); };
    par::set_enabled(false);
    const Timing s = timed(work, 1);
    par::set_enabled(true);
    const Timing p = timed(work, 1);
    row("fhom table, 8 nodes", s, p);
  }

  return 0;
}
