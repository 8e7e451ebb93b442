#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace orlhom::par {

// Runtime switch between the OpenMP kernels and the serial reference path.
// Both paths execute the same blocked arithmetic, so results are
// bit-identical regardless of backend or thread count.
bool enabled();
void set_enabled(bool on);
int max_threads();

inline constexpr std::size_t kBlock = 2048;

namespace detail {
inline bool use_omp() {
#ifdef _OPENMP
  return enabled() && !omp_in_parallel() && omp_get_max_threads() > 1;
#else
  return false;
#endif
}
}  // namespace detail

template <class F>
void for_each(std::size_t n, F&& f) {
#ifdef _OPENMP
  if (detail::use_omp()) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      f(static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) f(i);
}

// Deterministic reduction: fixed-size blocks are summed independently and
// combined serially in block order, so the result does not depend on the
// thread count.
template <class F>
double blocked_sum(std::size_t n, F&& f) {
  if (n <= kBlock) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += f(i);
    return s;
  }
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
  for_each(nblocks, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[b] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

// Max-reduction with the same blocking discipline.
template <class F>
double blocked_max(std::size_t n, F&& f) {
  if (n == 0) return 0.0;
  if (n <= kBlock) {
    double m = f(0);
    for (std::size_t i = 1; i < n; ++i) {
      const double v = f(i);
      if (v > m) m = v;
    }
    return m;
  }
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
  for_each(nblocks, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
    double m = f(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double v = f(i);
      if (v > m) m = v;
    }
    partial[b] = m;
  });
  double total = partial[0];
  for (double m : partial)
    if (m > total) total = m;
  return total;
}

}  // namespace orlhom::par
