#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "orlhom/parallel.hpp"

namespace orlhom {

struct SolverOptions {
  double tolerance = 1e-9;   // stop when max|grad| <= tolerance * (1 + |value|)
  long max_iterations = 100000;
};

struct SolveStats {
  double value = 0.0;
  long iterations = 0;
  double gradient_norm = 0.0;  // max-norm at exit
  bool converged = false;
};

// Gradient descent with Barzilai-Borwein step selection and a nonmonotone
// sufficient-decrease safeguard (decrease is required against the worst of
// the last few values, which keeps the BB dynamics intact).  Objective must
// provide
//   double value_and_gradient(const std::vector<double>& u, std::vector<double>& grad)
// An optional mask freezes entries (grad zeroed there, entries never move).
template <class Objective>
SolveStats minimize_bb(Objective& obj, std::vector<double>& u,
                       const std::vector<std::uint8_t>* frozen,
                       const SolverOptions& opts) {
  const std::size_t n = u.size();
  std::vector<double> grad(n), grad_new(n), trial(n);

  auto apply_mask = [&](std::vector<double>& g) {
    if (!frozen) return;
    for (std::size_t i = 0; i < n; ++i) {
      if ((*frozen)[i]) g[i] = 0.0;
    }
  };
  auto max_norm = [&](const std::vector<double>& g) {
    return par::blocked_max(n, [&](std::size_t i) { return std::abs(g[i]); });
  };

  double value = obj.value_and_gradient(u, grad);
  apply_mask(grad);
  double gnorm = max_norm(grad);

  SolveStats stats;
  stats.value = value;
  stats.gradient_norm = gnorm;
  if (gnorm <= opts.tolerance * (1.0 + std::abs(value))) {
    stats.converged = true;
    return stats;
  }

  constexpr int kMemory = 10;
  std::vector<double> recent{value};

  double step = 1e-2 / (1.0 + gnorm);
  for (long it = 1; it <= opts.max_iterations; ++it) {
    const double gg = par::blocked_sum(n, [&](std::size_t i) { return grad[i] * grad[i]; });
    const double reference = *std::max_element(recent.begin(), recent.end());
    double trial_value = 0.0;
    for (int backtracks = 0;; ++backtracks) {
      par::for_each(n, [&](std::size_t i) { trial[i] = u[i] - step * grad[i]; });
      trial_value = obj.value_and_gradient(trial, grad_new);
      // Once the required decrease falls below the resolution of the energy
      // arithmetic the test is noise; take the raw BB step (convergent on
      // quadratics, and every smooth energy is quadratic at this scale).
      const double required = 1e-4 * step * gg;
      if (required <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(reference)) break;
      if (trial_value <= reference - required || backtracks >= 60) break;
      step *= 0.5;
    }
    // BB1: (du . du)/(du . dg) with du = -step * grad.
    const double denom = par::blocked_sum(
        n, [&](std::size_t i) { return -step * grad[i] * (grad_new[i] - grad[i]); });
    const double numer = step * step * gg;
    u.swap(trial);
    grad.swap(grad_new);
    apply_mask(grad);
    value = trial_value;
    gnorm = max_norm(grad);

    recent.push_back(value);
    if (recent.size() > kMemory) recent.erase(recent.begin());

    stats.value = value;
    stats.iterations = it;
    stats.gradient_norm = gnorm;
    if (gnorm <= opts.tolerance * (1.0 + std::abs(value))) {
      stats.converged = true;
      return stats;
    }
    if (denom > 0.0 && numer > 0.0) {
      step = numer / denom;
    } else {
      step *= 2.0;
    }
    step = std::min(std::max(step, 1e-30), 1e30);
  }
  return stats;
}

}  // namespace orlhom
