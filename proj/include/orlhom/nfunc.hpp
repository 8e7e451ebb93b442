#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace orlhom {

// Young function B: [0,inf) -> [0,inf), convex, B(0)=0, B(t)/t -> 0 at 0 and
// -> inf at infinity, together with its right-continuous density b so that
// B(t) = int_0^t b.  Values are immutable after construction and all
// operations are pure, so instances can be shared across workers freely.
class NFunction {
 public:
  enum class Family { Power, PowerLog, Quadratic, Exponential, Custom };

  // scale * t^p, p > 1.  scale = 1/p gives the Holder-conjugate-friendly
  // normalization t^p/p.
  static NFunction power(double p, double scale = 1.0);
  // t^p * log(1+t), p > 1.
  static NFunction power_log(double p);
  // t^2/2 (self-conjugate).
  static NFunction quadratic();
  // e^t - t - 1.  Grows too fast for the doubling condition; kept for
  // diagnostics of that failure mode.
  static NFunction exponential();
  // Caller supplies both B and b.  Set density_strictly_increasing = false
  // when b has flat stretches; conjugation then uses a derivative-free
  // search instead of root-finding on b.
  static NFunction custom(std::string label, std::function<double(double)> eval,
                          std::function<double(double)> density,
                          bool density_strictly_increasing = true);

  double operator()(double t) const;  // B(t); throws std::domain_error for t<0 or non-finite
  double density(double t) const;     // b(t)

  const std::string& label() const;
  Family family() const;
  bool density_strictly_increasing() const;

 private:
  struct Impl;
  explicit NFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

class UnboundedConjugateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidNFunctionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fenchel conjugate value sup_{s>=0} (s t - B(s)), to ~1e-8 relative
// accuracy.  Root-finds b(s)=t on an expanding bracket; golden-section on
// s t - B(s) when the density is not strictly increasing.  Throws
// UnboundedConjugateError when no bracket is found.
double conjugate(const NFunction& nf, double t);

// Maximizer s*(t) of s t - B(s); this is also the density of the conjugate.
double conjugate_argmax(const NFunction& nf, double t);

// The conjugate packaged as an NFunction (numerically defined).
NFunction conjugate_of(const NFunction& nf);

struct ConjugatePair {
  NFunction primal;
  NFunction dual;
  double pairing_tolerance = 1e-10;

  // Pair B with its numerically computed conjugate.
  static ConjugatePair numeric(const NFunction& primal, double tolerance = 1e-10);
};

// Young's inequality slack B(s) + B~(t) - s t (nonnegative up to rounding).
double young_slack(const ConjugatePair& pair, double s, double t);

struct Lemma21Triple {
  double dual_at_density;   // B~(b(t))
  double t_times_density;   // t b(t)
  double primal_at_double;  // B(2t)
};

// The chain B~(b(t)) <= t b(t) <= B(2t); caller asserts it with slack.
Lemma21Triple lemma21_check(const ConjugatePair& pair, double t);

// sup of B(2t)/B(t) on a log-spaced sample of [max(t0, 1e-12), T].  A finite,
// T-stable value certifies the doubling condition empirically.  Throws
// InvalidNFunctionError if B vanishes at a positive sample point.
double delta2_estimate(const NFunction& nf, double t0, double T, int samples = 400);

// Two-sided dilation equivalence: Bp(k1 t) <= B(t) <= Bp(k2 t) on a
// log-spaced sample of [max(t0, 1e-12), T].
bool equivalence_check(const NFunction& B, const NFunction& Bp, double k1, double k2,
                       double t0, double T, int samples = 400);

struct GrowthConstants {
  double c;        // > 0
  double c_prime;  // >= 0
  double C;        // > 0
  NFunction lower;  // B' in c B'(|xi|) - c'
  NFunction upper;  // B in C (1 + B(|xi|))

  GrowthConstants(double c_, double c_prime_, double C_, NFunction lower_, NFunction upper_);
};

struct NFunctionDiagnostics {
  bool zero_at_origin = false;
  double worst_convexity_slack = 0.0;   // min of (B(s)+B(t))/2 - B((s+t)/2)
  bool sublinear_at_zero = false;       // B(t)/t smaller at 1e-6 than at 1e-3
  double ratio_at_large_t = 0.0;        // B(t)/t at t = 1e6
  double worst_density_consistency = 0.0;  // max relative |B(t) - int_0^t b|
  bool pass(double superlinearity_threshold) const;
};

// Sampled checks of the defining N-function properties; used by tests and
// the nfunc-check scenario.
NFunctionDiagnostics diagnose(const NFunction& nf);

}  // namespace orlhom
