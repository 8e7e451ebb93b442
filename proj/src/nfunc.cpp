#include "orlhom/nfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace orlhom {

struct NFunction::Impl {
  std::string label;
  Family family = Family::Custom;
  std::function<double(double)> eval;
  std::function<double(double)> density;
  bool density_strictly_increasing = true;
};

namespace {

void require_domain(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    std::ostringstream os;
    os << what << ": argument must be finite and nonnegative, got " << t;
    throw std::domain_error(os.str());
  }
}

std::vector<double> log_sample(double lo, double hi, int samples) {
  lo = std::max(lo, 1e-12);
  if (!(hi > lo)) throw std::invalid_argument("log_sample: need T > t0");
  std::vector<double> ts(static_cast<std::size_t>(samples));
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < samples; ++i) {
    ts[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (samples - 1));
  }
  return ts;
}

}  // namespace

NFunction NFunction::power(double p, double scale) {
  if (!(p > 1.0)) throw std::invalid_argument("NFunction::power: need p > 1");
  if (!(scale > 0.0)) throw std::invalid_argument("NFunction::power: need scale > 0");
  std::ostringstream os;
  os << "power(p=" << p;
  if (scale != 1.0) os << ", scale=" << scale;
  os << ")";
  auto impl = std::make_shared<Impl>();
  impl->label = os.str();
  impl->family = Family::Power;
  impl->eval = [p, scale](double t) { return scale * std::pow(t, p); };
  impl->density = [p, scale](double t) { return scale * p * std::pow(t, p - 1.0); };
  return NFunction(std::move(impl));
}

NFunction NFunction::power_log(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("NFunction::power_log: need p > 1");
  std::ostringstream os;
  os << "power-log(p=" << p << ")";
  auto impl = std::make_shared<Impl>();
  impl->label = os.str();
  impl->family = Family::PowerLog;
  impl->eval = [p](double t) { return std::pow(t, p) * std::log1p(t); };
  impl->density = [p](double t) {
    if (t == 0.0) return 0.0;
    return p * std::pow(t, p - 1.0) * std::log1p(t) + std::pow(t, p) / (1.0 + t);
  };
  return NFunction(std::move(impl));
}

NFunction NFunction::quadratic() {
  auto impl = std::make_shared<Impl>();
  impl->label = "quadratic";
  impl->family = Family::Quadratic;
  impl->eval = [](double t) { return 0.5 * t * t; };
  impl->density = [](double t) { return t; };
  return NFunction(std::move(impl));
}

NFunction NFunction::exponential() {
  auto impl = std::make_shared<Impl>();
  impl->label = "exponential";
  impl->family = Family::Exponential;
  impl->eval = [](double t) { return std::expm1(t) - t; };
  impl->density = [](double t) { return std::expm1(t); };
  return NFunction(std::move(impl));
}

NFunction NFunction::custom(std::string label, std::function<double(double)> eval,
                            std::function<double(double)> density,
                            bool density_strictly_increasing) {
  if (!eval || !density) {
    throw std::invalid_argument("NFunction::custom: both maps are required");
  }
  auto impl = std::make_shared<Impl>();
  impl->label = std::move(label);
  impl->family = Family::Custom;
  impl->eval = std::move(eval);
  impl->density = std::move(density);
  impl->density_strictly_increasing = density_strictly_increasing;
  return NFunction(std::move(impl));
}

double NFunction::operator()(double t) const {
  require_domain(t, "NFunction::eval");
  if (t == 0.0) return 0.0;
  return impl_->eval(t);
}

double NFunction::density(double t) const {
  require_domain(t, "NFunction::density");
  if (t == 0.0) return 0.0;
  return impl_->density(t);
}

const std::string& NFunction::label() const { return impl_->label; }
NFunction::Family NFunction::family() const { return impl_->family; }
bool NFunction::density_strictly_increasing() const {
  return impl_->density_strictly_increasing;
}

namespace {

constexpr int kBracketDoublings = 60;

// Expand [0, hi] until b(hi) >= t.
double expand_bracket(const NFunction& nf, double t) {
  double hi = 1.0;
  for (int k = 0; k <= kBracketDoublings; ++k) {
    if (nf.density(hi) >= t) return hi;
    hi *= 2.0;
  }
  std::ostringstream os;
  os << "conjugate(" << nf.label() << "): density never reaches " << t
     << " within the bracket expansion limit; sup appears unbounded";
  throw UnboundedConjugateError(os.str());
}

// Monotone bisection for b(s) = t on [0, hi].  Because b is nondecreasing
// this converges to the maximizer of s t - B(s) even across jumps of b.
double bisect_density(const NFunction& nf, double t, double hi) {
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (nf.density(mid) < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Derivative-free fallback: golden-section on the concave map s -> s t - B(s).
double golden_section(const NFunction& nf, double t, double hi) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  auto g = [&](double s) { return s * t - nf(s); };
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 300 && b - a > 1e-15 * (1.0 + b); ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - invphi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + invphi * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double conjugate_argmax(const NFunction& nf, double t) {
  require_domain(t, "conjugate");
  if (t == 0.0) return 0.0;
  const double hi = expand_bracket(nf, t);
  if (nf.density_strictly_increasing()) return bisect_density(nf, t, hi);
  return golden_section(nf, t, hi);
}

double conjugate(const NFunction& nf, double t) {
  require_domain(t, "conjugate");
  if (t == 0.0) return 0.0;
  const double s = conjugate_argmax(nf, t);
  const double value = s * t - nf(s);
  return value > 0.0 ? value : 0.0;
}

NFunction conjugate_of(const NFunction& nf) {
  return NFunction::custom(
      "conjugate(" + nf.label() + ")", [nf](double t) { return conjugate(nf, t); },
      [nf](double t) { return conjugate_argmax(nf, t); },
      /*density_strictly_increasing=*/true);
}

ConjugatePair ConjugatePair::numeric(const NFunction& primal, double tolerance) {
  return ConjugatePair{primal, conjugate_of(primal), tolerance};
}

double young_slack(const ConjugatePair& pair, double s, double t) {
  return pair.primal(s) + pair.dual(t) - s * t;
}

Lemma21Triple lemma21_check(const ConjugatePair& pair, double t) {
  if (!(t > 0.0)) throw std::domain_error("lemma21_check: need t > 0");
  const double bt = pair.primal.density(t);
  return Lemma21Triple{pair.dual(bt), t * bt, pair.primal(2.0 * t)};
}

double delta2_estimate(const NFunction& nf, double t0, double T, int samples) {
  if (!(t0 >= 0.0) || !(T > t0)) {
    throw std::invalid_argument("delta2_estimate: need 0 <= t0 < T");
  }
  double worst = 0.0;
  for (double t : log_sample(std::max(t0, 1e-12), T, samples)) {
    const double denom = nf(t);
    if (denom == 0.0) {
      std::ostringstream os;
      os << "delta2_estimate(" << nf.label() << "): B(" << t
         << ") = 0 at a positive sample point";
      throw InvalidNFunctionError(os.str());
    }
    worst = std::max(worst, nf(2.0 * t) / denom);
  }
  return worst;
}

bool equivalence_check(const NFunction& B, const NFunction& Bp, double k1, double k2,
                       double t0, double T, int samples) {
  if (!(k1 > 0.0) || !(k2 > 0.0) || k1 > k2) {
    throw std::invalid_argument("equivalence_check: need 0 < k1 <= k2");
  }
  for (double t : log_sample(std::max(t0, 1e-12), T, samples)) {
    const double mid = B(t);
    const double slack = 1e-12 * (1.0 + std::abs(mid));
    if (Bp(k1 * t) > mid + slack) return false;
    if (mid > Bp(k2 * t) + slack) return false;
  }
  return true;
}

GrowthConstants::GrowthConstants(double c_, double c_prime_, double C_, NFunction lower_,
                                 NFunction upper_)
    : c(c_), c_prime(c_prime_), C(C_), lower(std::move(lower_)), upper(std::move(upper_)) {
  if (!(c > 0.0) || !(C > 0.0) || !(c_prime >= 0.0)) {
    throw std::invalid_argument("GrowthConstants: need c > 0, C > 0, c' >= 0");
  }
}

bool NFunctionDiagnostics::pass(double superlinearity_threshold) const {
  return zero_at_origin && worst_convexity_slack >= -1e-10 && sublinear_at_zero &&
         ratio_at_large_t > superlinearity_threshold &&
         worst_density_consistency <= 1e-8;
}

NFunctionDiagnostics diagnose(const NFunction& nf) {
  NFunctionDiagnostics d;
  d.zero_at_origin = nf(0.0) == 0.0;

  const auto ts = log_sample(1e-6, 1e6, 97);
  d.worst_convexity_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); j += 7) {
      const double s = ts[i], t = ts[j];
      const double slack = 0.5 * (nf(s) + nf(t)) - nf(0.5 * (s + t));
      const double scale = 1.0 + std::abs(nf(t));
      d.worst_convexity_slack = std::min(d.worst_convexity_slack, slack / scale);
    }
  }

  d.sublinear_at_zero = nf(1e-6) / 1e-6 < nf(1e-3) / 1e-3;
  d.ratio_at_large_t = nf(1e6) / 1e6;

  // B(t) = int_0^t b by composite Simpson on each sampled t.
  d.worst_density_consistency = 0.0;
  for (double t : {1e-3, 1e-1, 1.0, 10.0, 100.0}) {
    const int m = 8192;
    const double h = t / m;
    double acc = nf.density(0.0) + nf.density(t);
    for (int i = 1; i < m; ++i) {
      acc += (i % 2 == 1 ? 4.0 : 2.0) * nf.density(i * h);
    }
    const double integral = acc * h / 3.0;
    const double rel = std::abs(integral - nf(t)) / std::max(nf(t), 1e-300);
    d.worst_density_consistency = std::max(d.worst_density_consistency, rel);
  }
  return d;
}

}  // namespace orlhom
