#include "orlhom/integrand.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace orlhom {

namespace {

double wrap_unit(double y) {
  double f = y - std::floor(y);
  if (f == 1.0) f = 0.0;
  return f;
}

}  // namespace

CoefficientField CoefficientField::constant(double a0) {
  if (!(a0 > 0.0)) throw std::invalid_argument("CoefficientField::constant: need a0 > 0");
  CoefficientField c;
  c.kind_ = Kind::Constant;
  c.p0_ = a0;
  return c;
}

CoefficientField CoefficientField::sine(double alpha, double beta) {
  if (!(alpha - std::abs(beta) > 0.0)) {
    throw std::invalid_argument("CoefficientField::sine: need alpha - |beta| > 0");
  }
  CoefficientField c;
  c.kind_ = Kind::Sine;
  c.p0_ = alpha;
  c.p1_ = beta;
  return c;
}

CoefficientField CoefficientField::laminate(double a1, double a2, int axis) {
  if (!(a1 > 0.0) || !(a2 > 0.0)) {
    throw std::invalid_argument("CoefficientField::laminate: phases must be positive");
  }
  if (axis != 0 && axis != 1) {
    throw std::invalid_argument("CoefficientField::laminate: axis must be 0 or 1");
  }
  CoefficientField c;
  c.kind_ = Kind::Laminate;
  c.p0_ = a1;
  c.p1_ = a2;
  c.axis_ = axis;
  return c;
}

CoefficientField CoefficientField::checkerboard(double a1, double a2) {
  if (!(a1 > 0.0) || !(a2 > 0.0)) {
    throw std::invalid_argument("CoefficientField::checkerboard: phases must be positive");
  }
  CoefficientField c;
  c.kind_ = Kind::Checkerboard;
  c.p0_ = a1;
  c.p1_ = a2;
  return c;
}

double CoefficientField::operator()(Point y) const {
  switch (kind_) {
    case Kind::Constant:
      return p0_;
    case Kind::Sine:
      return p0_ + p1_ * std::sin(2.0 * M_PI * wrap_unit(y[0]));
    case Kind::Laminate:
      return wrap_unit(y[static_cast<std::size_t>(axis_)]) < 0.5 ? p0_ : p1_;
    case Kind::Checkerboard: {
      const bool one = wrap_unit(y[0]) < 0.5;
      const bool two = wrap_unit(y[1]) < 0.5;
      return one == two ? p0_ : p1_;
    }
  }
  return p0_;
}

double CoefficientField::min_value() const {
  switch (kind_) {
    case Kind::Constant:
      return p0_;
    case Kind::Sine:
      return p0_ - std::abs(p1_);
    case Kind::Laminate:
    case Kind::Checkerboard:
      return std::min(p0_, p1_);
  }
  return p0_;
}

std::string CoefficientField::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant:
      os << "constant(" << p0_ << ")";
      break;
    case Kind::Sine:
      os << "sine(alpha=" << p0_ << ", beta=" << p1_ << ")";
      break;
    case Kind::Laminate:
      os << "laminate(" << p0_ << ", " << p1_ << ", axis=" << axis_ << ")";
      break;
    case Kind::Checkerboard:
      os << "checkerboard(" << p0_ << ", " << p1_ << ")";
      break;
  }
  return os.str();
}

Potential Potential::quadratic() { return Potential{}; }

Potential Potential::power(double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("Potential::power: need p >= 2");
  Potential q;
  q.kind_ = Kind::Power;
  q.p_ = p;
  return q;
}

Potential Potential::orlicz(const NFunction& B, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("Potential::orlicz: need delta > 0");
  Potential q;
  q.kind_ = Kind::Orlicz;
  q.delta_ = delta;
  q.has_nf_ = true;
  q.nf_ = B;
  return q;
}

double Potential::eval(const Vec& xi, int dim) const {
  const double r2 = dot(xi, xi, dim);
  switch (kind_) {
    case Kind::Quadratic:
      return r2;
    case Kind::Power:
      return std::pow(std::sqrt(r2), p_) / p_;
    case Kind::Orlicz: {
      const double r = std::sqrt(delta_ * delta_ + r2);
      return nf_(r) - nf_(delta_);
    }
  }
  return r2;
}

Vec Potential::grad(const Vec& xi, int dim) const {
  Vec g{0.0, 0.0};
  const double r2 = dot(xi, xi, dim);
  switch (kind_) {
    case Kind::Quadratic:
      for (int k = 0; k < dim; ++k) g[static_cast<std::size_t>(k)] = 2.0 * xi[static_cast<std::size_t>(k)];
      return g;
    case Kind::Power: {
      if (r2 == 0.0) return g;
      const double f = std::pow(std::sqrt(r2), p_ - 2.0);
      for (int k = 0; k < dim; ++k) g[static_cast<std::size_t>(k)] = f * xi[static_cast<std::size_t>(k)];
      return g;
    }
    case Kind::Orlicz: {
      const double r = std::sqrt(delta_ * delta_ + r2);
      const double f = nf_.density(r) / r;
      for (int k = 0; k < dim; ++k) g[static_cast<std::size_t>(k)] = f * xi[static_cast<std::size_t>(k)];
      return g;
    }
  }
  return g;
}

std::string Potential::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Quadratic:
      os << "|xi|^2";
      break;
    case Kind::Power:
      os << "|xi|^" << p_ << "/" << p_;
      break;
    case Kind::Orlicz:
      os << "orlicz(" << nf_.label() << ", delta=" << delta_ << ")";
      break;
  }
  return os.str();
}

namespace {

struct SampleGen {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  explicit SampleGen(std::uint64_t seed) : rng(seed) {}

  Point point(int dim) {
    Point y{unit(rng), 0.0};
    if (dim == 2) y[1] = unit(rng);
    return y;
  }
  Vec direction(int dim) {
    if (dim == 1) return {unit(rng) < 0.5 ? -1.0 : 1.0, 0.0};
    const double theta = 2.0 * M_PI * unit(rng);
    return {std::cos(theta), std::sin(theta)};
  }
  double log_radius(double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unit(rng));
  }
};

}  // namespace

GrowthReport check_growth(const Integrand& f, int dim, const GrowthConstants& gc,
                          int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_growth: need samples >= 1");
  SampleGen gen(seed);
  GrowthReport rep{std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (int s = 0; s < samples; ++s) {
    const Point y = gen.point(dim);
    const double r = gen.log_radius(1e-3, 1e3);
    const Vec dir = gen.direction(dim);
    const Vec xi{r * dir[0], r * dir[1]};
    const double fy = f.eval(y, xi, dim);
    const double lower = fy - (gc.c * gc.lower(r) - gc.c_prime);
    const double upper = gc.C * (1.0 + gc.upper(r)) - fy;
    if (lower < rep.worst_lower_slack) {
      rep.worst_lower_slack = lower;
      rep.lower_arg_norm = r;
    }
    if (upper < rep.worst_upper_slack) {
      rep.worst_upper_slack = upper;
      rep.upper_arg_norm = r;
    }
  }
  return rep;
}

ConvexityReport check_convexity(const Integrand& f, int dim, int samples,
                                std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_convexity: need samples >= 1");
  SampleGen gen(seed);
  ConvexityReport rep{std::numeric_limits<double>::infinity()};
  for (int s = 0; s < samples; ++s) {
    const Point y = gen.point(dim);
    auto draw = [&]() {
      const double r = gen.log_radius(1e-3, 1e3);
      const Vec dir = gen.direction(dim);
      return Vec{r * dir[0], r * dir[1]};
    };
    const Vec xi = draw(), eta = draw();
    const Vec mid{0.5 * (xi[0] + eta[0]), 0.5 * (xi[1] + eta[1])};
    const double lhs = f.eval(y, mid, dim);
    const double rhs = 0.5 * (f.eval(y, xi, dim) + f.eval(y, eta, dim));
    const double scale = 1.0 + std::abs(rhs);
    rep.worst_slack = std::min(rep.worst_slack, (rhs - lhs) / scale);
  }
  return rep;
}

}  // namespace orlhom
