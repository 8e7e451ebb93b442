#pragma once

#include <cstdint>
#include <string>

#include "orlhom/grid.hpp"
#include "orlhom/nfunc.hpp"

namespace orlhom {

// Y-periodic coefficient a(y) with ess-inf > 0.  Evaluation wraps each
// coordinate into [0,1), so fields are periodic by construction.
class CoefficientField {
 public:
  enum class Kind { Constant, Sine, Laminate, Checkerboard };

  static CoefficientField constant(double a0);
  // alpha + beta * sin(2*pi*y_1); requires alpha - |beta| > 0.
  static CoefficientField sine(double alpha, double beta);
  // a1 where frac(y_axis) < 1/2, a2 elsewhere.
  static CoefficientField laminate(double a1, double a2, int axis = 0);
  // a1 on the two diagonal quadrants of the half-period tiling, a2 on the
  // off-diagonal ones; 2D only.
  static CoefficientField checkerboard(double a1, double a2);

  double operator()(Point y) const;
  Kind kind() const { return kind_; }
  int axis() const { return axis_; }
  double min_value() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Constant;
  double p0_ = 1.0, p1_ = 0.0;
  int axis_ = 0;
};

// Convex radial potential of the gradient variable.
class Potential {
 public:
  enum class Kind { Quadratic, Power, Orlicz };

  static Potential quadratic();                 // |xi|^2
  static Potential power(double p);             // |xi|^p / p, p >= 2
  // B(sqrt(delta^2 + |xi|^2)) - B(delta); the small shift keeps the gradient
  // defined at xi = 0 for densities with b(t)/t unbounded there.
  static Potential orlicz(const NFunction& B, double delta = 1e-8);

  double eval(const Vec& xi, int dim) const;
  Vec grad(const Vec& xi, int dim) const;
  Kind kind() const { return kind_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::Quadratic;
  double p_ = 2.0;
  double delta_ = 1e-8;
  const NFunction* nf_ptr() const { return has_nf_ ? &nf_ : nullptr; }
  bool has_nf_ = false;
  NFunction nf_ = NFunction::quadratic();
};

// Density f(y, xi) = a(y) * potential(xi).
struct Integrand {
  CoefficientField coefficient;
  Potential potential;

  double eval(Point y, const Vec& xi, int dim) const {
    return coefficient(y) * potential.eval(xi, dim);
  }
  Vec grad_xi(Point y, const Vec& xi, int dim) const {
    Vec g = potential.grad(xi, dim);
    const double a = coefficient(y);
    g[0] *= a;
    g[1] *= a;
    return g;
  }
  std::string describe() const {
    return coefficient.describe() + " * " + potential.describe();
  }
};

struct GrowthReport {
  double worst_lower_slack;  // min over samples of f - (c B'(|xi|) - c')
  double worst_upper_slack;  // min over samples of C (1 + B(|xi|)) - f
  double lower_arg_norm;     // |xi| at the lower worst case
  double upper_arg_norm;
  bool pass(double slack_floor = 0.0) const {
    return worst_lower_slack >= slack_floor && worst_upper_slack >= slack_floor;
  }
};

// Evaluates both growth inequalities on a randomized (y, xi) sample with
// |xi| log-spaced in [1e-3, 1e3].  Violations are reported, never thrown.
GrowthReport check_growth(const Integrand& f, int dim, const GrowthConstants& gc,
                          int samples, std::uint64_t seed = 12345);

struct ConvexityReport {
  double worst_slack;  // min of (f(y,xi)+f(y,eta))/2 - f(y,(xi+eta)/2)
  bool pass(double slack_floor = -1e-10) const { return worst_slack >= slack_floor; }
};

ConvexityReport check_convexity(const Integrand& f, int dim, int samples,
                                std::uint64_t seed = 12345);

}  // namespace orlhom
