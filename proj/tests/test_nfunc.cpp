#include <doctest.h>

#include <cmath>
#include <random>

#include "orlhom/nfunc.hpp"
#include "test_util.hpp"

using namespace orlhom;

namespace {

// Independent dense-grid sup for the conjugate, used to freeze expected
// values before trusting the root-finding path.
double brute_force_conjugate(const NFunction& nf, double t, double s_max, std::size_t samples) {
  double best = 0.0;
  for (std::size_t i = 0; i <= samples; ++i) {
    const double s = s_max * static_cast<double>(i) / static_cast<double>(samples);
    best = std::max(best, s * t - nf(s));
  }
  return best;
}

}  // namespace

TEST_CASE("eval: closed forms and normalization") {
  CHECK(NFunction::power(2.0)(3.0) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(NFunction::power(2.0)(0.0) == 0.0);
  CHECK(NFunction::power_log(2.0)(0.0) == 0.0);
  CHECK(NFunction::quadratic()(0.0) == 0.0);
  CHECK(NFunction::exponential()(0.0) == 0.0);
  // t^p log(1+t) at p=2, t=1 equals log 2.
  CHECK(NFunction::power_log(2.0)(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("eval: domain errors") {
  const NFunction b = NFunction::power(2.0);
  CHECK_THROWS_AS(b(-1.0), std::domain_error);
  CHECK_THROWS_AS(b(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(b(std::numeric_limits<double>::infinity()), std::domain_error);
  CHECK_THROWS_AS(b.density(-0.5), std::domain_error);
}

TEST_CASE("conjugate: quadratic is self-conjugate") {
  const NFunction b = NFunction::quadratic();
  CHECK(conjugate(b, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(conjugate(b, 0.0) == 0.0);
  CHECK(conjugate(b, 3.0) == doctest::Approx(4.5).epsilon(1e-10));
}

TEST_CASE("conjugate: cubic against the dense-grid oracle") {
  // B(t) = t^3/3, so the conjugate at 1 is 2/3 (attained at s = 1).
  const NFunction b = NFunction::power(3.0, 1.0 / 3.0);
  const double oracle = brute_force_conjugate(b, 1.0, 10.0, 10'000'000);
  CHECK(oracle == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(conjugate(b, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(conjugate(b, 1.0) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("conjugate: unbounded sup is diagnosed") {
  // Linear growth: s*t - B(s) is unbounded for t above the slope.
  const NFunction linearish =
      NFunction::custom("linear", [](double t) { return t; }, [](double) { return 1.0; });
  CHECK_THROWS_AS(conjugate(linearish, 2.0), UnboundedConjugateError);
}

TEST_CASE("conjugate: golden-section fallback for flat densities") {
  // b flat at level 1 on [1, 2]; B piecewise quadratic/linear.
  auto density = [](double t) {
    if (t <= 1.0) return t;
    if (t <= 2.0) return 1.0;
    return t - 1.0;
  };
  auto eval = [](double t) {
    if (t <= 1.0) return 0.5 * t * t;
    if (t <= 2.0) return 0.5 + (t - 1.0);
    return 1.5 + 0.5 * (t - 2.0) * (t - 2.0) + (t - 2.0);
  };
  const NFunction b = NFunction::custom("plateau", eval, density, false);
  for (double t : {0.5, 1.0, 1.7, 3.0}) {
    const double oracle = brute_force_conjugate(b, t, 20.0, 2'000'000);
    CHECK(conjugate(b, t) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("delta2: power families give exactly 2^p") {
  CHECK(delta2_estimate(NFunction::power(2.0), 0.0, 1e3) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(delta2_estimate(NFunction::power(3.0), 0.0, 1e2) == doctest::Approx(8.0).epsilon(1e-12));
  // Range-independence.
  CHECK(delta2_estimate(NFunction::power(4.5), 1e-3, 1e6) ==
        doctest::Approx(std::pow(2.0, 4.5)).epsilon(1e-12));
}

TEST_CASE("delta2: power-log stays below 8 on [1, 1e3]") {
  const double est = delta2_estimate(NFunction::power_log(2.0), 1.0, 1e3);
  // Sampled sup of the closed-form ratio 4 log(1+2t)/log(1+t).
  double oracle = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double t = std::exp(std::log(1.0) + (std::log(1e3) - std::log(1.0)) * i / 399.0);
    oracle = std::max(oracle, 4.0 * std::log1p(2.0 * t) / std::log1p(t));
  }
  CHECK(est == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(est <= 8.0);
}

TEST_CASE("delta2: exponential family fails the doubling condition") {
  // Direct ratio at t = 100 already exceeds any reasonable threshold.
  const NFunction e = NFunction::exponential();
  CHECK(e(200.0) / e(100.0) > 1e6);
  CHECK(delta2_estimate(e, 1.0, 1e2) > 1e6);
}

TEST_CASE("delta2: vanishing B is rejected") {
  const NFunction broken = NFunction::custom(
      "broken", [](double t) { return std::max(0.0, t - 1.0); },
      [](double t) { return t > 1.0 ? 1.0 : 0.0; });
  CHECK_THROWS_AS(delta2_estimate(broken, 0.1, 10.0), InvalidNFunctionError);
}

TEST_CASE("lemma21 chain: closed-form checks") {
  // B = t^2: b(t) = 2t and the conjugate is s^2/4.
  {
    const ConjugatePair pair = ConjugatePair::numeric(NFunction::power(2.0));
    const Lemma21Triple tr = lemma21_check(pair, 1.0);
    CHECK(tr.dual_at_density == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(tr.t_times_density == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(tr.primal_at_double == doctest::Approx(4.0).epsilon(1e-14));
  }
  // B = t^2/2 is self-conjugate.
  {
    const ConjugatePair pair = ConjugatePair::numeric(NFunction::quadratic());
    const Lemma21Triple tr = lemma21_check(pair, 2.0);
    CHECK(tr.dual_at_density == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(tr.t_times_density == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(tr.primal_at_double == doctest::Approx(8.0).epsilon(1e-14));
  }
  // Everything vanishes at the origin.
  {
    const ConjugatePair pair = ConjugatePair::numeric(NFunction::power(2.0));
    const Lemma21Triple tr = lemma21_check(pair, 1e-8);
    CHECK(tr.dual_at_density <= 1e-7);
    CHECK(tr.t_times_density <= 1e-7);
    CHECK(tr.primal_at_double <= 1e-7);
  }
}

TEST_CASE("lemma21 chain holds across families and scales") {
  for (const NFunction& nf : {NFunction::power(2.0), NFunction::power(3.0),
                              NFunction::power_log(2.0), NFunction::quadratic()}) {
    const ConjugatePair pair = ConjugatePair::numeric(nf);
    for (int i = 0; i < 100; ++i) {
      const double t = std::pow(10.0, -2.0 + 4.0 * i / 99.0);
      const Lemma21Triple tr = lemma21_check(pair, t);
      const double slack = 1e-8 * tr.primal_at_double;
      CHECK(tr.dual_at_density <= tr.t_times_density + slack);
      CHECK(tr.t_times_density <= tr.primal_at_double + slack);
    }
  }
}

TEST_CASE("equivalence of N-functions under two-sided dilations") {
  const NFunction p2 = NFunction::power(2.0);
  CHECK(equivalence_check(p2, p2, 1.0, 1.0, 0.0, 1e3));
  // 2 (t/2)^2 = t^2/2 <= t^2 <= 2 t^2.
  const NFunction twice =
      NFunction::custom("2t^2", [](double t) { return 2.0 * t * t; },
                        [](double t) { return 4.0 * t; });
  CHECK(equivalence_check(p2, twice, 0.5, 1.0, 0.0, 1e3));
  CHECK_FALSE(equivalence_check(p2, NFunction::power(3.0), 1.0, 1.0, 1.0, 1e3));
  CHECK_FALSE(equivalence_check(p2, NFunction::power(3.0), 0.25, 4.0, 1.0, 1e3));
}

TEST_CASE("property: double conjugation returns the original function") {
  for (const NFunction& nf : {NFunction::power(2.0), NFunction::power(3.0),
                              NFunction::quadratic(), NFunction::power_log(2.0)}) {
    const NFunction dd = conjugate_of(conjugate_of(nf));
    for (double t : {0.1, 1.0, 10.0}) {
      CHECK(dd(t) == doctest::Approx(nf(t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("property: Fenchel-Young with equality at t = b(s)") {
  for (const NFunction& nf :
       {NFunction::power(2.0), NFunction::power(3.0), NFunction::power_log(2.0)}) {
    const ConjugatePair pair = ConjugatePair::numeric(nf);
    for (double s : {0.05, 0.3, 1.0, 2.5, 20.0}) {
      const double t = nf.density(s);
      const double gap = s * t - nf(s) - conjugate(nf, t);
      CHECK(std::abs(gap) <= 1e-8 * (1.0 + std::abs(s * t)));
      // And the inequality on mismatched pairs.
      CHECK(young_slack(pair, s, 3.0 * t + 0.1) >= -1e-10);
      CHECK(young_slack(pair, 2.0 * s + 0.1, t) >= -1e-10);
    }
  }
}

TEST_CASE("property: conjugate is nondecreasing and convex") {
  const NFunction nf = NFunction::power_log(2.0);
  std::vector<double> ts, vals;
  for (int i = 0; i < 60; ++i) {
    ts.push_back(std::pow(10.0, -1.0 + 2.5 * i / 59.0));
    vals.push_back(conjugate(nf, ts.back()));
  }
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    CHECK(vals[i + 1] >= vals[i] - 1e-10 * (1.0 + vals[i]));
  }
  // Midpoint convexity on the sampled grid (uniform in index is not uniform
  // in t, so recompute at true midpoints).
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double mid = 0.5 * (ts[i] + ts[i + 1]);
    CHECK(conjugate(nf, mid) <=
          0.5 * (vals[i] + vals[i + 1]) + 1e-8 * (1.0 + vals[i + 1]));
  }
}

TEST_CASE("property: Young inequality on random pairs") {
  auto r = orlhom_test::rng(1);
  std::uniform_real_distribution<double> dist(0.0, 8.0);
  for (const NFunction& nf : {NFunction::power(2.0), NFunction::power_log(2.0)}) {
    const ConjugatePair pair = ConjugatePair::numeric(nf);
    for (int i = 0; i < 200; ++i) {
      const double s = dist(r), t = dist(r);
      CHECK(young_slack(pair, s, t) >= -1e-10 * (1.0 + nf(s)));
    }
  }
}

TEST_CASE("diagnostics validate the builtin families") {
  for (const NFunction& nf : {NFunction::power(2.0), NFunction::power(3.0),
                              NFunction::power_log(2.0), NFunction::quadratic()}) {
    const NFunctionDiagnostics d = diagnose(nf);
    CHECK(d.pass(1.0));
  }
  CHECK(diagnose(NFunction::exponential()).pass(1.0));
}

TEST_CASE("growth constants validate positivity") {
  CHECK_THROWS_AS(GrowthConstants(0.0, 0.0, 1.0, NFunction::power(2.0), NFunction::power(2.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(GrowthConstants(1.0, -1.0, 1.0, NFunction::power(2.0), NFunction::power(2.0)),
                  std::invalid_argument);
  CHECK_NOTHROW(GrowthConstants(1.0, 0.0, 3.0, NFunction::power(2.0), NFunction::power(2.0)));
}

TEST_CASE("conjugate_argmax inverts the density for power families") {
  // The maximizer of s t - B(s) solves b(s) = t, so it is b^{-1}(t); for
  // scale * t^p that is (t / (scale p))^{1/(p-1)}.  It also serves as the
  // density of the conjugate.
  for (double p : {2.0, 3.0}) {
    for (double scale : {1.0, 0.5}) {
      const NFunction b = NFunction::power(p, scale);
      for (double t : {0.1, 1.0, 7.0}) {
        const double expected = std::pow(t / (scale * p), 1.0 / (p - 1.0));
        CHECK(conjugate_argmax(b, t) == doctest::Approx(expected).epsilon(1e-10));
        CHECK(conjugate_of(b).density(t) == doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }
}
