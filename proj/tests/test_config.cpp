#include <doctest.h>

#include <string>

#include "orlhom/config.hpp"
#include "test_util.hpp"

using namespace orlhom;

namespace {

std::string errors_joined(const ParseResult& r) {
  std::string out;
  for (const std::string& e : r.errors) out += e + "\n";
  return out;
}

}  // namespace

TEST_CASE("parse: minimal config gets documented defaults") {
  const ParseResult r = parse_config_text("scenario = \"cell\"\n");
  REQUIRE_MESSAGE(r.ok(), errors_joined(r));
  CHECK(r.config->scenario == Scenario::Cell);
  CHECK(r.config->seed == 12345);
  CHECK(r.config->grid.dim == 1);
  CHECK(r.config->grid.cell_n == 256);
  CHECK(r.config->solver.tolerance == 1e-9);
  CHECK(r.config->problem.xi == std::vector<double>{1.0});
}

TEST_CASE("parse: comma-separated assignments and comments") {
  const std::string text = R"(
# experiment record
scenario = "eps-sweep", seed = 7
[integrand]
coefficient = "laminate", a1 = 1.0, a2 = 4.0, potential = "quadratic"
[grid]
dim = 1, cell_n = 256, domain_n = 2048
[problem]
xi = [1.0]
eps = [0.125, 0.0625]   # strictly decreasing
)";
  const ParseResult r = parse_config_text(text);
  REQUIRE_MESSAGE(r.ok(), errors_joined(r));
  CHECK(r.config->scenario == Scenario::EpsSweep);
  CHECK(r.config->seed == 7);
  CHECK(r.config->integrand.coefficient == "laminate");
  CHECK(r.config->integrand.a2 == 4.0);
  CHECK(r.config->problem.eps == std::vector<double>{0.125, 0.0625});
}

TEST_CASE("parse: unknown keys are rejected by name") {
  const ParseResult r = parse_config_text("scenario = \"cell\"\nbogus_key = 3\n");
  CHECK_FALSE(r.ok());
  CHECK(errors_joined(r).find("bogus_key") != std::string::npos);
}

TEST_CASE("parse: inadmissible eps shows the divisibility constraint") {
  const std::string text =
      "scenario = \"eps-sweep\"\n[problem]\neps = [0.3]\n[grid]\ndomain_n = 2048\n";
  const ParseResult r = parse_config_text(text);
  CHECK_FALSE(r.ok());
  CHECK(errors_joined(r).find("1/epsilon in N") != std::string::npos);
}

TEST_CASE("parse: under-resolved period is rejected") {
  // 4 nodes per period: 1/eps = 512 divides 2048 but 2048/512 = 4 < 8.
  const std::string text =
      "scenario = \"eps-sweep\"\n[problem]\neps = [0.001953125]\n";
  const ParseResult r = parse_config_text(text);
  CHECK_FALSE(r.ok());
  CHECK(errors_joined(r).find("at least 8") != std::string::npos);
}

TEST_CASE("parse: all violations are collected, not just the first") {
  const std::string text = R"(
scenario = "eps-sweep"
junk = 1
[problem]
eps = [0.3, 0.125]
[grid]
dim = 5
)";
  const ParseResult r = parse_config_text(text);
  CHECK_FALSE(r.ok());
  CHECK(r.errors.size() >= 2);
}

TEST_CASE("parse: missing integrand for eps-sweep is rejected with the field name") {
  const ParseResult r = parse_config_text(
      "scenario = \"eps-sweep\"\n[problem]\neps = [0.125, 0.0625]\n");
  CHECK_FALSE(r.ok());
  CHECK(errors_joined(r).find("integrand.coefficient") != std::string::npos);
  // The cell scenario keeps its documented defaults.
  CHECK(parse_config_text("scenario = \"cell\"\n").ok());
}

TEST_CASE("parse: missing scenario and unknown scenario") {
  CHECK_FALSE(parse_config_text("seed = 3\n").ok());
  const ParseResult r = parse_config_text("scenario = \"warp\"\n");
  CHECK_FALSE(r.ok());
  CHECK(errors_joined(r).find("warp") != std::string::npos);
}

TEST_CASE("parse: type errors are diagnosed") {
  CHECK_FALSE(parse_config_text("scenario = cell\n").ok());  // unquoted string
  CHECK_FALSE(parse_config_text("scenario = \"cell\"\nseed = 1.5\n").ok());
  CHECK_FALSE(parse_config_text("scenario = \"cell\"\n[output]\ncsv = 1\n").ok());
  CHECK_FALSE(parse_config_text("scenario = \"cell\"\nseed = 2\nseed = 3\n").ok());
}

TEST_CASE("parse: checkerboard needs dim 2 and even grids") {
  const std::string base =
      "scenario = \"cell\"\n[integrand]\ncoefficient = \"checkerboard\"\n";
  CHECK_FALSE(parse_config_text(base).ok());  // dim 1
  const ParseResult odd = parse_config_text(
      base + "[grid]\ndim = 2, cell_n = 129, domain_n = 2048\n");
  CHECK_FALSE(odd.ok());
  const ParseResult good = parse_config_text(
      base + "[grid]\ndim = 2, cell_n = 64, domain_n = 256\n[problem]\nxi = [1.0, 0.0]\n");
  REQUIRE_MESSAGE(good.ok(), errors_joined(good));
  CHECK(good.config->integrand.coefficient == "checkerboard");
}

TEST_CASE("parse: fhom-table needs a well-formed xi grid") {
  const std::string good = R"(
scenario = "fhom-table"
[problem]
xi_min = [-2.0], xi_max = [2.0], xi_count = [5]
)";
  CHECK(parse_config_text(good).ok());
  const std::string bad = R"(
scenario = "fhom-table"
[problem]
xi_min = [2.0], xi_max = [-2.0], xi_count = [1]
)";
  const ParseResult r = parse_config_text(bad);
  CHECK_FALSE(r.ok());
  CHECK(r.errors.size() >= 2);
}

TEST_CASE("config echo round-trips through the parser") {
  const std::string text = R"(
scenario = "eps-sweep", seed = 99
[integrand]
coefficient = "sine", alpha = 2.0, beta = 1.0
[problem]
eps = [0.125, 0.0625, 0.03125]
)";
  const ParseResult first = parse_config_text(text);
  REQUIRE_MESSAGE(first.ok(), errors_joined(first));
  const ParseResult second = parse_config_text(first.config->echo());
  REQUIRE_MESSAGE(second.ok(), errors_joined(second));
  CHECK(second.config->echo() == first.config->echo());
}

TEST_CASE("make_nfunc and make_integrand honor the specs") {
  NFuncSpec nf;
  nf.family = "power-log";
  nf.p = 2.0;
  CHECK(make_nfunc(nf).label() == "power-log(p=2)");

  IntegrandSpec is;
  is.coefficient = "sine";
  is.alpha = 2.0;
  is.beta = 1.0;
  is.potential = "power";
  is.p = 3.0;
  const Integrand f = make_integrand(is, 1, nf);
  CHECK(f.eval({0.25, 0.0}, {2.0, 0.0}, 1) == doctest::Approx(3.0 * 8.0 / 3.0));
}
