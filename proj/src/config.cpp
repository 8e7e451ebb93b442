#include "orlhom/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "orlhom/epsproblem.hpp"

namespace orlhom {

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::NfuncCheck: return "nfunc-check";
    case Scenario::Cell: return "cell";
    case Scenario::FhomTable: return "fhom-table";
    case Scenario::EpsSweep: return "eps-sweep";
    case Scenario::Recovery: return "recovery";
    case Scenario::TwoScaleCheck: return "twoscale-check";
  }
  return "?";
}

std::optional<Scenario> scenario_from_name(const std::string& name) {
  for (Scenario s : {Scenario::NfuncCheck, Scenario::Cell, Scenario::FhomTable,
                     Scenario::EpsSweep, Scenario::Recovery, Scenario::TwoScaleCheck}) {
    if (name == scenario_name(s)) return s;
  }
  return std::nullopt;
}

namespace {

struct RawValue {
  enum class Type { Number, String, Bool, NumberList };
  Type type = Type::Number;
  double num = 0.0;
  std::string str;
  bool flag = false;
  std::vector<double> list;
  int line = 0;
};

struct RawConfig {
  // key: "section.name"; top-level keys use an empty section, "name".
  std::map<std::string, RawValue> entries;
};

bool is_key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

void strip_comment(std::string& line) {
  bool in_quote = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quote = !in_quote;
    if (line[i] == '#' && !in_quote) {
      line.erase(i);
      return;
    }
  }
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Split at commas that are outside quotes and brackets.
std::vector<std::string> split_assignments(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  bool in_quote = false;
  int depth = 0;
  for (char c : line) {
    if (c == '"') in_quote = !in_quote;
    if (!in_quote) {
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == ',' && depth == 0) {
        parts.push_back(cur);
        cur.clear();
        continue;
      }
    }
    cur += c;
  }
  parts.push_back(cur);
  return parts;
}

bool parse_number(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

bool parse_value(const std::string& text, RawValue& v, std::string& err) {
  const std::string t = trim(text);
  if (t.empty()) {
    err = "empty value";
    return false;
  }
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"') {
      err = "unterminated string";
      return false;
    }
    v.type = RawValue::Type::String;
    v.str = t.substr(1, t.size() - 2);
    return true;
  }
  if (t == "true" || t == "false") {
    v.type = RawValue::Type::Bool;
    v.flag = t == "true";
    return true;
  }
  if (t.front() == '[') {
    if (t.back() != ']') {
      err = "unterminated list";
      return false;
    }
    v.type = RawValue::Type::NumberList;
    const std::string inner = t.substr(1, t.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double d;
      if (!parse_number(item, d)) {
        err = "list entry '" + trim(item) + "' is not a number";
        return false;
      }
      v.list.push_back(d);
    }
    if (v.list.empty()) {
      err = "empty list";
      return false;
    }
    return true;
  }
  double d;
  if (parse_number(t, d)) {
    v.type = RawValue::Type::Number;
    v.num = d;
    return true;
  }
  err = "cannot parse value '" + t + "' (strings must be quoted)";
  return false;
}

RawConfig parse_raw(const std::string& text, std::vector<std::string>& errors) {
  RawConfig raw;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    strip_comment(line);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[' && t.back() == ']' && t.find('=') == std::string::npos) {
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    for (const std::string& part : split_assignments(t)) {
      const std::string p = trim(part);
      if (p.empty()) continue;
      const std::size_t eq = p.find('=');
      if (eq == std::string::npos) {
        errors.push_back("line " + std::to_string(lineno) + ": expected key = value, got '" + p + "'");
        continue;
      }
      const std::string key = trim(p.substr(0, eq));
      if (key.empty() || !std::all_of(key.begin(), key.end(), is_key_char)) {
        errors.push_back("line " + std::to_string(lineno) + ": invalid key '" + key + "'");
        continue;
      }
      RawValue v;
      v.line = lineno;
      std::string err;
      if (!parse_value(p.substr(eq + 1), v, err)) {
        errors.push_back("line " + std::to_string(lineno) + ": key '" + key + "': " + err);
        continue;
      }
      const std::string full = section.empty() ? key : section + "." + key;
      if (raw.entries.count(full)) {
        errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
        continue;
      }
      raw.entries[full] = std::move(v);
    }
  }
  return raw;
}

// Typed extraction helpers; unknown keys are detected by erasing consumed
// entries and reporting the leftovers.
class Extractor {
 public:
  Extractor(RawConfig& raw, std::vector<std::string>& errors) : raw_(raw), errors_(errors) {}

  void number(const std::string& key, double& out) {
    auto it = raw_.entries.find(key);
    if (it == raw_.entries.end()) return;
    if (it->second.type != RawValue::Type::Number) {
      fail(key, "expected a number");
    } else {
      out = it->second.num;
    }
    raw_.entries.erase(it);
  }
  void integer(const std::string& key, int& out) {
    double d = static_cast<double>(out);
    const bool had = raw_.entries.count(key) > 0;
    number(key, d);
    if (!had) return;
    if (d != std::floor(d)) {
      fail(key, "expected an integer");
      return;
    }
    out = static_cast<int>(d);
  }
  void uinteger(const std::string& key, std::uint64_t& out) {
    double d = static_cast<double>(out);
    const bool had = raw_.entries.count(key) > 0;
    number(key, d);
    if (!had) return;
    if (d != std::floor(d) || d < 0) {
      fail(key, "expected a nonnegative integer");
      return;
    }
    out = static_cast<std::uint64_t>(d);
  }
  void linteger(const std::string& key, long& out) {
    double d = static_cast<double>(out);
    const bool had = raw_.entries.count(key) > 0;
    number(key, d);
    if (!had) return;
    if (d != std::floor(d) || d < 1) {
      fail(key, "expected a positive integer");
      return;
    }
    out = static_cast<long>(d);
  }
  void string(const std::string& key, std::string& out) {
    auto it = raw_.entries.find(key);
    if (it == raw_.entries.end()) return;
    if (it->second.type != RawValue::Type::String) {
      fail(key, "expected a quoted string");
    } else {
      out = it->second.str;
    }
    raw_.entries.erase(it);
  }
  void boolean(const std::string& key, bool& out) {
    auto it = raw_.entries.find(key);
    if (it == raw_.entries.end()) return;
    if (it->second.type != RawValue::Type::Bool) {
      fail(key, "expected true or false");
    } else {
      out = it->second.flag;
    }
    raw_.entries.erase(it);
  }
  void number_list(const std::string& key, std::vector<double>& out) {
    auto it = raw_.entries.find(key);
    if (it == raw_.entries.end()) return;
    if (it->second.type == RawValue::Type::NumberList) {
      out = it->second.list;
    } else if (it->second.type == RawValue::Type::Number) {
      out = {it->second.num};
    } else {
      fail(key, "expected a number or [list]");
    }
    raw_.entries.erase(it);
  }
  void int_list(const std::string& key, std::vector<int>& out) {
    std::vector<double> tmp;
    const bool had = raw_.entries.count(key) > 0;
    number_list(key, tmp);
    if (!had) return;
    std::vector<int> conv;
    for (double d : tmp) {
      if (d != std::floor(d)) {
        fail(key, "expected integer entries");
        return;
      }
      conv.push_back(static_cast<int>(d));
    }
    out = std::move(conv);
  }

  void report_unknown() {
    for (const auto& [key, value] : raw_.entries) {
      errors_.push_back("line " + std::to_string(value.line) + ": unknown key '" + key + "'");
    }
  }

 private:
  void fail(const std::string& key, const std::string& what) {
    errors_.push_back("key '" + key + "': " + what);
  }
  RawConfig& raw_;
  std::vector<std::string>& errors_;
};

void validate(const ExperimentConfig& c, const std::set<std::string>& present,
              std::vector<std::string>& errors) {
  auto err = [&](const std::string& m) { errors.push_back(m); };

  // Scenarios that minimize oscillating energies need the integrand spelled
  // out; defaults are too easy to run by accident there.
  const bool needs_integrand =
      c.scenario == Scenario::EpsSweep || c.scenario == Scenario::Recovery ||
      (c.scenario == Scenario::TwoScaleCheck &&
       c.problem.twoscale_mode == "minimizer-gradients");
  if (needs_integrand && !present.count("integrand.coefficient")) {
    err(std::string("missing required field 'integrand.coefficient' for scenario ") +
        scenario_name(c.scenario));
  }

  if (c.grid.dim != 1 && c.grid.dim != 2) err("grid.dim must be 1 or 2");
  if (c.grid.cell_n < 4) err("grid.cell_n must be >= 4");
  if (c.grid.domain_n < 4) err("grid.domain_n must be >= 4");

  const bool piecewise = c.integrand.coefficient == "laminate" ||
                         c.integrand.coefficient == "checkerboard";
  if (piecewise && (c.grid.cell_n % 2 != 0 || c.grid.domain_n % 2 != 0)) {
    err("piecewise coefficients need even grid sizes so interfaces align with nodes");
  }
  if (c.integrand.coefficient == "checkerboard" && c.grid.dim != 2) {
    err("integrand.coefficient = \"checkerboard\" requires grid.dim = 2");
  }
  if (c.integrand.coefficient != "constant" && c.integrand.coefficient != "sine" &&
      c.integrand.coefficient != "laminate" && c.integrand.coefficient != "checkerboard") {
    err("integrand.coefficient must be constant | sine | laminate | checkerboard");
  }
  if (c.integrand.potential != "quadratic" && c.integrand.potential != "power" &&
      c.integrand.potential != "orlicz") {
    err("integrand.potential must be quadratic | power | orlicz");
  }
  if (c.integrand.potential == "power" && !(c.integrand.p >= 2.0)) {
    err("integrand.p must be >= 2 for the power potential");
  }

  if (c.nfunc.family != "power" && c.nfunc.family != "power-log" &&
      c.nfunc.family != "quadratic" && c.nfunc.family != "exponential") {
    err("nfunc.family must be power | power-log | quadratic | exponential");
  }
  if (!(c.nfunc.p > 1.0)) err("nfunc.p must be > 1");

  if (static_cast<int>(c.problem.xi.size()) != c.grid.dim) {
    err("problem.xi must have grid.dim entries");
  }

  const bool needs_eps = c.scenario == Scenario::EpsSweep ||
                         c.scenario == Scenario::Recovery ||
                         c.scenario == Scenario::TwoScaleCheck;
  if (needs_eps) {
    if (c.problem.eps.empty()) err("problem.eps is required for this scenario");
    for (double e : c.problem.eps) {
      const std::string msg = epsilon_admissibility_error(c.grid.domain_n, e);
      if (!msg.empty()) err("problem.eps: " + msg);
    }
    for (std::size_t i = 0; i + 1 < c.problem.eps.size(); ++i) {
      if (!(c.problem.eps[i + 1] < c.problem.eps[i])) {
        err("problem.eps must be strictly decreasing");
        break;
      }
    }
  }

  if (c.scenario == Scenario::FhomTable) {
    const std::size_t d = static_cast<std::size_t>(c.grid.dim);
    if (c.problem.xi_min.size() != d || c.problem.xi_max.size() != d ||
        c.problem.xi_count.size() != d) {
      err("fhom-table needs xi_min, xi_max, xi_count with grid.dim entries each");
    } else {
      for (std::size_t a = 0; a < d; ++a) {
        if (!(c.problem.xi_min[a] < c.problem.xi_max[a])) err("xi_min must be < xi_max");
        if (c.problem.xi_count[a] < 2) err("xi_count entries must be >= 2");
      }
    }
  }

  if (c.problem.delta_schedule != "sqrt" && c.problem.delta_schedule != "linear") {
    err("problem.delta_schedule must be sqrt | linear");
  }
  if (c.problem.twoscale_mode != "synthetic" && c.problem.twoscale_mode != "minimizer-gradients") {
    err("problem.twoscale_mode must be synthetic | minimizer-gradients");
  }
  if (c.scenario == Scenario::TwoScaleCheck && c.grid.dim != 1) {
    err("twoscale-check is defined for grid.dim = 1 (the default battery is 1D)");
  }

  if (!(c.solver.tolerance > 0.0)) err("solver.tol must be positive");
  if (c.solver.max_iterations < 1) err("solver.max_iter must be >= 1");
}

}  // namespace

ParseResult parse_config_text(const std::string& text) {
  ParseResult result;
  RawConfig raw = parse_raw(text, result.errors);

  ExperimentConfig c;
  std::set<std::string> present;
  for (const auto& [key, value] : raw.entries) present.insert(key);

  std::string scenario_str;
  Extractor ex(raw, result.errors);
  ex.string("scenario", scenario_str);
  if (scenario_str.empty()) {
    result.errors.push_back("missing required key 'scenario'");
  } else {
    const auto s = scenario_from_name(scenario_str);
    if (!s) {
      result.errors.push_back(
          "unknown scenario '" + scenario_str +
          "' (expected nfunc-check | cell | fhom-table | eps-sweep | recovery | twoscale-check)");
    } else {
      c.scenario = *s;
    }
  }
  ex.uinteger("seed", c.seed);

  ex.string("nfunc.family", c.nfunc.family);
  ex.number("nfunc.p", c.nfunc.p);
  ex.number("nfunc.scale", c.nfunc.scale);
  ex.number("nfunc.t0", c.nfunc.t0);
  ex.number("nfunc.T", c.nfunc.T);
  ex.number("nfunc.delta2_threshold", c.nfunc.delta2_threshold);

  ex.string("integrand.coefficient", c.integrand.coefficient);
  ex.number("integrand.a0", c.integrand.a0);
  ex.number("integrand.alpha", c.integrand.alpha);
  ex.number("integrand.beta", c.integrand.beta);
  ex.number("integrand.a1", c.integrand.a1);
  ex.number("integrand.a2", c.integrand.a2);
  ex.integer("integrand.axis", c.integrand.axis);
  ex.string("integrand.potential", c.integrand.potential);
  ex.number("integrand.p", c.integrand.p);

  ex.integer("grid.dim", c.grid.dim);
  ex.integer("grid.cell_n", c.grid.cell_n);
  ex.integer("grid.domain_n", c.grid.domain_n);

  ex.number_list("problem.xi", c.problem.xi);
  ex.number_list("problem.eps", c.problem.eps);
  ex.number_list("problem.xi_min", c.problem.xi_min);
  ex.number_list("problem.xi_max", c.problem.xi_max);
  ex.int_list("problem.xi_count", c.problem.xi_count);
  ex.string("problem.delta_schedule", c.problem.delta_schedule);
  ex.string("problem.twoscale_mode", c.problem.twoscale_mode);

  ex.number("solver.tol", c.solver.tolerance);
  ex.linteger("solver.max_iter", c.solver.max_iterations);

  ex.number("check.rel_gap", c.check.rel_gap);
  ex.number("check.lower_slack", c.check.lower_slack);
  ex.number("check.slope_min", c.check.slope_min);
  ex.number("check.defect_rel", c.check.defect_rel);
  ex.number("check.decrease_floor", c.check.decrease_floor);

  ex.boolean("output.csv", c.output.csv);
  ex.boolean("output.svg", c.output.svg);

  ex.report_unknown();

  // Constraint violations are reported alongside any key-level errors so a
  // broken config surfaces everything in one pass.
  validate(c, present, result.errors);
  if (result.errors.empty()) result.config = c;
  return result;
}

ParseResult parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.errors.push_back("cannot open config file '" + path + "'");
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

NFunction make_nfunc(const NFuncSpec& spec) {
  if (spec.family == "power") return NFunction::power(spec.p, spec.scale);
  if (spec.family == "power-log") return NFunction::power_log(spec.p);
  if (spec.family == "quadratic") return NFunction::quadratic();
  if (spec.family == "exponential") return NFunction::exponential();
  throw std::invalid_argument("make_nfunc: unknown family " + spec.family);
}

Integrand make_integrand(const IntegrandSpec& spec, int dim, const NFuncSpec& nfunc) {
  CoefficientField coeff = CoefficientField::constant(1.0);
  if (spec.coefficient == "constant") {
    coeff = CoefficientField::constant(spec.a0);
  } else if (spec.coefficient == "sine") {
    coeff = CoefficientField::sine(spec.alpha, spec.beta);
  } else if (spec.coefficient == "laminate") {
    coeff = CoefficientField::laminate(spec.a1, spec.a2, spec.axis);
  } else if (spec.coefficient == "checkerboard") {
    if (dim != 2) throw std::invalid_argument("checkerboard coefficient requires dim 2");
    coeff = CoefficientField::checkerboard(spec.a1, spec.a2);
  } else {
    throw std::invalid_argument("make_integrand: unknown coefficient " + spec.coefficient);
  }

  Potential pot = Potential::quadratic();
  if (spec.potential == "power") {
    pot = Potential::power(spec.p);
  } else if (spec.potential == "orlicz") {
    pot = Potential::orlicz(make_nfunc(nfunc));
  } else if (spec.potential != "quadratic") {
    throw std::invalid_argument("make_integrand: unknown potential " + spec.potential);
  }
  return Integrand{coeff, pot};
}

std::string ExperimentConfig::echo() const {
  std::ostringstream os;
  os.precision(17);
  os << "scenario = \"" << scenario_name(scenario) << "\"\n";
  os << "seed = " << seed << "\n";
  os << "[nfunc]\n";
  os << "family = \"" << nfunc.family << "\", p = " << nfunc.p << ", scale = " << nfunc.scale
     << ", t0 = " << nfunc.t0 << ", T = " << nfunc.T
     << ", delta2_threshold = " << nfunc.delta2_threshold << "\n";
  os << "[integrand]\n";
  os << "coefficient = \"" << integrand.coefficient << "\", a0 = " << integrand.a0
     << ", alpha = " << integrand.alpha << ", beta = " << integrand.beta
     << ", a1 = " << integrand.a1 << ", a2 = " << integrand.a2 << ", axis = " << integrand.axis
     << "\n";
  os << "potential = \"" << integrand.potential << "\", p = " << integrand.p << "\n";
  os << "[grid]\n";
  os << "dim = " << grid.dim << ", cell_n = " << grid.cell_n
     << ", domain_n = " << grid.domain_n << "\n";
  os << "[problem]\n";
  auto list = [&](const char* key, const auto& v) {
    os << key << " = [";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << "]\n";
  };
  list("xi", problem.xi);
  list("eps", problem.eps);
  list("xi_min", problem.xi_min);
  list("xi_max", problem.xi_max);
  list("xi_count", problem.xi_count);
  os << "delta_schedule = \"" << problem.delta_schedule << "\", twoscale_mode = \""
     << problem.twoscale_mode << "\"\n";
  os << "[solver]\n";
  os << "tol = " << solver.tolerance << ", max_iter = " << solver.max_iterations << "\n";
  os << "[check]\n";
  os << "rel_gap = " << check.rel_gap << ", lower_slack = " << check.lower_slack
     << ", slope_min = " << check.slope_min << ", defect_rel = " << check.defect_rel
     << ", decrease_floor = " << check.decrease_floor << "\n";
  os << "[output]\n";
  os << "csv = " << (output.csv ? "true" : "false")
     << ", svg = " << (output.svg ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace orlhom
