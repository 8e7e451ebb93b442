#include "orlhom/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orlhom/cell.hpp"
#include "orlhom/csv.hpp"
#include "orlhom/epsproblem.hpp"
#include "orlhom/norms.hpp"
#include "orlhom/svg.hpp"
#include "orlhom/twoscale.hpp"

namespace orlhom {

namespace {

namespace fs = std::filesystem;

struct Emitter {
  const ExperimentConfig& cfg;
  fs::path dir;
  RunReport& report;

  void csv(const std::string& name, const CsvWriter& w) {
    if (!cfg.output.csv) return;
    const fs::path p = dir / name;
    w.write(p.string());
    report.files.push_back(p.string());
  }
  void text(const std::string& name, const std::string& content) {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    report.files.push_back(p.string());
  }
  void svg(const std::string& name, const SvgPlotSpec& spec,
           const std::vector<SvgSeries>& series) {
    if (!cfg.output.svg) return;
    const fs::path p = dir / name;
    write_line_plot(p.string(), spec, series);
    report.files.push_back(p.string());
  }
};

void check(RunReport& r, bool ok, const std::string& what) {
  std::ostringstream os;
  os << (ok ? "[pass] " : "[FAIL] ") << what;
  r.lines.push_back(os.str());
  if (!ok) {
    r.pass = false;
    r.exit_code = 2;
  }
}

void info(RunReport& r, const std::string& what) { r.lines.push_back("       " + what); }

// Decreasing up to a noise floor: once a sequence sits at solver precision
// the ordering of the residues is not meaningful.
bool decreasing_within_floor(const std::vector<double>& v, double floor) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i + 1] > v[i] + floor) return false;
  }
  return true;
}

Vec xi_from(const ProblemSpec& p) {
  Vec xi{p.xi[0], 0.0};
  if (p.xi.size() > 1) xi[1] = p.xi[1];
  return xi;
}

double schedule_delta(const std::string& kind, double eps) {
  return kind == "linear" ? eps : std::sqrt(eps);
}

void run_nfunc_check(const ExperimentConfig& cfg, Emitter& em, RunReport& r) {
  const NFunction nf = make_nfunc(cfg.nfunc);
  info(r, "N-function: " + nf.label());

  const NFunctionDiagnostics diag = diagnose(nf);
  check(r, diag.zero_at_origin, "B(0) = 0");
  check(r, diag.worst_convexity_slack >= -1e-10, "midpoint convexity on sampled pairs");
  check(r, diag.sublinear_at_zero, "B(t)/t decreasing toward 0");
  check(r, diag.ratio_at_large_t > 1.0, "B(t)/t large at t = 1e6");
  check(r, diag.worst_density_consistency <= 1e-8, "B(t) = int_0^t b within 1e-8 relative");

  CsvWriter w({"check", "t", "lhs", "mid", "rhs", "slack", "pass"});
  const ConjugatePair pair = ConjugatePair::numeric(nf);

  bool lemma_ok = true, young_ok = true;
  for (int i = 0; i < 100; ++i) {
    const double t = std::pow(10.0, -2.0 + 4.0 * i / 99.0);
    const Lemma21Triple tr = lemma21_check(pair, t);
    const double slack_scale = 1e-8 * tr.primal_at_double;
    const bool ok = tr.dual_at_density <= tr.t_times_density + slack_scale &&
                    tr.t_times_density <= tr.primal_at_double + slack_scale;
    lemma_ok = lemma_ok && ok;
    w.cell(std::string("lemma21")).cell(t).cell(tr.dual_at_density).cell(tr.t_times_density)
        .cell(tr.primal_at_double)
        .cell(std::min(tr.t_times_density - tr.dual_at_density,
                       tr.primal_at_double - tr.t_times_density))
        .cell(std::string(ok ? "1" : "0"));
    w.end_row();

    const double s = t;
    const double tt = nf.density(s);
    const double gap = s * tt - nf(s) - conjugate(nf, tt);
    const bool yok = std::abs(gap) <= 1e-8 * (1.0 + std::abs(s * tt));
    young_ok = young_ok && yok;
    w.cell(std::string("young-equality")).cell(s).cell(s * tt).cell(nf(s) + conjugate(nf, tt))
        .cell(0.0).cell(gap).cell(std::string(yok ? "1" : "0"));
    w.end_row();
  }
  check(r, lemma_ok, "conjugate chain B~(b(t)) <= t b(t) <= B(2t) at 100 points");
  check(r, young_ok, "Fenchel-Young equality at t = b(s)");

  const double alpha = delta2_estimate(nf, cfg.nfunc.t0, cfg.nfunc.T);
  w.cell(std::string("delta2")).cell(cfg.nfunc.t0).cell(alpha).cell(0.0)
      .cell(cfg.nfunc.delta2_threshold).cell(cfg.nfunc.delta2_threshold - alpha)
      .cell(std::string(alpha <= cfg.nfunc.delta2_threshold ? "1" : "0"));
  w.end_row();
  {
    std::ostringstream os;
    os << "doubling estimate sup B(2t)/B(t) = " << alpha << " on [" << cfg.nfunc.t0 << ", "
       << cfg.nfunc.T << "]";
    info(r, os.str());
  }
  check(r, alpha <= cfg.nfunc.delta2_threshold,
        "doubling condition within threshold " + format_double(cfg.nfunc.delta2_threshold));

  em.csv("nfunc_check.csv", w);
}

void run_cell(const ExperimentConfig& cfg, Emitter& em, RunReport& r) {
  const Integrand f = make_integrand(cfg.integrand, cfg.grid.dim, cfg.nfunc);
  info(r, "integrand: " + f.describe());
  const PeriodicGrid grid(cfg.grid.dim, cfg.grid.cell_n, GridRole::Cell);
  const CellProblem problem(f, grid, xi_from(cfg.problem), cfg.solver);
  const CellSolution sol = solve_cell(problem);

  CsvWriter w({"value", "iterations", "residual", "converged"});
  w.cell(sol.value).cell(sol.iterations).cell(sol.gradient_residual)
      .cell(std::string(sol.converged ? "1" : "0"));
  w.end_row();
  em.csv("cell.csv", w);
  em.text("corrector.csv", field_to_csv(sol.corrector));

  {
    std::ostringstream os;
    os << "f_hom(xi) = " << sol.value << " after " << sol.iterations << " iterations";
    info(r, os.str());
  }
  check(r, sol.converged, "cell solve converged");
  check(r, std::abs(integrate(sol.corrector)) <= 1e-12, "corrector has zero mean");

  const ConvexityReport conv = check_convexity(f, cfg.grid.dim, 200, cfg.seed);
  check(r, conv.pass(), "integrand midpoint convexity on seeded samples");
}

void run_fhom_table(const ExperimentConfig& cfg, Emitter& em, RunReport& r) {
  const Integrand f = make_integrand(cfg.integrand, cfg.grid.dim, cfg.nfunc);
  info(r, "integrand: " + f.describe());
  const PeriodicGrid grid(cfg.grid.dim, cfg.grid.cell_n, GridRole::Cell);

  XiGrid xg;
  xg.dim = cfg.grid.dim;
  for (int a = 0; a < cfg.grid.dim; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    xg.min[ai] = cfg.problem.xi_min[ai];
    xg.max[ai] = cfg.problem.xi_max[ai];
    xg.count[ai] = cfg.problem.xi_count[ai];
  }
  const HomogenizedDensity table = tabulate_fhom(f, grid, xg, cfg.solver);

  std::vector<std::string> cols;
  cols.push_back("xi0");
  if (cfg.grid.dim == 2) cols.push_back("xi1");
  for (const char* c : {"value", "iterations", "residual", "converged"}) cols.push_back(c);
  CsvWriter w(cols);
  for (std::size_t k = 0; k < table.values.size(); ++k) {
    const Vec xi = xg.node(k);
    w.cell(xi[0]);
    if (cfg.grid.dim == 2) w.cell(xi[1]);
    w.cell(table.values[k]).cell(table.stats[k].iterations)
        .cell(table.stats[k].gradient_residual)
        .cell(std::string(table.stats[k].converged ? "1" : "0"));
    w.end_row();
  }
  em.csv("fhom_table.csv", w);

  check(r, table.complete, "all xi nodes converged (table complete)");
  if (table.complete) {
    const TableConvexityReport conv = fhom_convexity_check(table);
    std::ostringstream os;
    os << "worst midpoint convexity slack " << conv.worst_slack;
    info(r, os.str());
    check(r, conv.pass(-10.0 * cfg.solver.tolerance), "table midpoint convexity");
  }

  if (cfg.grid.dim == 1) {
    SvgSeries s{"f_hom", {}, {}};
    for (std::size_t k = 0; k < table.values.size(); ++k) {
      s.x.push_back(xg.node(k)[0]);
      s.y.push_back(table.values[k]);
    }
    em.svg("fhom_table.svg", {"homogenized density", "xi", "f_hom(xi)"}, {s});
  }
}

void run_eps_sweep(const ExperimentConfig& cfg, Emitter& em, RunReport& r) {
  const Integrand f = make_integrand(cfg.integrand, cfg.grid.dim, cfg.nfunc);
  info(r, "integrand: " + f.describe());
  const Vec xi = xi_from(cfg.problem);

  const PeriodicGrid cell_grid(cfg.grid.dim, cfg.grid.cell_n, GridRole::Cell);
  const CellSolution hom = solve_cell(CellProblem(f, cell_grid, xi, cfg.solver));
  check(r, hom.converged, "cell problem converged (homogenized reference)");
  const double e_hom = hom.value;
  {
    std::ostringstream os;
    os << "f_hom(xi) = " << e_hom;
    info(r, os.str());
  }

  const PeriodicGrid domain(cfg.grid.dim, cfg.grid.domain_n, GridRole::Domain);
  CsvWriter w({"eps", "E_eps", "E_hom", "rel_gap", "iterations", "converged"});
  std::vector<double> gaps, energies;
  bool all_converged = true;
  bool lower_ok = true;
  for (double eps : cfg.problem.eps) {
    const OscillatingProblem p(f, domain, eps, xi, cfg.solver);
    const EpsSolution sol = solve_eps(p, two_scale_ansatz(domain, xi, hom.corrector, eps));
    const double gap = std::abs(sol.energy - e_hom) / std::max(std::abs(e_hom), 1e-300);
    w.cell(eps).cell(sol.energy).cell(e_hom).cell(gap).cell(sol.iterations)
        .cell(std::string(sol.converged ? "1" : "0"));
    w.end_row();
    gaps.push_back(gap);
    energies.push_back(sol.energy);
    if (!sol.converged) {
      all_converged = false;
      std::ostringstream os;
      os << "solver did not converge at eps = " << eps;
      info(r, os.str());
    }
    if (sol.energy < e_hom - cfg.check.lower_slack) {
      lower_ok = false;
      std::ostringstream os;
      os << "lower bound violated at eps = " << eps << ": E_eps = " << sol.energy;
      info(r, os.str());
    }
  }
  em.csv("eps_sweep.csv", w);
  em.svg("eps_sweep.svg", {"energy convergence", "eps", "energy", true, false},
         {{"E_eps", cfg.problem.eps, energies},
          {"E_hom", cfg.problem.eps, std::vector<double>(cfg.problem.eps.size(), e_hom)}});

  check(r, all_converged, "all oscillating solves converged");
  check(r, lower_ok,
        "lower bound E_eps >= E_hom - " + format_double(cfg.check.lower_slack));
  check(r, decreasing_within_floor(gaps, cfg.check.decrease_floor),
        "relative gap decreasing along the eps ladder");
  check(r, gaps.back() <= cfg.check.rel_gap,
        "terminal relative gap <= " + format_double(cfg.check.rel_gap));
}

void run_recovery(const ExperimentConfig& cfg, Emitter& em, RunReport& r) {
  const Integrand f = make_integrand(cfg.integrand, cfg.grid.dim, cfg.nfunc);
  info(r, "integrand: " + f.describe());
  const Vec xi = xi_from(cfg.problem);

  const PeriodicGrid cell_grid(cfg.grid.dim, cfg.grid.cell_n, GridRole::Cell);
  const CellSolution corr = solve_cell(CellProblem(f, cell_grid, xi, cfg.solver));
  check(r, corr.converged, "cell corrector converged");

  const PeriodicGrid domain(cfg.grid.dim, cfg.grid.domain_n, GridRole::Domain);
  const RecoveryContext ctx{f, make_nfunc(cfg.nfunc), domain, cell_grid};
  const SmoothFn u = SmoothFn::affine(xi, cfg.grid.dim);
  const SeparableCorrector u1{SmoothFn::constant(1.0), periodic_interpolant(corr.corrector)};

  CsvWriter w({"eps", "delta", "sobolev_distance", "norm_defect_plus", "norm_defect_minus",
               "c_delta_eps", "c_delta_eps_minus", "energy", "target"});
  std::vector<double> c_plus, energies;
  double target = 0.0;
  for (double eps : cfg.problem.eps) {
    const double delta = schedule_delta(cfg.problem.delta_schedule, eps);
    const RecoveryMetrics m = recovery_metrics(ctx, u, u1, eps, delta);
    w.cell(m.eps).cell(m.delta).cell(m.sobolev_distance).cell(m.norm_defect_plus)
        .cell(m.norm_defect_minus).cell(m.c_delta_eps).cell(m.c_delta_eps_minus)
        .cell(m.energy_of_recovery).cell(m.target_two_scale_energy);
    w.end_row();
    c_plus.push_back(m.c_delta_eps);
    energies.push_back(m.energy_of_recovery);
    target = m.target_two_scale_energy;
  }
  em.csv("recovery.csv", w);
  em.svg("recovery.svg", {"recovery metric", "eps", "c_delta_eps", true, false},
         {{"c_delta_eps", cfg.problem.eps, c_plus}});

  check(r, decreasing_within_floor(c_plus, cfg.check.decrease_floor),
        "c_delta_eps decreasing along the schedule");
  const double rel =
      std::abs(energies.back() - target) / std::max(std::abs(target), 1e-300);
  {
    std::ostringstream os;
    os << "recovery energy " << energies.back() << " vs two-scale target " << target
       << " (rel " << rel << ")";
    info(r, os.str());
  }
  check(r, rel <= cfg.check.defect_rel,
        "recovery energy matches the two-scale target within " +
            format_double(cfg.check.defect_rel));
}

void run_twoscale(const ExperimentConfig& cfg, Emitter& em, RunReport& r) {
  const PeriodicGrid domain(1, cfg.grid.domain_n, GridRole::Domain);
  const PeriodicGrid cell_grid(1, cfg.grid.cell_n, GridRole::Cell);
  const std::vector<TestPair> battery = default_battery_1d();
  TwoScaleOptions opts;
  opts.rel_tol = cfg.check.defect_rel;
  opts.slope_min = cfg.check.slope_min;

  auto emit = [&](const TwoScaleReport& report, const std::string& prefix) {
    CsvWriter w({"test", "eps", "pairing", "target", "defect"});
    for (const DefectSeries& s : report.tests) {
      for (std::size_t i = 0; i < s.eps.size(); ++i) {
        w.cell(s.test_id).cell(s.eps[i]).cell(s.pairing_value[i]).cell(s.target_value)
            .cell(s.defect[i]);
        w.end_row();
      }
    }
    em.csv(prefix + ".csv", w);
    CsvWriter ws({"test", "slope", "terminal_defect", "tolerance", "pass"});
    std::vector<SvgSeries> series;
    for (const DefectSeries& s : report.tests) {
      ws.cell(s.test_id).cell(s.fitted_slope).cell(s.defect.back()).cell(s.tolerance)
          .cell(std::string(s.pass ? "1" : "0"));
      ws.end_row();
      series.push_back({s.test_id, s.eps, s.defect});
    }
    em.csv(prefix + "_summary.csv", ws);
    em.svg(prefix + ".svg", {"two-scale defects", "eps", "defect", true, true}, series);
  };

  if (cfg.problem.twoscale_mode == "synthetic") {
    // u_eps(x) = sin(2 pi x / eps) against its two-scale limit sin(2 pi y).
    std::vector<std::pair<double, ScalarField>> seq;
    for (double eps : cfg.problem.eps) {
      const int k = static_cast<int>(std::lround(1.0 / eps));
      ScalarField u(domain);
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = std::sin(2.0 * M_PI * fast_variable(domain, i, k)[0]);
      }
      seq.emplace_back(eps, std::move(u));
    }
    TwoScaleLimit limit;
    limit.u1.push_back(SeparableCorrector{
        SmoothFn::constant(1.0),
        SmoothFn{[](Point y) { return std::sin(2.0 * M_PI * y[0]); },
                 [](Point y) { return Vec{2.0 * M_PI * std::cos(2.0 * M_PI * y[0]), 0.0}; }}});
    const TwoScaleReport report = check_weak_2s(seq, limit, battery, cell_grid, opts);
    emit(report, "twoscale");
    for (const DefectSeries& s : report.tests) {
      std::ostringstream os;
      os << s.test_id << ": slope " << s.fitted_slope << ", terminal defect "
         << s.defect.back();
      info(r, os.str());
    }
    check(r, report.pass, "weak two-scale convergence against the oscillating battery");
    return;
  }

  // Minimizer-gradient mode: the gradient components of the eps-minimizers
  // against the corrector decomposition.
  const Integrand f = make_integrand(cfg.integrand, cfg.grid.dim, cfg.nfunc);
  info(r, "integrand: " + f.describe());
  const Vec xi = xi_from(cfg.problem);
  const CellSolution corr = solve_cell(CellProblem(f, cell_grid, xi, cfg.solver));
  check(r, corr.converged, "cell corrector converged");

  std::vector<std::pair<double, EpsSolution>> sols;
  for (double eps : cfg.problem.eps) {
    const OscillatingProblem p(f, domain, eps, xi, cfg.solver);
    EpsSolution sol = solve_eps(p, two_scale_ansatz(domain, xi, corr.corrector, eps));
    if (!sol.converged) {
      std::ostringstream os;
      os << "solver did not converge at eps = " << eps;
      info(r, os.str());
      check(r, false, "all oscillating solves converged");
      return;
    }
    sols.emplace_back(eps, std::move(sol));
  }
  const Prop1Report report =
      check_proposition1(sols, xi, corr.corrector, battery, opts);
  for (std::size_t a = 0; a < report.per_component.size(); ++a) {
    emit(report.per_component[a], "twoscale_grad" + std::to_string(a));
  }
  check(r, report.pass, "gradient two-scale decomposition against the corrector");
}

}  // namespace

std::string RunReport::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << " (exit " << exit_code << ", "
     << format_double(wall_seconds) << " s)";
  return os.str();
}

RunReport run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  RunReport report;
  const auto start = std::chrono::steady_clock::now();
  Emitter em{cfg, fs::path(out_dir), report};
  try {
    fs::create_directories(em.dir);
    switch (cfg.scenario) {
      case Scenario::NfuncCheck: run_nfunc_check(cfg, em, report); break;
      case Scenario::Cell: run_cell(cfg, em, report); break;
      case Scenario::FhomTable: run_fhom_table(cfg, em, report); break;
      case Scenario::EpsSweep: run_eps_sweep(cfg, em, report); break;
      case Scenario::Recovery: run_recovery(cfg, em, report); break;
      case Scenario::TwoScaleCheck: run_twoscale(cfg, em, report); break;
    }
  } catch (const std::exception& e) {
    report.pass = false;
    report.exit_code = 1;
    report.lines.push_back(std::string("[ERROR] ") + e.what());
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream rp;
  rp << "# experiment report\n";
  rp << "result: " << report.summary() << "\n\n";
  rp << "## configuration\n" << cfg.echo() << "\n## results\n";
  for (const std::string& line : report.lines) rp << line << "\n";
  try {
    em.text("report.txt", rp.str());
  } catch (const std::exception& e) {
    report.exit_code = 1;
    report.pass = false;
    report.lines.push_back(std::string("[ERROR] ") + e.what());
  }
  return report;
}

}  // namespace orlhom
