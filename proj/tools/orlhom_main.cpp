#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "orlhom/config.hpp"
#include "orlhom/parallel.hpp"
#include "orlhom/run.hpp"

// Experiment harness: every scenario is a subcommand taking a config file,
// so the config is the complete experiment record.
int main(int argc, char** argv) {
  CLI::App app{"orlhom: periodic homogenization of convex integrands with Orlicz growth"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  long long seed_override = -1;
  bool serial = false;

  for (orlhom::Scenario s :
       {orlhom::Scenario::NfuncCheck, orlhom::Scenario::Cell, orlhom::Scenario::FhomTable,
        orlhom::Scenario::EpsSweep, orlhom::Scenario::Recovery,
        orlhom::Scenario::TwoScaleCheck}) {
    CLI::App* sub = app.add_subcommand(orlhom::scenario_name(s), "run this scenario");
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", out_dir, "output directory (default: out)");
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_flag("--serial", serial, "disable the OpenMP kernels");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string sub_name = app.get_subcommands().front()->get_name();

  orlhom::ParseResult parsed = orlhom::parse_config_file(config_path);
  if (!parsed.ok()) {
    std::fprintf(stderr, "config error(s) in %s:\n", config_path.c_str());
    for (const std::string& e : parsed.errors) std::fprintf(stderr, "  - %s\n", e.c_str());
    return 1;
  }
  orlhom::ExperimentConfig cfg = *parsed.config;
  if (orlhom::scenario_name(cfg.scenario) != sub_name) {
    std::fprintf(stderr, "config declares scenario \"%s\" but subcommand is \"%s\"\n",
                 orlhom::scenario_name(cfg.scenario), sub_name.c_str());
    return 1;
  }
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (serial) orlhom::par::set_enabled(false);

  const orlhom::RunReport report = orlhom::run_experiment(cfg, out_dir);
  for (const std::string& line : report.lines) std::printf("%s\n", line.c_str());
  std::printf("%s: %s\n", sub_name.c_str(), report.summary().c_str());
  for (const std::string& f : report.files) std::printf("wrote %s\n", f.c_str());
  return report.exit_code;
}
