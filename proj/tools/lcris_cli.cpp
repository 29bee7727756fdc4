// lcris_cli: design, trace, sweep and validate for the LC-RIS simulator.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lcris/config.hpp"
#include "lcris/experiments.hpp"
#include "lcris/validate.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::string seeds;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Scenario JSON file (defaults when omitted)");
  cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seeds", opts.seeds, "Comma-separated seeds, ranges as a-b");
}

lcris::ScenarioConfig resolve_config(const CommonOptions& opts) {
  lcris::ScenarioConfig config = opts.config_path.empty() ? lcris::parse_config("") : lcris::load_config(opts.config_path);
  if (!opts.seeds.empty()) config.seeds = lcris::parse_seed_list(opts.seeds);
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LC-RIS transition-aware phase design and TDMA simulation"};
  app.require_subcommand(1);

  CommonOptions design_opts, trace_opts, sweep_opts;
  bool iteration_trace = false;
  std::string ts_grid;

  auto* design = app.add_subcommand("design", "Design proposed and benchmark plans per seed");
  add_common(design, design_opts);
  design->add_flag("--iteration-trace", iteration_trace, "Also write iteration_trace.csv");

  auto* trace = app.add_subcommand("trace", "SNR trace over TDMA cycles for both plans");
  add_common(trace, trace_opts);

  auto* sweep = app.add_subcommand("sweep", "Effective rate versus slot length");
  add_common(sweep, sweep_opts);
  sweep->add_option("--ts-grid", ts_grid, "Slot grid start:stop:step in ms (config value when omitted)");

  auto* validate = app.add_subcommand("validate", "Run the built-in oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? lcris::kExitOk : lcris::kExitConfigError;
  }

  try {
    if (*validate) return lcris::cmd_validate(std::cout);
    if (*design) {
      lcris::DesignOptions options;
      options.iteration_trace = iteration_trace;
      return lcris::cmd_design(resolve_config(design_opts), design_opts.out_dir, std::cout, options);
    }
    if (*trace) return lcris::cmd_trace(resolve_config(trace_opts), trace_opts.out_dir, std::cout);
    if (*sweep) {
      const lcris::ScenarioConfig config = resolve_config(sweep_opts);
      return lcris::cmd_sweep(config, ts_grid.empty() ? config.simulation.ts_grid : ts_grid, sweep_opts.out_dir,
                              std::cout);
    }
  } catch (const lcris::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return lcris::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lcris::kExitConfigError;
  }
  return lcris::kExitOk;
}
