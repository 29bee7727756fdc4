#pragma once

// Experiment drivers behind the command line: per-seed plan design, the
// TDMA SNR trace and the effective-rate sweep, each writing CSV files into an
// output directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lcris/config.hpp"
#include "lcris/phase_optimizer.hpp"
#include "lcris/tdma_sim.hpp"

namespace lcris {

enum ExitCode : int { kExitOk = 0, kExitInfeasible = 1, kExitConfigError = 2, kExitValidationFailure = 3 };

TransitionWeights transition_weights(const ScenarioConfig& config);

/// Optimizer parameters for the config, resolving the automatic multiplier from `init`.
OptimizerParams optimizer_params(const ScenarioConfig& config, const PhasePlan& init,
                                 const TransitionWeights& weights);

struct SeedDesign {
  std::uint64_t seed = 0;
  ChannelSet channels;
  PhasePlan benchmark;
  PhasePlan proposed;
  bool feasible = false;
  std::string note;  // reason when infeasible
};

/// Channels, benchmark and proposed plans for one seed. Infeasible targets are
/// reported through `feasible` and `note` rather than thrown.
SeedDesign design_seed(const ScenarioConfig& config, std::uint64_t seed);

/// Both plans' time to threshold for every user of one TDMA cycle.
SwitchTimes seed_switch_times(const ScenarioConfig& config, const SeedDesign& design);

/// "# config_hash=<hex> seeds=<a,b,c>\n"
std::string output_header(const ScenarioConfig& config);

struct DesignOptions {
  bool iteration_trace = false;  // also write iteration_trace.csv
};

int cmd_design(const ScenarioConfig& config, const std::filesystem::path& out_dir, std::ostream& log,
               const DesignOptions& options = {});
int cmd_trace(const ScenarioConfig& config, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_sweep(const ScenarioConfig& config, const std::string& ts_grid_spec, const std::filesystem::path& out_dir,
              std::ostream& log);

/// Relative tolerance of the large-T_s asymptote check in the sweep summary.
inline constexpr double kAsymptoteTolerance = 0.01;
/// Smallest T_s (s) covered by the asymptote check.
inline constexpr double kAsymptoteFromTs = 0.5;

}  // namespace lcris
