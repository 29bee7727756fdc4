#pragma once

// Scenario configuration: geometry, radio budget, LC constants, optimizer and
// simulation settings. Stored as JSON (comments allowed); every key is
// optional and unknown keys are rejected. See docs/config.md for the schema.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lcris/geometry_channel.hpp"
#include "lcris/lc_dynamics.hpp"

namespace lcris {

struct OptimizerSettings {
  double alpha = 0.985;
  int i_max = 100;
  double delta = kPi / 8.0;
  double lambda_init = 0.0;  // 0 selects the instance-scaled default
  int line_search_points = 64;
  double c_plus = 0.0;       // 0 selects sqrt(tau_plus / tau_minus)
  double c_minus = 0.0;      // 0 selects 1

  bool operator==(const OptimizerSettings&) const = default;
};

struct SimulationSettings {
  double dt = 1e-4;              // s
  double slot = 60e-3;           // s, trace slot length
  int trace_cycles = 2;          // full user cycles in the trace
  std::string ts_grid = "5:1000:5";  // ms, start:stop:step

  bool operator==(const SimulationSettings&) const = default;
};

struct DirectionDeg {
  double elevation = 0.0;
  double azimuth = 0.0;

  AngleTuple radians() const { return {elevation * kPi / 180.0, azimuth * kPi / 180.0}; }
  bool operator==(const DirectionDeg&) const = default;
};

struct ScenarioConfig {
  double carrier_freq = 28e9;
  double bandwidth = 2e7;
  double noise_psd_dbm_hz = -174.0;
  double noise_figure_db = 6.0;
  double tx_power_dbm = 47.0;

  ArraySpec bs_array{4, 4, 0.5, {30.0, 0.0, 10.0}, {0.0, 1.0, 0.0}};
  ArraySpec ris_array{16, 16, 0.5, {0.0, 50.0, 5.0}, {1.0, 0.0, 0.0}};

  // Directions of the users as seen from the RIS, in its local frame (degrees).
  std::vector<DirectionDeg> user_directions{{-10.0, 33.0}, {-10.0, -33.0}};
  double user_range_m = 20.0;  // assumed; not given with the user directions

  LinkParams link_bs_ue{0.0, 3.5, -61.0, 1.0};
  LinkParams link_bs_ris{10.0, 2.0, -61.0, 1.0};
  LinkParams link_ris_ue{10.0, 2.0, -61.0, 1.0};
  double blockage = 0.0;  // amplitude factor on the direct BS-user channel

  double snr_threshold_db = 10.0;
  LcParams lc;
  OptimizerSettings optimizer;
  SimulationSettings simulation;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

  std::size_t num_users() const { return user_directions.size(); }
  double noise_power() const;     // W
  double tx_power() const;        // W
  double snr_threshold() const;   // linear
  std::vector<AngleTuple> user_angles() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Full normalized JSON of a config, every field present.
std::string dump_config(const ScenarioConfig& config);

/// FNV-1a 64 over dump_config, rendered as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

struct TsGrid {
  double start_ms;
  double stop_ms;
  double step_ms;
  std::vector<double> values_s() const;
};

TsGrid parse_ts_grid(const std::string& spec);
std::vector<std::uint64_t> parse_seed_list(const std::string& spec);

}  // namespace lcris
