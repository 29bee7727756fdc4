#pragma once

// TDMA reconfiguration timeline: SNR of the incoming user while the LC cells
// move from the previous user's configuration to its own, and the effective
// rate that results from the time lost before the SNR target is met.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lcris/common.hpp"
#include "lcris/geometry_channel.hpp"
#include "lcris/lc_dynamics.hpp"
#include "lcris/precoder.hpp"

namespace lcris {

struct SwitchTrace {
  std::vector<double> time_grid;  // s, t_i = i * dt
  std::vector<PhaseVector> phase_samples;
  std::vector<double> snr_samples;  // linear
  std::size_t target_user = 0;
  std::optional<double> t_c;       // first grid time with SNR >= threshold
  double max_release_time = 0.0;
};

struct SwitchRequest {
  const PhaseVector* from = nullptr;
  const PhaseVector* to = nullptr;
  std::size_t user = 0;
  double snr_threshold = 0.0;  // linear
  double noise_power = 0.0;    // W
  double dt = 1e-4;            // s
  double horizon = 0.1;        // s
  bool keep_phases = true;     // store phase_samples
};

/// Samples the over/undershoot switch on a uniform grid and evaluates the
/// target user's SNR through the full channel with beamformer q.
SwitchTrace simulate_switch(const SwitchRequest& request, const LcParams& lc, const ChannelSet& channels,
                            const Beamformer& q);

/// max(t_s - t_c, 0) / t_s * log2(1 + snr_thr), bits/s/Hz.
double effective_rate(double t_c, double t_s, double snr_thr);

/// Time to threshold for every user in one TDMA cycle, switching from the
/// previous user's settled configuration. Entries are empty when the
/// threshold is never met after all cells have settled.
std::vector<std::optional<double>> cycle_switch_times(std::span<const PhaseVector> plan, const LcParams& lc,
                                                      const ChannelSet& channels, const Beamformer& q,
                                                      double snr_threshold, double noise_power, double dt);

struct RateSweepResult {
  std::vector<double> ts_values;  // s
  std::vector<double> rate_proposed;
  std::vector<double> rate_benchmark;
  std::size_t n_samples = 0;  // seeds contributing to each average
};

/// Per seed, the t_c of every user for both plans.
struct SwitchTimes {
  std::vector<std::optional<double>> proposed;
  std::vector<std::optional<double>> benchmark;
};

/// Effective rate averaged over users and seeds for every T_s; a user that
/// never reaches the threshold contributes zero.
RateSweepResult rate_sweep(std::span<const SwitchTimes> per_seed, std::span<const double> ts_values,
                           double snr_thr);

}  // namespace lcris
