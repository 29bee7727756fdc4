#include "lcris/tdma_sim.hpp"

#include <cmath>

namespace lcris {

SwitchTrace simulate_switch(const SwitchRequest& request, const LcParams& lc, const ChannelSet& channels,
                            const Beamformer& q) {
  if (request.from == nullptr || request.to == nullptr) throw InvalidParameter("switch endpoints missing");
  if (!(request.dt > 0.0)) throw InvalidParameter("dt must be positive");
  if (!(request.horizon >= request.dt)) throw InvalidParameter("horizon must be at least dt");

  const TransitionSchedule schedule = plan_switch(lc, *request.from, *request.to);
  const auto steps = static_cast<std::size_t>(std::floor(request.horizon / request.dt + 1e-9));

  SwitchTrace trace;
  trace.target_user = request.user;
  trace.max_release_time = schedule.max_release_time();
  trace.time_grid.reserve(steps + 1);
  trace.snr_samples.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * request.dt;
    PhaseVector phases = switched_phase_at(schedule, lc, t);
    const double snr = snr_direct(channels, request.user, phases, q, request.noise_power);
    trace.time_grid.push_back(t);
    trace.snr_samples.push_back(snr);
    if (!trace.t_c && snr >= request.snr_threshold) trace.t_c = t;
    if (request.keep_phases) trace.phase_samples.push_back(std::move(phases));
  }
  return trace;
}

double effective_rate(double t_c, double t_s, double snr_thr) {
  if (!(t_s > 0.0)) throw InvalidParameter("slot length must be positive");
  if (!(t_c >= 0.0)) throw InvalidParameter("time to threshold must be nonnegative");
  return std::max(t_s - t_c, 0.0) / t_s * std::log2(1.0 + snr_thr);
}

std::vector<std::optional<double>> cycle_switch_times(std::span<const PhaseVector> plan, const LcParams& lc,
                                                      const ChannelSet& channels, const Beamformer& q,
                                                      double snr_threshold, double noise_power, double dt) {
  const std::size_t num_users = plan.size();
  std::vector<std::optional<double>> out;
  out.reserve(num_users);
  for (std::size_t k = 0; k < num_users; ++k) {
    const PhaseVector& from = plan[(k + num_users - 1) % num_users];
    const PhaseVector& to = plan[k];
    const double settle = plan_switch(lc, from, to).max_release_time();
    SwitchRequest req;
    req.from = &from;
    req.to = &to;
    req.user = k;
    req.snr_threshold = snr_threshold;
    req.noise_power = noise_power;
    req.dt = dt;
    req.horizon = (std::ceil(settle / dt) + 1.0) * dt;
    req.keep_phases = false;
    out.push_back(simulate_switch(req, lc, channels, q).t_c);
  }
  return out;
}

RateSweepResult rate_sweep(std::span<const SwitchTimes> per_seed, std::span<const double> ts_values,
                           double snr_thr) {
  RateSweepResult result;
  result.n_samples = per_seed.size();
  result.ts_values.assign(ts_values.begin(), ts_values.end());
  auto average = [&](double ts, auto member) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const SwitchTimes& s : per_seed) {
      for (const auto& tc : s.*member) {
        if (tc) sum += effective_rate(*tc, ts, snr_thr);
        ++count;
      }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
  };
  for (double ts : ts_values) {
    result.rate_proposed.push_back(average(ts, &SwitchTimes::proposed));
    result.rate_benchmark.push_back(average(ts, &SwitchTimes::benchmark));
  }
  return result;
}

}  // namespace lcris
