#include "lcris/experiments.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lcris {
namespace {

std::ofstream open_output(const std::filesystem::path& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  std::ofstream os(out_dir / name, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + (out_dir / name).string());
  os << std::setprecision(17);
  return os;
}

std::vector<SeedDesign> design_all(const ScenarioConfig& config, std::ostream& log, bool& any_infeasible) {
  std::vector<SeedDesign> out;
  any_infeasible = false;
  for (std::uint64_t seed : config.seeds) {
    out.push_back(design_seed(config, seed));
    if (!out.back().feasible) {
      any_infeasible = true;
      log << "seed " << seed << ": infeasible (" << out.back().note << ")\n";
    }
  }
  return out;
}

void write_plan_csv(std::ostream& os, const std::vector<SeedDesign>& designs, bool proposed) {
  os << "seed,user,element,phase_rad\n";
  for (const auto& d : designs) {
    if (!d.feasible) continue;
    const PhasePlan& plan = proposed ? d.proposed : d.benchmark;
    for (std::size_t k = 0; k < plan.phases.size(); ++k) {
      for (std::size_t n = 0; n < plan.phases[k].size(); ++n) {
        os << d.seed << ',' << k + 1 << ',' << n << ',' << plan.phases[k][n] << '\n';
      }
    }
  }
}

void write_snr_list(std::ostream& os, const std::vector<double>& snr) {
  for (std::size_t k = 0; k < snr.size(); ++k) os << (k ? " " : "") << linear_to_db(snr[k]);
}

// One plan's SNR over trace_cycles TDMA cycles. Each slot starts from the phases
// reached at the end of the previous slot; the first from the last user's settled configuration.
void write_plan_trace(std::ostream& os, const ScenarioConfig& config, const SeedDesign& d, const PhasePlan& plan,
                      const char* label) {
  const std::size_t num_users = plan.phases.size();
  const auto steps = static_cast<std::size_t>(std::llround(config.simulation.slot / config.simulation.dt));
  PhaseVector state = plan.phases.back();
  std::size_t slot_index = 0;
  for (int cycle = 0; cycle < config.simulation.trace_cycles; ++cycle) {
    for (std::size_t k = 0; k < num_users; ++k, ++slot_index) {
      SwitchRequest req;
      req.from = &state;
      req.to = &plan.phases[k];
      req.user = k;
      req.snr_threshold = config.snr_threshold();
      req.noise_power = config.noise_power();
      req.dt = config.simulation.dt;
      req.horizon = static_cast<double>(steps) * config.simulation.dt;
      req.keep_phases = true;
      SwitchTrace tr = simulate_switch(req, config.lc, d.channels, plan.beamformer);
      const double t0 = static_cast<double>(slot_index * steps) * config.simulation.dt;
      for (std::size_t i = 0; i < steps; ++i) {
        os << t0 + tr.time_grid[i] << ',' << linear_to_db(tr.snr_samples[i]) << ',' << k + 1 << ',' << label
           << ',' << d.seed << '\n';
      }
      state = std::move(tr.phase_samples.back());
    }
  }
}

}  // namespace

TransitionWeights transition_weights(const ScenarioConfig& config) {
  TransitionWeights w = TransitionWeights::from_time_constants(config.lc);
  if (config.optimizer.c_plus > 0.0) w.c_plus = config.optimizer.c_plus;
  if (config.optimizer.c_minus > 0.0) w.c_minus = config.optimizer.c_minus;
  return w;
}

OptimizerParams optimizer_params(const ScenarioConfig& config, const PhasePlan& init,
                                 const TransitionWeights& weights) {
  const std::size_t num_users = config.num_users();
  OptimizerParams p;
  p.alpha = config.optimizer.alpha;
  p.i_max = config.optimizer.i_max;
  p.line_search_points = config.optimizer.line_search_points;
  p.delta.assign(num_users, config.optimizer.delta);
  p.snr_thresholds.assign(num_users, config.snr_threshold());
  if (config.optimizer.lambda_init > 0.0) {
    p.lambda_init.assign(num_users, config.optimizer.lambda_init);
  } else {
    p.lambda_init = default_lambda_init(init, weights, p.snr_thresholds, config.optimizer.delta);
  }
  return p;
}

SeedDesign design_seed(const ScenarioConfig& config, std::uint64_t seed) {
  SeedDesign d;
  d.seed = seed;
  d.channels = build_scenario_channels(config, seed);
  const TransitionWeights weights = transition_weights(config);
  const Beamformer q = los_beamformer(config.bs_array, d.channels.bs_aod, config.tx_power());
  const std::vector<double> thresholds(config.num_users(), config.snr_threshold());
  d.benchmark = anomalous_reflection_plan(d.channels, q, config.noise_power(), config.lc, weights, thresholds);
  try {
    d.proposed = run_algorithm1(d.channels, config.lc, weights, optimizer_params(config, d.benchmark, weights),
                                config.noise_power(), d.benchmark);
  } catch (const InfeasibleTargets&) {
    std::ostringstream msg;
    msg << "SNR target " << config.snr_threshold_db << " dB above the co-phasing bound";
    d.note = msg.str();
    return d;
  }
  d.feasible = d.proposed.feasible && d.benchmark.feasible;
  if (!d.feasible) d.note = "final SNR below target";
  return d;
}

SwitchTimes seed_switch_times(const ScenarioConfig& config, const SeedDesign& design) {
  SwitchTimes t;
  t.proposed = cycle_switch_times(design.proposed.phases, config.lc, design.channels, design.proposed.beamformer,
                                  config.snr_threshold(), config.noise_power(), config.simulation.dt);
  t.benchmark = cycle_switch_times(design.benchmark.phases, config.lc, design.channels,
                                   design.benchmark.beamformer, config.snr_threshold(), config.noise_power(),
                                   config.simulation.dt);
  return t;
}

std::string output_header(const ScenarioConfig& config) {
  std::ostringstream os;
  os << "# config_hash=" << config_hash(config) << " seeds=";
  for (std::size_t i = 0; i < config.seeds.size(); ++i) os << (i ? "," : "") << config.seeds[i];
  os << '\n';
  return os.str();
}

int cmd_design(const ScenarioConfig& config, const std::filesystem::path& out_dir, std::ostream& log,
               const DesignOptions& options) {
  config.validate();
  bool any_infeasible = false;
  const auto designs = design_all(config, log, any_infeasible);
  const std::string header = output_header(config);

  for (bool proposed : {true, false}) {
    auto os = open_output(out_dir, proposed ? "plan_proposed.csv" : "plan_benchmark.csv");
    os << header;
    write_plan_csv(os, designs, proposed);
  }

  auto summary = open_output(out_dir, "design_summary.txt");
  summary << header;
  summary << "snr_threshold_db " << config.snr_threshold_db << '\n';
  summary << "users " << config.num_users() << " elements " << config.ris_array.size() << '\n';
  std::size_t n_feasible = 0, n_lower = 0;
  for (const auto& d : designs) {
    summary << "seed " << d.seed << ": ";
    if (!d.feasible) {
      summary << "infeasible: " << d.note << '\n';
      continue;
    }
    ++n_feasible;
    if (d.proposed.cost < d.benchmark.cost) ++n_lower;
    summary << "feasible cost_proposed " << d.proposed.cost << " cost_benchmark " << d.benchmark.cost
            << " iterations " << d.proposed.iterations_run << " snr_db_proposed ";
    write_snr_list(summary, d.proposed.achieved_snr);
    summary << " snr_db_benchmark ";
    write_snr_list(summary, d.benchmark.achieved_snr);
    summary << '\n';
  }
  summary << "feasible_seeds " << n_feasible << '/' << designs.size() << " proposed_cost_lower " << n_lower << '/'
          << n_feasible << '\n';

  if (options.iteration_trace) {
    auto os = open_output(out_dir, "iteration_trace.csv");
    os << header;
    os << "seed,";
    bool first = true;
    for (const auto& d : designs) {
      if (!d.feasible) continue;
      std::ostringstream body;
      body << std::setprecision(17);
      write_iteration_trace_csv(body, d.proposed);
      std::istringstream lines(body.str());
      std::string line;
      std::getline(lines, line);
      if (first) os << line << '\n';
      first = false;
      while (std::getline(lines, line)) os << d.seed << ',' << line << '\n';
    }
    if (first) os << "iteration,user,accepted,lambda,snr_db,cost\n";
  }

  log << "design: " << n_feasible << '/' << designs.size() << " seeds feasible, wrote " << out_dir.string() << '\n';
  return any_infeasible ? kExitInfeasible : kExitOk;
}

int cmd_trace(const ScenarioConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  config.validate();
  bool any_infeasible = false;
  const auto designs = design_all(config, log, any_infeasible);
  auto os = open_output(out_dir, "snr_trace.csv");
  os << output_header(config);
  os << "t,snr_db,user,plan,seed\n";
  for (const auto& d : designs) {
    if (!d.feasible) continue;
    write_plan_trace(os, config, d, d.proposed, "proposed");
    write_plan_trace(os, config, d, d.benchmark, "benchmark");
  }
  log << "trace: wrote " << (out_dir / "snr_trace.csv").string() << '\n';
  return any_infeasible ? kExitInfeasible : kExitOk;
}

int cmd_sweep(const ScenarioConfig& config, const std::string& ts_grid_spec, const std::filesystem::path& out_dir,
              std::ostream& log) {
  config.validate();
  const std::vector<double> ts = parse_ts_grid(ts_grid_spec).values_s();
  bool any_infeasible = false;
  const auto designs = design_all(config, log, any_infeasible);
  std::vector<SwitchTimes> times;
  std::vector<std::uint64_t> seeds;
  for (const auto& d : designs) {
    if (!d.feasible) continue;
    times.push_back(seed_switch_times(config, d));
    seeds.push_back(d.seed);
  }
  const double thr = config.snr_threshold();
  const RateSweepResult sweep = rate_sweep(times, ts, thr);
  const std::string header = output_header(config);

  auto os = open_output(out_dir, "rate_sweep.csv");
  os << header;
  os << "ts_ms,rate_proposed,rate_benchmark,n_seeds\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    os << ts[i] * 1e3 << ',' << sweep.rate_proposed[i] << ',' << sweep.rate_benchmark[i] << ',' << sweep.n_samples
       << '\n';
  }

  const double asymptote = std::log2(1.0 + thr);
  bool proposed_dominates = true, within = true, covered = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (sweep.rate_proposed[i] < sweep.rate_benchmark[i]) proposed_dominates = false;
    if (ts[i] >= kAsymptoteFromTs - 1e-12) {
      covered = true;
      for (double r : {sweep.rate_proposed[i], sweep.rate_benchmark[i]}) {
        if (std::abs(r - asymptote) > kAsymptoteTolerance * asymptote) within = false;
      }
    }
  }
  auto summary = open_output(out_dir, "sweep_summary.txt");
  summary << header;
  summary << "n_seeds " << sweep.n_samples << '/' << designs.size() << '\n';
  summary << "asymptote_bits " << asymptote << '\n';
  for (std::size_t s = 0; s < times.size(); ++s) {
    summary << "seed " << seeds[s] << " t_c_ms";
    for (const auto* v : {&times[s].proposed, &times[s].benchmark}) {
      summary << (v == &times[s].proposed ? " proposed" : " benchmark");
      for (const auto& tc : *v) {
        summary << ' ';
        if (tc) summary << *tc * 1e3; else summary << "never";
      }
    }
    summary << '\n';
  }
  summary << "proposed_ge_benchmark " << (proposed_dominates ? "yes" : "no") << '\n';
  summary << "asymptote_check ";
  if (!covered) {
    summary << "not_covered (grid stops below " << kAsymptoteFromTs * 1e3 << " ms)\n";
  } else {
    summary << (within ? "pass" : "fail") << " (both rates within " << kAsymptoteTolerance * 100
            << "% of log2(1+snr_thr) for ts >= " << kAsymptoteFromTs * 1e3 << " ms)\n";
  }
  log << "sweep: " << ts.size() << " grid points, wrote " << (out_dir / "rate_sweep.csv").string() << '\n';
  return any_infeasible ? kExitInfeasible : kExitOk;
}

}  // namespace lcris
