#include "lcris/validate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "lcris/config.hpp"
#include "lcris/experiments.hpp"
#include "lcris/phase_optimizer.hpp"
#include "lcris/precoder.hpp"
#include "lcris/rng.hpp"

namespace lcris {
namespace {

constexpr std::uint64_t kValidationSeed = 0x5eed;

PhaseVector random_phases(Rng& rng, std::size_t n, double lo, double hi) {
  PhaseVector p(n, 0.0);
  for (auto& w : p.values) w = rng.uniform(lo, hi);
  return p;
}

// Small random pure-LOS scenario with a blocked direct path.
ScenarioConfig random_los_scenario(Rng& rng) {
  ScenarioConfig c;
  c.bs_array.n_y = 1 + rng.next_u64() % 4;
  c.bs_array.n_z = 1 + rng.next_u64() % 4;
  c.ris_array.n_y = 1 + rng.next_u64() % 4;
  c.ris_array.n_z = 1 + rng.next_u64() % 8;
  c.bs_array.position = {rng.uniform(10.0, 40.0), rng.uniform(-10.0, 10.0), rng.uniform(2.0, 15.0)};
  c.user_directions = {{rng.uniform(-40.0, 40.0), rng.uniform(-70.0, 70.0)}};
  c.user_range_m = rng.uniform(5.0, 40.0);
  c.link_bs_ris.k_factor = kLosKFactor;
  c.link_ris_ue.k_factor = rng.uniform(0.0, 20.0);
  c.blockage = 0.0;
  return c;
}

SuiteResult finish(SuiteResult r, const std::string& unit) {
  r.passed = r.worst <= r.tolerance;
  std::ostringstream os;
  os << std::setprecision(3) << "worst " << unit << ' ' << r.worst << " (tolerance " << r.tolerance << ") over "
     << r.cases << " cases";
  r.detail = os.str();
  return r;
}

}  // namespace

SuiteResult check_quadratic_form(std::size_t instances) {
  SuiteResult r{"quadratic-form equivalence", false, instances, 0.0, 1e-10, ""};
  Rng rng = Rng::stream(kValidationSeed, 1);
  for (std::size_t i = 0; i < instances; ++i) {
    const ScenarioConfig c = random_los_scenario(rng);
    const ChannelSet ch = build_scenario_channels(c, rng.next_u64());
    const Beamformer q = los_beamformer(c.bs_array, ch.bs_aod, c.tx_power());
    const SnrQuadratic form = snr_quadratic_form(ch, 0, q, c.noise_power());
    const PhaseVector w = random_phases(rng, ch.num_elements(), 0.0, kTwoPi);
    const double direct = snr_direct(ch, 0, w, q, c.noise_power());
    r.worst = std::max(r.worst, std::abs(form.snr(w) - direct) / direct);
  }
  return finish(r, "relative error");
}

SuiteResult check_release_times(std::size_t transitions) {
  SuiteResult r{"release-time bisection", false, transitions, 0.0, 1e-9, ""};
  const LcParams lc;
  Rng rng = Rng::stream(kValidationSeed, 2);
  for (std::size_t i = 0; i < transitions; ++i) {
    const PhaseVector from = random_phases(rng, 1, lc.phase_floor(), lc.phase_ceiling());
    const PhaseVector to = random_phases(rng, 1, lc.phase_floor(), lc.phase_ceiling());
    const ElementSwitch e = plan_switch(lc, from, to).elements[0];
    const bool rising = to[0] >= from[0];
    // First time the forced trajectory reaches the hold phase.
    auto reached = [&](double t) {
      const double w = transition_phase(lc, t, from[0], e.forcing_target);
      return rising ? w >= to[0] : w <= to[0];
    };
    double lo = 0.0, hi = 1e-3;
    while (!reached(hi)) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (reached(mid) ? hi : lo) = mid;
    }
    const double oracle = 0.5 * (lo + hi);
    const double err = oracle > 0.0 ? std::abs(e.release_time - oracle) / oracle : std::abs(e.release_time);
    r.worst = std::max(r.worst, err);
  }
  return finish(r, "relative error");
}

SuiteResult check_gradient(std::size_t points) {
  SuiteResult r{"gradient finite differences", false, points, 0.0, 1e-6, ""};
  const LcParams lc;
  const TransitionWeights weights = TransitionWeights::from_time_constants(lc);
  Rng rng = Rng::stream(kValidationSeed, 3);
  for (std::size_t i = 0; i < points; ++i) {
    const std::size_t n = 1 + rng.next_u64() % 16;
    CVector m(n);
    for (auto& v : m) v = rng.complex_normal(1.0);
    const SnrQuadratic form(m, rng.uniform(0.1, 10.0));
    const PhaseVector w = random_phases(rng, n, 0.0, kTwoPi);
    PhaseVector prev = random_phases(rng, n, 0.0, kTwoPi);
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(w[j] - prev[j]) < 1e-3) prev.values[j] = w[j] + 0.1;
    }
    const double lambda = rng.uniform(0.01, 2.0);
    const std::vector<double> grad = lagrangian_gradient(w, prev, lambda, form, weights);

    // Central differences of the per-element Lagrangian with z frozen at w.
    const CVector z = form.z(w);
    constexpr double h = 1e-6;
    double diff = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      auto lj = [&](double x) {
        return element_lagrangian(x, prev[j], lambda, std::abs(z[j]), std::arg(z[j]),
                                  weights.quad_weight(x - prev[j]));
      };
      const double fd = (lj(w[j] + h) - lj(w[j] - h)) / (2.0 * h);
      diff = std::max(diff, std::abs(fd - grad[j]));
      scale = std::max(scale, std::abs(grad[j]));
    }
    r.worst = std::max(r.worst, scale > 0.0 ? diff / scale : diff);
  }
  return finish(r, "relative error");
}

SuiteResult check_benchmark_exhaustive(std::size_t instances) {
  SuiteResult r{"benchmark vs exhaustive search", false, instances, 0.0, 1e-12, ""};
  constexpr int kLevels = 64;
  const LcParams lc;
  Rng rng = Rng::stream(kValidationSeed, 4);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t n = 1 + i % 3;
    CVector m(n);
    for (auto& v : m) v = rng.complex_normal(1.0);
    const SnrQuadratic form(m, 1.0);
    const double bench = form.snr(cophasing_phases(form, lc));
    double best = 0.0;
    std::size_t total = 1;
    for (std::size_t j = 0; j < n; ++j) total *= kLevels;
    PhaseVector w(n, 0.0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rem = idx;
      for (std::size_t j = 0; j < n; ++j) {
        w.values[j] = kTwoPi * static_cast<double>(rem % kLevels) / kLevels;
        rem /= kLevels;
      }
      best = std::max(best, form.snr(w));
    }
    r.worst = std::max(r.worst, (best - bench) / bench);
  }
  return finish(r, "relative excess");
}

std::vector<SuiteResult> run_validation_suites() {
  return {check_quadratic_form(), check_release_times(), check_gradient(), check_benchmark_exhaustive()};
}

int cmd_validate(std::ostream& os) {
  bool ok = true;
  for (const auto& s : run_validation_suites()) {
    os << (s.passed ? "PASS " : "FAIL ") << s.name << ": " << s.detail << '\n';
    ok = ok && s.passed;
  }
  return ok ? kExitOk : kExitValidationFailure;
}

}  // namespace lcris
