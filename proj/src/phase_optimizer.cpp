#include "lcris/phase_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <string>

#include "lcris/kernels.hpp"

namespace lcris {
namespace {

constexpr double kRootTolerance = 1e-10;  // rad, bisection stop width

double wrap_2pi(double x) {
  double w = std::fmod(x, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

double wrap_pi(double x) {
  double w = wrap_2pi(x + kPi) - kPi;
  if (w <= -kPi) w += kTwoPi;
  return w;
}

std::size_t prev_index(std::size_t k, std::size_t num_users) { return (k + num_users - 1) % num_users; }

struct Candidate {
  double omega;
  double value;
};

// Lower Lagrangian wins; near-ties go to the smaller transition, then the lower phase.
bool better(const Candidate& a, const Candidate& b, double prev) {
  const double tol = 1e-13 * std::max(1.0, std::max(std::abs(a.value), std::abs(b.value)));
  if (a.value < b.value - tol) return true;
  if (b.value < a.value - tol) return false;
  const double da = std::abs(a.omega - prev);
  const double db = std::abs(b.omega - prev);
  if (da != db) return da < db;
  return a.omega < b.omega;
}

}  // namespace

void TransitionWeights::validate() const {
  if (!(c_plus > 0.0) || !(c_minus > 0.0)) throw InvalidParameter("transition weights must be positive");
  if (!(c_minus > c_plus)) throw InvalidParameter("c_minus must exceed c_plus");
}

TransitionWeights TransitionWeights::from_time_constants(const LcParams& lc) {
  return {std::sqrt(lc.tau_plus / lc.tau_minus), 1.0};
}

void OptimizerParams::validate(std::size_t num_users) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie in (0, 1)");
  if (i_max < 1) throw InvalidParameter("i_max must be at least 1");
  if (line_search_points < 2) throw InvalidParameter("line_search_points must be at least 2");
  if (delta.size() != num_users || lambda_init.size() != num_users || snr_thresholds.size() != num_users) {
    throw ShapeError("optimizer parameters need one delta, lambda and threshold per user");
  }
  for (std::size_t k = 0; k < num_users; ++k) {
    if (!(delta[k] > 0.0 && delta[k] < kPi)) throw InvalidParameter("delta must lie in (0, pi)");
    if (!(lambda_init[k] > 0.0)) throw InvalidParameter("lambda_init must be positive");
    if (!(snr_thresholds[k] >= 0.0)) throw InvalidParameter("SNR thresholds must be nonnegative");
  }
}

std::vector<double> cyclic_delta(std::span<const PhaseVector> phases, std::size_t k) {
  if (k >= phases.size()) throw ShapeError("user index out of range");
  const PhaseVector& cur = phases[k];
  const PhaseVector& prev = phases[prev_index(k, phases.size())];
  if (cur.size() != prev.size()) throw ShapeError("configurations differ in length");
  std::vector<double> out(cur.size());
  for (std::size_t n = 0; n < cur.size(); ++n) out[n] = cur[n] - prev[n];
  return out;
}

double weighted_cost(std::span<const PhaseVector> phases, const TransitionWeights& weights) {
  double total = 0.0;
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const PhaseVector& prev = phases[prev_index(k, phases.size())];
    total += simd::weighted_sq_diff(phases[k].view(), prev.view(), weights.c_plus, weights.c_minus);
  }
  return total;
}

double element_lagrangian(double omega, double omega_prev, double lambda, double r, double phi,
                          double quad_weight) {
  const double d = omega - omega_prev;
  return quad_weight * d * d - 2.0 * lambda * r * std::cos(omega - phi);
}

double user_lagrangian(const PhaseVector& phases, const PhaseVector& prev, double lambda,
                       const SnrQuadratic& form, double threshold, const TransitionWeights& weights) {
  const double cost = simd::weighted_sq_diff(phases.view(), prev.view(), weights.c_plus, weights.c_minus);
  return cost + lambda * (threshold - form.snr(phases));
}

std::vector<double> lagrangian_gradient(const PhaseVector& phases, const PhaseVector& prev, double lambda,
                                        const SnrQuadratic& form, const TransitionWeights& weights) {
  if (phases.size() != prev.size()) throw ShapeError("configurations differ in length");
  const CVector z = form.z(phases);
  std::vector<double> grad(phases.size());
  for (std::size_t n = 0; n < phases.size(); ++n) {
    const double d = phases[n] - prev[n];
    const double r = std::abs(z[n]);
    const double phi = std::arg(z[n]);
    grad[n] = 2.0 * weights.quad_weight(d) * d - 2.0 * lambda * r * std::sin(phi - phases[n]);
  }
  return grad;
}

double minimize_element(const ElementProblem& p, const TransitionWeights& weights, double delta,
                        const LcParams& lc, int grid_points) {
  double lo = std::max(p.center - delta, lc.phase_floor());
  double hi = std::min(p.center + delta, lc.phase_ceiling());
  if (lo > hi) lo = hi = lc.clamp(p.center);

  auto value = [&](double w) {
    return element_lagrangian(w, p.prev, p.lambda, p.r, p.phi, weights.quad_weight(w - p.prev));
  };
  // dL/dw; continuous at w = prev because the quadratic's slope vanishes there.
  auto slope = [&](double w) {
    const double d = w - p.prev;
    return 2.0 * weights.quad_weight(d) * d + 2.0 * p.lambda * p.r * std::sin(w - p.phi);
  };

  Candidate best{lo, value(lo)};
  auto offer = [&](double w) {
    const Candidate c{w, value(w)};
    if (better(c, best, p.prev)) best = c;
  };
  offer(hi);
  if (p.prev > lo && p.prev < hi) offer(p.prev);
  if (hi <= lo) return best.omega;

  const int g = std::max(grid_points, 2);
  std::vector<double> xs(g), gs(g), ls(g);
  for (int i = 0; i < g; ++i) {
    xs[i] = i + 1 == g ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(g - 1);
    gs[i] = slope(xs[i]);
    ls[i] = value(xs[i]);
    offer(xs[i]);
  }

  std::vector<bool> bracketed(g - 1, false);
  for (int i = 0; i + 1 < g; ++i) {
    if (gs[i] == 0.0 || gs[i + 1] == 0.0 || (gs[i] < 0.0) == (gs[i + 1] < 0.0)) continue;
    bracketed[i] = true;
    double a = xs[i], b = xs[i + 1];
    double ga = gs[i];
    while (b - a > kRootTolerance) {
      const double mid = 0.5 * (a + b);
      const double gm = slope(mid);
      if (gm == 0.0) {
        a = b = mid;
        break;
      }
      if ((gm < 0.0) == (ga < 0.0)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
      }
    }
    offer(0.5 * (a + b));
  }

  // A pair of stationary points inside one grid cell leaves no sign change;
  // refine unbracketed discrete minima with a golden-section search.
  for (int i = 1; i + 1 < g; ++i) {
    if (ls[i] > ls[i - 1] || ls[i] > ls[i + 1] || bracketed[i - 1] || bracketed[i]) continue;
    constexpr double kInvPhi = 0.6180339887498949;
    double a = xs[i - 1], b = xs[i + 1];
    double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
    double fc = value(c), fd = value(d);
    while (b - a > kRootTolerance) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = value(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = value(d);
      }
    }
    offer(0.5 * (a + b));
  }
  return best.omega;
}

PhaseVector line_search_step(const PhaseVector& current, const PhaseVector& prev, const SnrQuadratic& form,
                             double lambda, double delta, const TransitionWeights& weights,
                             const LcParams& lc, int grid_points) {
  if (current.size() != prev.size() || current.size() != form.size()) {
    throw ShapeError("line search operands differ in length");
  }
  const CVector z = form.z(current);
  PhaseVector out(current.size(), 0.0);
  for (std::size_t n = 0; n < current.size(); ++n) {
    const ElementProblem p{current[n], prev[n], lambda, std::abs(z[n]), std::arg(z[n])};
    out[n] = minimize_element(p, weights, delta, lc, grid_points);
  }
  return out;
}

PhaseVector cophasing_phases(const SnrQuadratic& form, const LcParams& lc) {
  const auto m = form.m();
  const cplx direct = form.direct();
  const double ref = direct == cplx{} ? 0.0 : std::arg(direct);
  std::vector<double> theta(m.size());
  for (std::size_t n = 0; n < m.size(); ++n) theta[n] = wrap_2pi(ref - std::arg(m[n]));

  const double floor = lc.phase_floor();
  const double ceil = std::min(lc.phase_ceiling(), kTwoPi - lc.phase_clamp_eps);
  const bool cyclic = lc.omega_max >= kTwoPi && direct == cplx{};
  if (cyclic) {
    constexpr double kSlack = 1e-12;
    auto fits = [&](double shift) {
      return std::all_of(theta.begin(), theta.end(), [&](double t) {
        const double w = wrap_2pi(t + shift);
        return w >= floor - kSlack && w <= ceil + kSlack;
      });
    };
    double best_shift = 0.0;
    bool found = fits(0.0);
    if (!found) {
      double best_abs = std::numeric_limits<double>::infinity();
      for (double t : theta) {
        for (double target : {floor, ceil}) {
          const double s = wrap_pi(target - t);
          const double a = std::abs(s);
          if (a < best_abs || (a == best_abs && s > best_shift)) {
            if (fits(s)) {
              best_abs = a;
              best_shift = s;
              found = true;
            }
          }
        }
      }
    }
    if (found) {
      for (double& t : theta) t = wrap_2pi(t + best_shift);
    }
  }
  PhaseVector out(std::move(theta));
  for (double& w : out.values) w = lc.clamp(w);
  return out;
}

PhasePlan anomalous_reflection_plan(const ChannelSet& channels, const Beamformer& q, double noise_power,
                                    const LcParams& lc, const TransitionWeights& weights,
                                    std::span<const double> snr_thresholds) {
  const std::size_t num_users = channels.num_users();
  if (snr_thresholds.size() != num_users) throw ShapeError("need one SNR threshold per user");
  PhasePlan plan;
  plan.beamformer = q;
  for (std::size_t k = 0; k < num_users; ++k) {
    const SnrQuadratic form = effective_quadratic_form(channels, k, q, noise_power);
    plan.phases.push_back(cophasing_phases(form, lc));
  }
  plan.feasible = true;
  for (std::size_t k = 0; k < num_users; ++k) {
    plan.achieved_snr.push_back(snr_direct(channels, k, plan.phases[k], q, noise_power));
    if (plan.achieved_snr.back() < snr_thresholds[k]) plan.feasible = false;
  }
  plan.cost = weighted_cost(plan.phases, weights);
  return plan;
}

std::vector<double> default_lambda_init(const PhasePlan& init, const TransitionWeights& weights,
                                        std::span<const double> snr_thresholds, double delta) {
  double cost_scale = weighted_cost(init.phases, weights);
  if (!(cost_scale > 0.0)) {
    const double n = init.phases.empty() ? 1.0 : static_cast<double>(init.phases.front().size());
    cost_scale = n * static_cast<double>(std::max<std::size_t>(init.phases.size(), 1)) * weights.c_minus *
                 weights.c_minus * delta * delta;
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < snr_thresholds.size(); ++k) {
    double snr_scale = k < init.achieved_snr.size() ? init.achieved_snr[k] : 0.0;
    if (!(snr_scale > 0.0)) snr_scale = snr_thresholds[k];
    double lambda = snr_scale > 0.0 ? cost_scale / snr_scale : 1.0;
    if (!(lambda > 0.0) || !std::isfinite(lambda)) lambda = 1.0;
    out.push_back(lambda);
  }
  return out;
}

PhasePlan run_algorithm1(const ChannelSet& channels, const LcParams& lc, const TransitionWeights& weights,
                         const OptimizerParams& params, double noise_power, const PhasePlan& init) {
  const std::size_t num_users = channels.num_users();
  params.validate(num_users);
  weights.validate();
  lc.validate();
  if (init.phases.size() != num_users) throw ShapeError("initial plan needs one configuration per user");
  for (const auto& w : init.phases) {
    if (w.size() != channels.num_elements()) throw ShapeError("initial configuration length mismatch");
  }

  std::vector<SnrQuadratic> forms;
  std::vector<double> bounds;
  bool feasible_targets = true;
  for (std::size_t k = 0; k < num_users; ++k) {
    forms.push_back(effective_quadratic_form(channels, k, init.beamformer, noise_power));
    bounds.push_back(forms.back().cophasing_bound());
    if (bounds.back() < params.snr_thresholds[k]) feasible_targets = false;
  }
  if (!feasible_targets) {
    throw InfeasibleTargets("SNR targets exceed the co-phasing bound", std::move(bounds));
  }

  PhasePlan plan;
  plan.beamformer = init.beamformer;
  plan.phases = init.phases;
  std::vector<double> lambda = params.lambda_init;
  plan.lambda_trace.resize(num_users);
  for (std::size_t k = 0; k < num_users; ++k) plan.lambda_trace[k].push_back(lambda[k]);

  for (int i = 1; i <= params.i_max; ++i) {
    for (std::size_t k = 0; k < num_users; ++k) {
      const PhaseVector& prev = plan.phases[prev_index(k, num_users)];
      PhaseVector candidate = line_search_step(plan.phases[k], prev, forms[k], lambda[k], params.delta[k],
                                               weights, lc, params.line_search_points);
      const double snr = forms[k].snr(candidate);
      const bool accepted = snr >= params.snr_thresholds[k] * (1.0 + kAcceptanceGuard);
      if (accepted) {
        plan.phases[k] = std::move(candidate);
        lambda[k] *= params.alpha;
      } else {
        lambda[k] /= params.alpha;
      }
      plan.lambda_trace[k].push_back(lambda[k]);
      plan.trace.push_back({i, k, accepted, lambda[k], snr, weighted_cost(plan.phases, weights)});
    }
    plan.iterations_run = i;
  }

  plan.feasible = true;
  for (std::size_t k = 0; k < num_users; ++k) {
    plan.achieved_snr.push_back(snr_direct(channels, k, plan.phases[k], plan.beamformer, noise_power));
    if (plan.achieved_snr.back() < params.snr_thresholds[k]) plan.feasible = false;
  }
  plan.cost = weighted_cost(plan.phases, weights);
  return plan;
}

void write_iteration_trace_csv(std::ostream& os, const PhasePlan& plan) {
  const auto old_precision = os.precision();
  os << std::setprecision(17);
  os << "iteration,user,accepted,lambda,snr_db,cost\n";
  for (const auto& r : plan.trace) {
    os << r.iteration << ',' << r.user + 1 << ',' << (r.accepted ? 1 : 0) << ',' << r.lambda << ','
       << linear_to_db(r.snr) << ',' << r.cost << '\n';
  }
  os.precision(old_precision);
}

}  // namespace lcris
