#pragma once

// Transition-aware design of the K per-user RIS configurations.
//
// The objective is the weighted squared phase change around the TDMA cycle,
// sum_k ||c_k o (omega_k - omega_{k-1})||^2, where rising changes are weighted
// by c_plus and falling changes by c_minus. SNR targets enter through a
// per-user Lagrange multiplier. With z_k = M_k s_k held fixed, the per-user
// Lagrangian splits into independent per-element terms
//
//   L_n(w) = c_n^2 (w - w_prev)^2 - 2 lambda r_n cos(w - phi_n),
//
// which are minimized on a +/- delta window around the current iterate. The
// multiplier shrinks by alpha after an accepted step and grows by 1/alpha
// after a step that broke the SNR target (and was reverted).

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "lcris/common.hpp"
#include "lcris/geometry_channel.hpp"
#include "lcris/lc_dynamics.hpp"
#include "lcris/precoder.hpp"

namespace lcris {

struct TransitionWeights {
  double c_plus = 1.0;
  double c_minus = 1.0;

  void validate() const;
  /// Squared weight for a change of the given sign.
  double quad_weight(double delta) const { return delta >= 0.0 ? c_plus * c_plus : c_minus * c_minus; }

  /// c_plus = sqrt(tau_plus / tau_minus), c_minus = 1, so c^2 scales with the time constants.
  static TransitionWeights from_time_constants(const LcParams& lc);
};

struct OptimizerParams {
  double alpha = 0.985;
  int i_max = 100;
  std::vector<double> delta;          // per user, (0, pi)
  std::vector<double> lambda_init;    // per user, > 0
  int line_search_points = 64;        // grid size for bracketing stationary points
  std::vector<double> snr_thresholds; // per user, linear

  void validate(std::size_t num_users) const;
};

struct IterationRecord {
  int iteration = 0;  // 1-based
  std::size_t user = 0;
  bool accepted = false;
  double lambda = 0.0;  // after the update
  double snr = 0.0;     // of the candidate
  double cost = 0.0;    // of the configuration set after the step
};

struct PhasePlan {
  std::vector<PhaseVector> phases;  // one configuration per user
  Beamformer beamformer;
  std::vector<double> achieved_snr;  // via the full cascaded channel
  double cost = 0.0;
  bool feasible = false;
  int iterations_run = 0;
  std::vector<std::vector<double>> lambda_trace;  // per user, lambda^(0), lambda^(1), ...
  std::vector<IterationRecord> trace;
};

/// omega_k - omega_{k-1}, with omega_0 - omega_{K-1} for the first user (0-based k).
std::vector<double> cyclic_delta(std::span<const PhaseVector> phases, std::size_t k);

double weighted_cost(std::span<const PhaseVector> phases, const TransitionWeights& weights);

/// Per-element Lagrangian term; `quad_weight` is the squared transition weight.
double element_lagrangian(double omega, double omega_prev, double lambda, double r, double phi,
                          double quad_weight);

/// Per-user Lagrangian  ||c o delta||^2 + lambda (threshold - SNR).
double user_lagrangian(const PhaseVector& phases, const PhaseVector& prev, double lambda,
                       const SnrQuadratic& form, double threshold, const TransitionWeights& weights);

/// 2 c^2 o delta - 2 lambda r o sin(phi - omega), with (r, phi) from z at `phases`.
std::vector<double> lagrangian_gradient(const PhaseVector& phases, const PhaseVector& prev, double lambda,
                                        const SnrQuadratic& form, const TransitionWeights& weights);

struct ElementProblem {
  double center;  // current iterate
  double prev;    // previous user's phase
  double lambda;
  double r;
  double phi;
};

/// argmin of L_n over [center - delta, center + delta] clipped to the valid phase range.
double minimize_element(const ElementProblem& p, const TransitionWeights& weights, double delta,
                        const LcParams& lc, int grid_points);

/// One per-element minimization sweep for one user with z frozen at `current`.
PhaseVector line_search_step(const PhaseVector& current, const PhaseVector& prev, const SnrQuadratic& form,
                             double lambda, double delta, const TransitionWeights& weights,
                             const LcParams& lc, int grid_points);

/// Co-phasing configuration maximizing the form's SNR, inside the valid phase range.
/// When the range covers a full turn and the direct path is absent, a common
/// phase offset moves every element off the range edges without changing the SNR.
PhaseVector cophasing_phases(const SnrQuadratic& form, const LcParams& lc);

/// Transition-unaware benchmark: each user gets its co-phasing configuration.
PhasePlan anomalous_reflection_plan(const ChannelSet& channels, const Beamformer& q, double noise_power,
                                    const LcParams& lc, const TransitionWeights& weights,
                                    std::span<const double> snr_thresholds);

/// Instance-scaled default multiplier: cost scale / SNR scale, where the
/// SNR scale is the initial plan's achieved SNR (the threshold when unknown).
std::vector<double> default_lambda_init(const PhasePlan& init, const TransitionWeights& weights,
                                        std::span<const double> snr_thresholds, double delta);

/// The iterative per-user line search with dual updates, started from `init`.
/// Throws InfeasibleTargets when a threshold exceeds the co-phasing bound.
PhasePlan run_algorithm1(const ChannelSet& channels, const LcParams& lc, const TransitionWeights& weights,
                         const OptimizerParams& params, double noise_power, const PhasePlan& init);

/// Accepted steps must clear the threshold by this relative margin.
inline constexpr double kAcceptanceGuard = 1e-9;

/// iteration,user,accepted,lambda,snr_db,cost
void write_iteration_trace_csv(std::ostream& os, const PhasePlan& plan);

}  // namespace lcris
