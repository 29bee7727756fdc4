#pragma once

// Liquid-crystal unit-cell phase shifter: static voltage-phase curve and the
// exponential switching dynamics with asymmetric rise/decay time constants,
// plus the over/undershoot drive that shortens transitions.

#include <cstddef>
#include <utility>
#include <vector>

#include "lcris/common.hpp"

namespace lcris {

struct VoltagePoint {
  double voltage;  // volts
  double phase;    // radians

  bool operator==(const VoltagePoint&) const = default;
};

struct LcParams {
  double tau_plus = 5e-3;    // s, rise (bias applied)
  double tau_minus = 24e-3;  // s, decay (anchoring only)
  double omega_max = kTwoPi;
  double phase_clamp_eps = 1e-3;
  // Piecewise-linear f(v). The knee is a placeholder fit, not measured data.
  std::vector<VoltagePoint> voltage_curve{{1.0, 0.0}, {3.0, 0.7 * kTwoPi}, {10.0, kTwoPi}};

  /// Throws InvalidParameter when any invariant is violated.
  void validate() const;

  double phase_floor() const { return phase_clamp_eps; }
  double phase_ceiling() const { return omega_max - phase_clamp_eps; }
  double clamp(double omega) const;

  /// Parameters with omega_max taken from the cell geometry and LC anisotropy;
  /// the voltage curve is rescaled to the new maximum.
  static LcParams from_physics(double length_m, double freq_hz, double n_parallel, double n_perp,
                               double tau_plus, double tau_minus);

  bool operator==(const LcParams&) const = default;
};

/// 2*pi*l*(n_par - n_perp)*f/c. Inputs are square roots of the relative permittivities.
double max_phase_from_physics(double length_m, double freq_hz, double n_parallel, double n_perp);

/// f(v): piecewise-linear interpolation, clamped to the curve's voltage range.
double phase_from_voltage(const LcParams& params, double volts);

/// f^{-1}(omega). On flat segments the lowest voltage reaching omega is returned.
double voltage_from_phase(const LcParams& params, double omega);

/// Phase t seconds after the drive switches to omega_target, starting at omega_0.
/// Uses tau_plus when omega_target >= omega_0, tau_minus otherwise.
double transition_phase(const LcParams& params, double t, double omega_0, double omega_target);

enum class Direction { rising, falling };

struct ElementSwitch {
  Direction direction = Direction::rising;
  double start_phase = 0.0;     // omega_0
  double forcing_target = 0.0;  // omega_max when rising, 0 (relaxed) when falling
  double release_time = 0.0;    // s
  double hold_phase = 0.0;      // omega_d after clamping
};

struct TransitionSchedule {
  std::vector<ElementSwitch> elements;
  // Number of start/target phases that had to be moved into
  // [phase_clamp_eps, omega_max - phase_clamp_eps].
  std::size_t clamped_count = 0;

  double max_release_time() const;
};

/// Over/undershoot schedule: drive each cell to the range endpoint in the
/// direction of travel and switch to the hold voltage at the crossing time.
TransitionSchedule plan_switch(const LcParams& params, const PhaseVector& omega_0,
                               const PhaseVector& omega_d);

/// Phases of every cell t seconds after the switch instant.
PhaseVector switched_phase_at(const TransitionSchedule& schedule, const LcParams& params, double t);

/// Time for a direct (non-overshoot) drive from omega_0 to settle to the given
/// fraction of the step, e.g. 0.95.
double settling_time(const LcParams& params, double omega_0, double omega_target, double fraction);

}  // namespace lcris
