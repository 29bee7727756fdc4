#include "lcris/lc_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lcris {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

void validate_curve(const std::vector<VoltagePoint>& curve, double omega_max) {
  require(curve.size() >= 2, "voltage_curve needs at least two breakpoints");
  for (std::size_t i = 1; i < curve.size(); ++i) {
    require(curve[i].voltage > curve[i - 1].voltage, "voltage_curve voltages must be strictly increasing");
    require(curve[i].phase >= curve[i - 1].phase, "voltage_curve phases must be nondecreasing");
  }
  require(curve.front().phase == 0.0, "voltage_curve must start at phase 0");
  require(std::abs(curve.back().phase - omega_max) <= 1e-12 * omega_max,
          "voltage_curve must end at omega_max");
}

}  // namespace

void LcParams::validate() const {
  require(std::isfinite(tau_plus) && tau_plus > 0.0, "tau_plus must be positive");
  require(std::isfinite(tau_minus) && tau_minus > 0.0, "tau_minus must be positive");
  require(tau_minus > tau_plus, "tau_minus must exceed tau_plus");
  require(std::isfinite(omega_max) && omega_max > 0.0, "omega_max must be positive");
  require(phase_clamp_eps > 0.0 && phase_clamp_eps < omega_max / 2.0,
          "phase_clamp_eps must lie in (0, omega_max/2)");
  validate_curve(voltage_curve, omega_max);
}

double LcParams::clamp(double omega) const {
  return std::clamp(omega, phase_floor(), phase_ceiling());
}

double max_phase_from_physics(double length_m, double freq_hz, double n_parallel, double n_perp) {
  require(length_m > 0.0, "phase-shifter length must be positive");
  require(freq_hz > 0.0, "frequency must be positive");
  require(n_perp > 0.0 && n_parallel > n_perp, "need n_parallel > n_perp > 0");
  return kTwoPi * length_m * (n_parallel - n_perp) * freq_hz / kSpeedOfLight;
}

LcParams LcParams::from_physics(double length_m, double freq_hz, double n_parallel, double n_perp,
                                double tau_plus, double tau_minus) {
  LcParams p;
  const double scale = max_phase_from_physics(length_m, freq_hz, n_parallel, n_perp) / p.omega_max;
  p.omega_max *= scale;
  for (auto& bp : p.voltage_curve) bp.phase *= scale;
  p.voltage_curve.back().phase = p.omega_max;
  p.tau_plus = tau_plus;
  p.tau_minus = tau_minus;
  p.phase_clamp_eps = std::min(p.phase_clamp_eps, p.omega_max / 4.0);
  p.validate();
  return p;
}

double phase_from_voltage(const LcParams& params, double volts) {
  const auto& curve = params.voltage_curve;
  validate_curve(curve, params.omega_max);
  if (volts <= curve.front().voltage) return curve.front().phase;
  if (volts >= curve.back().voltage) return curve.back().phase;
  const auto hi = std::upper_bound(curve.begin(), curve.end(), volts,
                                   [](double v, const VoltagePoint& p) { return v < p.voltage; });
  const auto lo = hi - 1;
  const double frac = (volts - lo->voltage) / (hi->voltage - lo->voltage);
  return lo->phase + frac * (hi->phase - lo->phase);
}

double voltage_from_phase(const LcParams& params, double omega) {
  const auto& curve = params.voltage_curve;
  validate_curve(curve, params.omega_max);
  if (!(omega >= 0.0 && omega <= params.omega_max)) {
    throw OutOfRange("phase " + std::to_string(omega) + " outside [0, omega_max]");
  }
  // First breakpoint whose phase reaches omega; flat runs resolve to their lowest voltage.
  const auto hi = std::lower_bound(curve.begin(), curve.end(), omega,
                                   [](const VoltagePoint& p, double w) { return p.phase < w; });
  if (hi == curve.begin()) return curve.front().voltage;
  if (hi == curve.end()) return curve.back().voltage;
  const auto lo = hi - 1;
  const double frac = (omega - lo->phase) / (hi->phase - lo->phase);
  return lo->voltage + frac * (hi->voltage - lo->voltage);
}

double transition_phase(const LcParams& params, double t, double omega_0, double omega_target) {
  if (!(t >= 0.0)) throw InvalidParameter("transition time must be nonnegative");
  const double tau = omega_target >= omega_0 ? params.tau_plus : params.tau_minus;
  return omega_target + (omega_0 - omega_target) * std::exp(-t / tau);
}

double TransitionSchedule::max_release_time() const {
  double t = 0.0;
  for (const auto& e : elements) t = std::max(t, e.release_time);
  return t;
}

TransitionSchedule plan_switch(const LcParams& params, const PhaseVector& omega_0,
                               const PhaseVector& omega_d) {
  if (omega_0.size() != omega_d.size()) throw ShapeError("plan_switch: phase vectors differ in length");
  TransitionSchedule schedule;
  schedule.elements.resize(omega_0.size());
  for (std::size_t n = 0; n < omega_0.size(); ++n) {
    const double from = params.clamp(omega_0[n]);
    const double to = params.clamp(omega_d[n]);
    if (from != omega_0[n]) ++schedule.clamped_count;
    if (to != omega_d[n]) ++schedule.clamped_count;

    ElementSwitch& e = schedule.elements[n];
    e.start_phase = from;
    e.hold_phase = to;
    if (to >= from) {
      // Overshoot: full bias until the rising phase crosses the target.
      e.direction = Direction::rising;
      e.forcing_target = params.omega_max;
      e.release_time = params.tau_plus * std::log((params.omega_max - from) / (params.omega_max - to));
    } else {
      // Undershoot: bias removed, the cell relaxes toward zero phase.
      e.direction = Direction::falling;
      e.forcing_target = 0.0;
      e.release_time = params.tau_minus * std::log(from / to);
    }
  }
  return schedule;
}

PhaseVector switched_phase_at(const TransitionSchedule& schedule, const LcParams& params, double t) {
  if (!(t >= 0.0)) throw InvalidParameter("switch time must be nonnegative");
  PhaseVector out(schedule.elements.size(), 0.0);
  for (std::size_t n = 0; n < schedule.elements.size(); ++n) {
    const ElementSwitch& e = schedule.elements[n];
    out[n] = t < e.release_time ? transition_phase(params, t, e.start_phase, e.forcing_target)
                                : e.hold_phase;
  }
  return out;
}

double settling_time(const LcParams& params, double omega_0, double omega_target, double fraction) {
  require(fraction > 0.0 && fraction < 1.0, "settling fraction must lie in (0, 1)");
  if (omega_0 == omega_target) return 0.0;
  const double tau = omega_target >= omega_0 ? params.tau_plus : params.tau_minus;
  return -tau * std::log(1.0 - fraction);
}

}  // namespace lcris
