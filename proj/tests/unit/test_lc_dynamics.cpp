#include <doctest.h>

#include <cmath>

#include "lcris/lc_dynamics.hpp"
#include "lcris/rng.hpp"

using namespace lcris;

TEST_CASE("default parameters are valid") {
  const LcParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.tau_plus == 5e-3);
  CHECK(p.tau_minus == 24e-3);
  CHECK(p.omega_max == kTwoPi);
}

TEST_CASE("validation rejects inconsistent parameters") {
  LcParams p;
  p.tau_minus = 4e-3;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = LcParams{};
  p.phase_clamp_eps = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = LcParams{};
  p.voltage_curve = {{1.0, 0.0}, {1.0, kTwoPi}};
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = LcParams{};
  p.voltage_curve.back().phase = 6.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
}

TEST_CASE("maximum phase from cell physics") {
  // 2*pi * 1 mm * (1.7 - 1.5) * 28 GHz / c
  CHECK(max_phase_from_physics(1e-3, 28e9, 1.7, 1.5) == doctest::Approx(0.11736732122929419).epsilon(1e-14));
  CHECK_THROWS_AS(max_phase_from_physics(1e-3, 28e9, 1.5, 1.7), InvalidParameter);
  const LcParams p = LcParams::from_physics(1e-3, 28e9, 1.7, 1.5, 5e-3, 24e-3);
  CHECK(p.omega_max == doctest::Approx(0.11736732122929419).epsilon(1e-14));
  CHECK(p.voltage_curve.back().phase == p.omega_max);
}

TEST_CASE("voltage curve interpolation and inverse") {
  const LcParams p;
  CHECK(phase_from_voltage(p, 0.0) == 0.0);
  CHECK(phase_from_voltage(p, 1.0) == 0.0);
  CHECK(phase_from_voltage(p, 2.0) == doctest::Approx(0.35 * kTwoPi));
  CHECK(phase_from_voltage(p, 10.0) == kTwoPi);
  CHECK(phase_from_voltage(p, 50.0) == kTwoPi);
  for (double v : {1.5, 2.0, 3.0, 5.0, 9.9}) {
    CHECK(voltage_from_phase(p, phase_from_voltage(p, v)) == doctest::Approx(v).epsilon(1e-12));
  }
  CHECK(voltage_from_phase(p, 0.0) == 1.0);
  CHECK_THROWS_AS(voltage_from_phase(p, -0.1), OutOfRange);
  CHECK_THROWS_AS(voltage_from_phase(p, kTwoPi + 0.1), OutOfRange);
}

TEST_CASE("flat curve segments map back to their lowest voltage") {
  LcParams p;
  p.voltage_curve = {{1.0, 0.0}, {2.0, 1.0}, {4.0, 1.0}, {6.0, kTwoPi}};
  CHECK(voltage_from_phase(p, 1.0) == 2.0);
}

TEST_CASE("exponential transition") {
  const LcParams p;
  CHECK(transition_phase(p, 0.0, 1.0, 3.0) == 1.0);
  CHECK(transition_phase(p, 5e-3, 1.0, 3.0) == doctest::Approx(3.0 - 2.0 * std::exp(-1.0)));
  CHECK(transition_phase(p, 24e-3, 3.0, 1.0) == doctest::Approx(1.0 + 2.0 * std::exp(-1.0)));
  CHECK_THROWS_AS(transition_phase(p, -1e-3, 1.0, 3.0), InvalidParameter);
}

TEST_CASE("release times of the over/undershoot drive") {
  const LcParams p;
  const TransitionSchedule s = plan_switch(p, PhaseVector(std::vector<double>{1.0, 3.0, 2.0}), PhaseVector(std::vector<double>{2.0, 1.0, 2.0}));
  REQUIRE(s.elements.size() == 3);
  CHECK(s.elements[0].direction == Direction::rising);
  CHECK(s.elements[0].forcing_target == kTwoPi);
  // 5 ms * ln((2pi - 1) / (2pi - 2))
  CHECK(s.elements[0].release_time == doctest::Approx(0.0010491611512665415).epsilon(1e-13));
  CHECK(s.elements[1].direction == Direction::falling);
  CHECK(s.elements[1].forcing_target == 0.0);
  // 24 ms * ln(3)
  CHECK(s.elements[1].release_time == doctest::Approx(0.026366694928034635).epsilon(1e-13));
  CHECK(s.elements[2].release_time == 0.0);
  CHECK(s.max_release_time() == s.elements[1].release_time);
  CHECK(s.clamped_count == 0);
}

TEST_CASE("the forced trajectory reaches the hold phase exactly at release") {
  const LcParams p;
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(p.phase_floor(), p.phase_ceiling());
    const double b = rng.uniform(p.phase_floor(), p.phase_ceiling());
    const ElementSwitch e = plan_switch(p, PhaseVector(std::vector<double>{a}), PhaseVector(std::vector<double>{b})).elements[0];
    CHECK(transition_phase(p, e.release_time, a, e.forcing_target) == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("phases outside the clamp range are moved inside and counted") {
  const LcParams p;
  const TransitionSchedule s = plan_switch(p, PhaseVector(std::vector<double>{0.0}), PhaseVector(std::vector<double>{kTwoPi}));
  CHECK(s.clamped_count == 2);
  CHECK(s.elements[0].start_phase == p.phase_floor());
  CHECK(s.elements[0].hold_phase == p.phase_ceiling());
  CHECK(std::isfinite(s.elements[0].release_time));
}

TEST_CASE("switched phases hold after release and are monotone before") {
  const LcParams p;
  const PhaseVector from(std::vector<double>{1.0, 4.0});
  const PhaseVector to(std::vector<double>{3.0, 2.0});
  const TransitionSchedule s = plan_switch(p, from, to);
  double last0 = from[0], last1 = from[1];
  for (double t = 0.0; t <= 0.1; t += 1e-4) {
    const PhaseVector w = switched_phase_at(s, p, t);
    CHECK(w[0] >= last0 - 1e-15);
    CHECK(w[1] <= last1 + 1e-15);
    last0 = w[0];
    last1 = w[1];
  }
  const PhaseVector end = switched_phase_at(s, p, 0.1);
  CHECK(end == to);
  CHECK_THROWS_AS(switched_phase_at(s, p, -1.0), InvalidParameter);
}

TEST_CASE("shrinking a transition never lengthens its release time") {
  const LcParams p;
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(p.phase_floor(), p.phase_ceiling());
    const double b = rng.uniform(p.phase_floor(), p.phase_ceiling());
    double last = plan_switch(p, PhaseVector(std::vector<double>{a}), PhaseVector(std::vector<double>{b})).elements[0].release_time;
    for (double f : {0.8, 0.5, 0.2, 0.0}) {
      const double t = plan_switch(p, PhaseVector(std::vector<double>{a}), PhaseVector(std::vector<double>{a + f * (b - a)})).elements[0].release_time;
      CHECK(t <= last + 1e-15);
      last = t;
    }
  }
}

TEST_CASE("95 percent settling times of direct drives") {
  const LcParams p;
  // -tau ln(0.05)
  CHECK(settling_time(p, 0.0, 1.0, 0.95) == doctest::Approx(0.014978661367769954).epsilon(1e-13));
  CHECK(settling_time(p, 1.0, 0.0, 0.95) == doctest::Approx(0.07189757456529579).epsilon(1e-13));
  CHECK(settling_time(p, 1.0, 1.0, 0.95) == 0.0);
}
