#include <doctest.h>

#include <cmath>

#include "lcris/config.hpp"
#include "lcris/precoder.hpp"
#include "lcris/rng.hpp"

using namespace lcris;

namespace {

ScenarioConfig small_los() {
  ScenarioConfig c;
  c.ris_array.n_y = 4;
  c.ris_array.n_z = 4;
  c.link_bs_ris.k_factor = kLosKFactor;
  return c;
}

PhaseVector random_phases(Rng& rng, std::size_t n) {
  PhaseVector w(n, 0.0);
  for (auto& x : w.values) x = rng.uniform(0.0, kTwoPi);
  return w;
}

cplx naive_received(const ChannelSet& ch, std::size_t k, const PhaseVector& w, const Beamformer& q) {
  cplx y{};
  for (std::size_t t = 0; t < q.weights.size(); ++t) y += std::conj(ch.h_direct[k][t]) * q.weights[t];
  for (std::size_t n = 0; n < ch.num_elements(); ++n) {
    cplx g{};
    for (std::size_t t = 0; t < q.weights.size(); ++t) g += ch.h_bs_ris(n, t) * q.weights[t];
    y += std::conj(ch.h_ris_user[k][n]) * std::polar(1.0, w[n]) * g;
  }
  return y;
}

}  // namespace

TEST_CASE("matched filter uses the full power budget") {
  const CVector h{{1, 2}, {0, -1}, {3, 0}};
  const Beamformer q = matched_filter(h, 4.0);
  CHECK(q.power() == doctest::Approx(4.0));
  CHECK(std::abs(q.weights[0] / h[0] - q.weights[2] / h[2]) < 1e-15);
  CHECK_THROWS_AS(matched_filter(CVector(3), 1.0), DegenerateChannel);
  CHECK_THROWS_AS(matched_filter(h, 0.0), InvalidParameter);
}

TEST_CASE("direct SNR matches a naive cascade sum") {
  ScenarioConfig c;
  c.ris_array.n_y = 3;
  c.ris_array.n_z = 5;
  c.blockage = 0.6;
  const ChannelSet ch = build_scenario_channels(c, 8);
  const Beamformer q = los_beamformer(c.bs_array, ch.bs_aod, c.tx_power());
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const PhaseVector w = random_phases(rng, ch.num_elements());
    for (std::size_t k = 0; k < 2; ++k) {
      const double want = std::norm(naive_received(ch, k, w, q)) / c.noise_power();
      CHECK(snr_direct(ch, k, w, q, c.noise_power()) == doctest::Approx(want).epsilon(1e-12));
      const CVector h = effective_channel(ch, k, w);
      cplx y{};
      for (std::size_t t = 0; t < h.size(); ++t) y += std::conj(h[t]) * q.weights[t];
      CHECK(std::norm(y) / c.noise_power() == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("LOS quadratic form equals the direct SNR") {
  const ScenarioConfig c = small_los();
  const ChannelSet ch = build_scenario_channels(c, 5);
  const Beamformer q = los_beamformer(c.bs_array, ch.bs_aod, c.tx_power());
  Rng rng(2);
  for (std::size_t k = 0; k < 2; ++k) {
    const SnrQuadratic form = snr_quadratic_form(ch, k, q, c.noise_power());
    const double c2 = ch.bs_ris_los_amplitude * ch.bs_ris_los_amplitude;
    CHECK(form.scale() == doctest::Approx(c2 * c.tx_power() * 16.0 / c.noise_power()).epsilon(1e-12));
    for (int i = 0; i < 10; ++i) {
      const PhaseVector w = random_phases(rng, ch.num_elements());
      CHECK(form.snr(w) == doctest::Approx(snr_direct(ch, k, w, q, c.noise_power())).epsilon(1e-12));
    }
  }
}

TEST_CASE("LOS quadratic form refuses the wrong regime") {
  ScenarioConfig c = small_los();
  c.blockage = 0.5;
  const ChannelSet open = build_scenario_channels(c, 1);
  const Beamformer q = los_beamformer(c.bs_array, open.bs_aod, c.tx_power());
  CHECK_THROWS_AS(snr_quadratic_form(open, 0, q, c.noise_power()), PreconditionError);
  c = small_los();
  c.link_bs_ris.k_factor = 10.0;
  const ChannelSet rician = build_scenario_channels(c, 1);
  CHECK_THROWS_AS(snr_quadratic_form(rician, 0, q, c.noise_power()), PreconditionError);
}

TEST_CASE("effective quadratic form is exact for any channel") {
  ScenarioConfig c;
  c.ris_array.n_y = 4;
  c.ris_array.n_z = 2;
  c.blockage = 1.0;
  const ChannelSet ch = build_scenario_channels(c, 9);
  const Beamformer q = los_beamformer(c.bs_array, ch.bs_aod, c.tx_power());
  Rng rng(3);
  for (std::size_t k = 0; k < 2; ++k) {
    const SnrQuadratic form = effective_quadratic_form(ch, k, q, c.noise_power());
    CHECK(form.direct() != cplx{});
    for (int i = 0; i < 10; ++i) {
      const PhaseVector w = random_phases(rng, ch.num_elements());
      CHECK(form.snr(w) == doctest::Approx(snr_direct(ch, k, w, q, c.noise_power())).epsilon(1e-12));
    }
  }
}

TEST_CASE("co-phasing reaches the bound") {
  const CVector m{{1, 1}, {-2, 0.5}, {0, -0.3}};
  const SnrQuadratic form(m, 2.0, {0.5, -0.5});
  PhaseVector w(3, 0.0);
  for (std::size_t n = 0; n < 3; ++n) w[n] = std::arg(form.direct()) - std::arg(m[n]);
  CHECK(form.snr(w) == doctest::Approx(form.cophasing_bound()).epsilon(1e-14));
  const double amp = std::abs(form.direct()) + std::abs(m[0]) + std::abs(m[1]) + std::abs(m[2]);
  CHECK(form.cophasing_bound() == doctest::Approx(2.0 * amp * amp).epsilon(1e-14));
}

TEST_CASE("z vector is scale * conj(m) * amplitude") {
  const CVector m{{1, 2}, {3, -1}};
  const SnrQuadratic form(m, 0.5);
  const PhaseVector w(std::vector<double>{0.4, 2.0});
  const cplx a = form.amplitude(w);
  const CVector z = form.z(w);
  for (std::size_t n = 0; n < 2; ++n) CHECK(std::abs(z[n] - 0.5 * std::conj(m[n]) * a) < 1e-15);
  CHECK_THROWS_AS(form.snr(PhaseVector(3, 0.0)), ShapeError);
  CHECK_THROWS_AS(SnrQuadratic(m, -1.0), InvalidParameter);
}

TEST_CASE("a common phase offset leaves the SNR unchanged without a direct path") {
  const ScenarioConfig c = small_los();
  const ChannelSet ch = build_scenario_channels(c, 6);
  const Beamformer q = los_beamformer(c.bs_array, ch.bs_aod, c.tx_power());
  const SnrQuadratic form = snr_quadratic_form(ch, 0, q, c.noise_power());
  Rng rng(4);
  const PhaseVector w = random_phases(rng, ch.num_elements());
  PhaseVector shifted = w;
  for (auto& x : shifted.values) x += kPi / 8.0;
  CHECK(std::abs(form.snr(shifted) - form.snr(w)) <= 1e-10 * form.snr(w));
}
