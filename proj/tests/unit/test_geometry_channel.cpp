#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lcris/config.hpp"
#include "lcris/geometry_channel.hpp"

using namespace lcris;

TEST_CASE("steering vector entries follow the (p, q) convention") {
  const ArraySpec a{2, 2, 0.5, {}, {1.0, 0.0, 0.0}};
  const CVector v = steering_vector(a, {0.3, 0.5});
  REQUIRE(v.size() == 4);
  // exp(j*pi*(p*sin(0.5)*cos(0.3) + q*sin(0.3))) at n = 2p + q
  CHECK(v[0] == cplx{1.0, 0.0});
  CHECK(v[1].real() == doctest::Approx(0.5991125175028562).epsilon(1e-14));
  CHECK(v[1].imag() == doctest::Approx(0.8006648433466963).epsilon(1e-14));
  CHECK(v[2].real() == doctest::Approx(0.13152477378924698).epsilon(1e-13));
  CHECK(v[2].imag() == doctest::Approx(0.9913128839471862).epsilon(1e-14));
  CHECK(v[3].real() == doctest::Approx(-0.714911236594266).epsilon(1e-13));
  CHECK(v[3].imag() == doctest::Approx(0.6992152199367927).epsilon(1e-13));
  for (const auto& x : steering_vector(ArraySpec{5, 3, 0.5, {}, {1, 0, 0}}, {-0.7, 2.0})) {
    CHECK(std::abs(x) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("boresight direction gives an all-ones steering vector") {
  for (const auto& x : steering_vector(ArraySpec{4, 4, 0.5, {}, {1, 0, 0}}, {0.0, 0.0})) CHECK(x == cplx{1.0, 0.0});
}

TEST_CASE("angles of the default BS-RIS link") {
  const ScenarioConfig c;
  const AngleTuple aod = angles_between(c.bs_array.position, c.ris_array.position, c.bs_array.boresight);
  CHECK(aod.elevation == doctest::Approx(-0.08554004511421182).epsilon(1e-13));
  CHECK(aod.azimuth == doctest::Approx(0.5404195002705842).epsilon(1e-13));
  const AngleTuple aoa = angles_between(c.ris_array.position, c.bs_array.position, c.ris_array.boresight);
  CHECK(aoa.elevation == doctest::Approx(0.08554004511421182).epsilon(1e-13));
  CHECK(aoa.azimuth == doctest::Approx(-1.0303768265243125).epsilon(1e-13));
}

TEST_CASE("angles and directions are inverse maps") {
  const Vec3 boresight{0.3, -1.0, 0.2};
  for (double el : {-1.2, -0.3, 0.0, 0.7}) {
    for (double az : {-2.5, -0.1, 0.0, 1.3, 3.0}) {
      const Vec3 d = direction_from_angles({el, az}, boresight);
      const AngleTuple back = angles_between({0, 0, 0}, d, boresight);
      CHECK(back.elevation == doctest::Approx(el).epsilon(1e-12));
      CHECK(back.azimuth == doctest::Approx(az).epsilon(1e-12));
    }
  }
}

TEST_CASE("coincident points have no direction") {
  CHECK_THROWS_AS(angles_between({1, 2, 3}, {1, 2, 3}, {1, 0, 0}), DegenerateGeometry);
  CHECK_THROWS_AS(angles_between({0, 0, 0}, {1, 0, 0}, {0, 0, 0}), DegenerateGeometry);
}

TEST_CASE("path loss") {
  // 10^(-6.1) * 50^-2 and 10^(-6.1) * 20^-3.5
  CHECK(pathloss_gain({10.0, 2.0, -61.0, 1.0}, 50.0) == doctest::Approx(3.1773129388971287e-10).epsilon(1e-13));
  CHECK(pathloss_gain({0.0, 3.5, -61.0, 1.0}, 20.0) == doctest::Approx(2.2202149116136298e-11).epsilon(1e-13));
  CHECK_THROWS_AS(pathloss_gain({0.0, 2.0, -61.0, 1.0}, 0.0), InvalidParameter);
}

TEST_CASE("pure LOS Rician channel is the rank-one steering product") {
  const ArraySpec tx{2, 2, 0.5, {}, {1, 0, 0}};
  const ArraySpec rx{3, 1, 0.5, {}, {1, 0, 0}};
  const LinkParams los{kLosKFactor, 2.0, -61.0, 1.0};
  const CMatrix h = rician_channel(1, los, tx, rx, {0.1, 0.2}, {-0.3, 0.4}, 10.0);
  const CVector at = steering_vector(tx, {0.1, 0.2});
  const CVector ar = steering_vector(rx, {-0.3, 0.4});
  const double c = std::sqrt(pathloss_gain(los, 10.0));
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t t = 0; t < 4; ++t) CHECK(std::abs(h(r, t) - c * ar[r] * std::conj(at[t])) < 1e-20);
  }
}

TEST_CASE("Rician channel power matches the path loss") {
  const ArraySpec tx{8, 8, 0.5, {}, {1, 0, 0}};
  const ArraySpec rx{8, 8, 0.5, {}, {1, 0, 0}};
  const LinkParams link{1.0, 2.0, -61.0, 1.0};
  const CMatrix h = rician_channel(99, link, tx, rx, {0.1, 0.2}, {-0.3, 0.4}, 10.0);
  double p = 0.0;
  for (const auto& v : h.data()) p += std::norm(v);
  p /= static_cast<double>(h.data().size());
  CHECK(p == doctest::Approx(pathloss_gain(link, 10.0)).epsilon(0.05));
  CHECK(h == rician_channel(99, link, tx, rx, {0.1, 0.2}, {-0.3, 0.4}, 10.0));
  CHECK_FALSE(h == rician_channel(100, link, tx, rx, {0.1, 0.2}, {-0.3, 0.4}, 10.0));
}

TEST_CASE("user positions follow the RIS-frame directions") {
  const ScenarioConfig c;
  const auto users = user_positions(c);
  REQUIRE(users.size() == 2);
  CHECK(users[0][0] == doctest::Approx(16.518585550716107).epsilon(1e-12));
  CHECK(users[0][1] == doctest::Approx(60.72729488551772).epsilon(1e-12));
  CHECK(users[0][2] == doctest::Approx(1.5270364466613935).epsilon(1e-12));
  CHECK(distance_between(users[1], c.ris_array.position) == doctest::Approx(20.0));
}

TEST_CASE("scenario channels have the configured shapes and are seed-deterministic") {
  const ScenarioConfig c;
  const ChannelSet a = build_scenario_channels(c, 1);
  CHECK(a.num_users() == 2);
  CHECK(a.num_elements() == 256);
  CHECK(a.num_bs_antennas() == 16);
  CHECK(a.direct_blocked(0));
  CHECK(a.direct_blocked(1));
  CHECK(a.bs_ris_nlos_residual() > 0.0);
  CHECK(a == build_scenario_channels(c, 1));
  CHECK_FALSE(a == build_scenario_channels(c, 2));
}

TEST_CASE("pure LOS BS-RIS link leaves no nLOS residual") {
  ScenarioConfig c;
  c.link_bs_ris.k_factor = kLosKFactor;
  CHECK(build_scenario_channels(c, 3).bs_ris_nlos_residual() < 1e-14);
}

TEST_CASE("partial blockage scales the direct channel") {
  ScenarioConfig c;
  c.blockage = 1.0;
  const ChannelSet open = build_scenario_channels(c, 4);
  c.blockage = 0.25;
  const ChannelSet part = build_scenario_channels(c, 4);
  CHECK_FALSE(open.direct_blocked(0));
  for (std::size_t i = 0; i < open.h_direct[0].size(); ++i) {
    CHECK(std::abs(part.h_direct[0][i] - 0.25 * open.h_direct[0][i]) < 1e-20);
  }
  CHECK(open.h_ris_user == part.h_ris_user);
}

TEST_CASE("a user on top of the RIS is rejected") {
  ScenarioConfig c;
  c.user_range_m = 1e-12;
  CHECK_THROWS_AS(build_scenario_channels(c, 1), DegenerateGeometry);
}

TEST_CASE("channel CSV lists every entry") {
  ScenarioConfig c;
  c.ris_array.n_y = 2;
  c.ris_array.n_z = 2;
  const ChannelSet ch = build_scenario_channels(c, 1);
  std::ostringstream os;
  write_channel_csv(os, ch);
  std::size_t lines = 0;
  for (char x : os.str()) lines += x == '\n';
  CHECK(lines == 1 + 4 * 16 + 2 * (4 + 16));
  CHECK(os.str().rfind("link,user,row,col,re,im\n", 0) == 0);
}
