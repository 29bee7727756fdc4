#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lcris/config.hpp"

using namespace lcris;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field;
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("empty input gives the default scenario") {
  const ScenarioConfig c = parse_config("");
  CHECK(c == ScenarioConfig{});
  CHECK(parse_config("  \n\t") == ScenarioConfig{});
  CHECK(parse_config("{}") == ScenarioConfig{});
  CHECK(c.carrier_freq == 28e9);
  CHECK(c.tx_power_dbm == 47.0);
  CHECK(c.bs_array.size() == 16);
  CHECK(c.num_users() == 2);
  CHECK(c.user_directions[0] == DirectionDeg{-10.0, 33.0});
  CHECK(c.link_bs_ue.pathloss_exponent == 3.5);
  CHECK(c.optimizer.alpha == 0.985);
  CHECK(c.optimizer.i_max == 100);
  CHECK(c.optimizer.delta == kPi / 8.0);
}

TEST_CASE("radio budget conversions") {
  const ScenarioConfig c;
  // -174 dBm/Hz + 73.01 dB + 6 dB, in watts
  CHECK(c.noise_power() == doctest::Approx(3.1697863849222223e-13).epsilon(1e-13));
  CHECK(c.tx_power() == doctest::Approx(50.11872336272725).epsilon(1e-14));
  CHECK(c.snr_threshold() == doctest::Approx(10.0));
}

TEST_CASE("fields override defaults and comments are allowed") {
  const ScenarioConfig c = parse_config(R"({
    // desk-scale array
    "ris_array": {"n_y": 8, "n_z": 8},
    "users": {"directions_deg": [{"elevation": 0, "azimuth": 10}], "range_m": 7.5},
    "optimizer": {"alpha": 0.9},
    "seeds": [3, 1]
  })");
  CHECK(c.ris_array.size() == 64);
  CHECK(c.ris_array.spacing == 0.5);
  CHECK(c.num_users() == 1);
  CHECK(c.user_range_m == 7.5);
  CHECK(c.optimizer.alpha == 0.9);
  CHECK(c.optimizer.i_max == 100);
  CHECK(c.seeds == std::vector<std::uint64_t>{3, 1});
}

TEST_CASE("errors name the offending field") {
  CHECK(field_of(R"({"optimizer": {"alpha": 1.2}})") == "optimizer.alpha");
  CHECK(field_of(R"({"optimizer": {"alhpa": 0.9}})") == "optimizer.alhpa");
  CHECK(field_of(R"({"bogus": 1})") == "bogus");
  CHECK(field_of(R"({"ris_array": {"n_y": -3}})") == "ris_array.n_y");
  CHECK(field_of(R"({"ris_array": {"n_y": 0}})") == "ris_array.n_y");
  CHECK(field_of(R"({"links": {"bs_ris": {"k_factor": "big"}}})") == "links.bs_ris.k_factor");
  CHECK(field_of(R"({"users": {"directions_deg": []}})") == "users.directions_deg");
  CHECK(field_of(R"({"users": {"directions_deg": [{"elevation": 100, "azimuth": 0}]}})") ==
        "users.directions_deg[0].elevation");
  CHECK(field_of(R"({"blockage": 1.5})") == "blockage");
  CHECK(field_of(R"({"lc": {"tau_minus_s": 0.001}})") == "lc");
  CHECK(field_of(R"({"simulation": {"ts_grid_ms": "5:1"}})") == "simulation.ts_grid_ms");
  CHECK(field_of(R"({"seeds": [-1]})") == "seeds[0]");
  CHECK(field_of("{not json") == "");
}

TEST_CASE("dump and parse round-trip") {
  ScenarioConfig c;
  c.ris_array.n_y = 5;
  c.user_directions.push_back({12.5, -40.0});
  c.lc.voltage_curve = {{0.5, 0.0}, {7.0, kTwoPi}};
  c.simulation.ts_grid = "10:100:10";
  c.seeds = {9, 8, 7};
  const std::string text = dump_config(c);
  CHECK(parse_config(text) == c);
  CHECK(dump_config(parse_config(text)) == text);
}

TEST_CASE("config hash is stable and sensitive") {
  ScenarioConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.snr_threshold_db = 11.0;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("load_config reads files and reports missing ones") {
  const auto path = std::filesystem::temp_directory_path() / "lcris_test_config.json";
  {
    std::ofstream os(path);
    os << R"({"snr_threshold_db": 12})";
  }
  CHECK(load_config(path).snr_threshold_db == 12.0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), ConfigError);
}

TEST_CASE("slot grids in milliseconds") {
  const TsGrid g = parse_ts_grid("5:20:5");
  const auto v = g.values_s();
  REQUIRE(v.size() == 4);
  CHECK(v.front() == doctest::Approx(0.005));
  CHECK(v.back() == doctest::Approx(0.020));
  CHECK(parse_ts_grid("5:1000:5").values_s().size() == 200);
  CHECK(parse_ts_grid("0.1:0.3:0.1").values_s().size() == 3);
  CHECK_THROWS_AS(parse_ts_grid("5:1"), ConfigError);
  CHECK_THROWS_AS(parse_ts_grid("10:5:1"), ConfigError);
  CHECK_THROWS_AS(parse_ts_grid("5:10:0"), ConfigError);
  CHECK_THROWS_AS(parse_ts_grid("5:10:1x"), ConfigError);
}

TEST_CASE("seed lists accept ranges") {
  CHECK(parse_seed_list("1,2,3") == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(parse_seed_list("4-6,1") == std::vector<std::uint64_t>{4, 5, 6, 1});
  CHECK_THROWS_AS(parse_seed_list(""), ConfigError);
  CHECK_THROWS_AS(parse_seed_list("a,b"), ConfigError);
}
