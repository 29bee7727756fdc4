#include "lcris/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lcris {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Reads optional keys of one JSON object and rejects anything it was not asked about.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  template <class T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    out = convert<T>(*it, join(path_, key));
  }

  const json* child(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
    }
  }

  template <class T>
  static T convert(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(path, "expected a number");
      return v.get<double>();
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
      return v.get<int>();
    } else if constexpr (std::is_same_v<T, std::size_t>) {
      if (!v.is_number_unsigned()) throw ConfigError(path, "expected a nonnegative integer");
      return v.get<std::size_t>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(path, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, Vec3>) {
      if (!v.is_array() || v.size() != 3) throw ConfigError(path, "expected an array of 3 numbers");
      Vec3 out{};
      for (std::size_t i = 0; i < 3; ++i) out[i] = convert<double>(v[i], path + "[" + std::to_string(i) + "]");
      return out;
    } else {
      static_assert(sizeof(T) == 0, "unsupported config type");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_array(const json& j, const std::string& path, ArraySpec& a) {
  ObjectReader r(j, path);
  r.read("n_y", a.n_y);
  r.read("n_z", a.n_z);
  r.read("spacing_wavelengths", a.spacing);
  r.read("position_m", a.position);
  r.read("boresight", a.boresight);
  r.finish();
}

void read_link(const json& j, const std::string& path, LinkParams& l) {
  ObjectReader r(j, path);
  r.read("k_factor", l.k_factor);
  r.read("pathloss_exponent", l.pathloss_exponent);
  r.read("ref_gain_db", l.ref_gain_db);
  r.read("ref_distance_m", l.ref_distance);
  r.finish();
}

void read_lc(const json& j, const std::string& path, LcParams& lc) {
  ObjectReader r(j, path);
  r.read("tau_plus_s", lc.tau_plus);
  r.read("tau_minus_s", lc.tau_minus);
  r.read("omega_max_rad", lc.omega_max);
  r.read("phase_clamp_eps_rad", lc.phase_clamp_eps);
  if (const json* curve = r.child("voltage_curve")) {
    const std::string cpath = r.path("voltage_curve");
    if (!curve->is_array()) throw ConfigError(cpath, "expected an array");
    lc.voltage_curve.clear();
    for (std::size_t i = 0; i < curve->size(); ++i) {
      const std::string ipath = cpath + "[" + std::to_string(i) + "]";
      VoltagePoint p{0.0, 0.0};
      ObjectReader pr((*curve)[i], ipath);
      pr.read("voltage", p.voltage);
      pr.read("phase_rad", p.phase);
      pr.finish();
      lc.voltage_curve.push_back(p);
    }
  }
  r.finish();
}

json array_json(const ArraySpec& a) {
  return {{"n_y", a.n_y},
          {"n_z", a.n_z},
          {"spacing_wavelengths", a.spacing},
          {"position_m", a.position},
          {"boresight", a.boresight}};
}

json link_json(const LinkParams& l) {
  return {{"k_factor", l.k_factor},
          {"pathloss_exponent", l.pathloss_exponent},
          {"ref_gain_db", l.ref_gain_db},
          {"ref_distance_m", l.ref_distance}};
}

void check(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

void validate_array(const ArraySpec& a, const std::string& path) {
  check(a.n_y >= 1, path + ".n_y", "must be at least 1");
  check(a.n_z >= 1, path + ".n_z", "must be at least 1");
  check(a.spacing > 0.0, path + ".spacing_wavelengths", "must be positive");
  check(a.boresight != Vec3{0.0, 0.0, 0.0}, path + ".boresight", "must be nonzero");
}

void validate_link(const LinkParams& l, const std::string& path) {
  check(l.k_factor >= 0.0, path + ".k_factor", "must be nonnegative");
  check(l.pathloss_exponent > 0.0, path + ".pathloss_exponent", "must be positive");
  check(l.ref_distance > 0.0, path + ".ref_distance_m", "must be positive");
}

}  // namespace

double ScenarioConfig::noise_power() const {
  const double dbm = noise_psd_dbm_hz + 10.0 * std::log10(bandwidth) + noise_figure_db;
  return db_to_linear(dbm) * 1e-3;
}

double ScenarioConfig::tx_power() const { return db_to_linear(tx_power_dbm) * 1e-3; }

double ScenarioConfig::snr_threshold() const { return db_to_linear(snr_threshold_db); }

std::vector<AngleTuple> ScenarioConfig::user_angles() const {
  std::vector<AngleTuple> out;
  for (const auto& d : user_directions) out.push_back(d.radians());
  return out;
}

void ScenarioConfig::validate() const {
  check(carrier_freq > 0.0, "radio.carrier_freq_hz", "must be positive");
  check(bandwidth > 0.0, "radio.bandwidth_hz", "must be positive");
  check(std::isfinite(noise_psd_dbm_hz), "radio.noise_psd_dbm_hz", "must be finite");
  check(std::isfinite(noise_figure_db), "radio.noise_figure_db", "must be finite");
  check(std::isfinite(tx_power_dbm), "radio.tx_power_dbm", "must be finite");
  validate_array(bs_array, "bs_array");
  validate_array(ris_array, "ris_array");
  check(!user_directions.empty(), "users.directions_deg", "needs at least one user");
  for (std::size_t k = 0; k < user_directions.size(); ++k) {
    const auto& d = user_directions[k];
    const std::string path = "users.directions_deg[" + std::to_string(k) + "]";
    check(d.elevation >= -90.0 && d.elevation <= 90.0, path + ".elevation", "must lie in [-90, 90]");
    check(d.azimuth > -180.0 && d.azimuth <= 180.0, path + ".azimuth", "must lie in (-180, 180]");
  }
  check(user_range_m > 0.0, "users.range_m", "must be positive");
  validate_link(link_bs_ue, "links.bs_ue");
  validate_link(link_bs_ris, "links.bs_ris");
  validate_link(link_ris_ue, "links.ris_ue");
  check(blockage >= 0.0 && blockage <= 1.0, "blockage", "must lie in [0, 1]");
  check(std::isfinite(snr_threshold_db), "snr_threshold_db", "must be finite");
  try {
    lc.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("lc", e.what());
  }
  check(optimizer.alpha > 0.0 && optimizer.alpha < 1.0, "optimizer.alpha", "must lie in (0, 1)");
  check(optimizer.i_max >= 1, "optimizer.i_max", "must be at least 1");
  check(optimizer.delta > 0.0 && optimizer.delta < kPi, "optimizer.delta_rad", "must lie in (0, pi)");
  check(optimizer.lambda_init >= 0.0, "optimizer.lambda_init", "must be nonnegative (0 = automatic)");
  check(optimizer.line_search_points >= 2, "optimizer.line_search_points", "must be at least 2");
  check(optimizer.c_plus >= 0.0, "optimizer.c_plus", "must be nonnegative (0 = automatic)");
  check(optimizer.c_minus >= 0.0, "optimizer.c_minus", "must be nonnegative (0 = automatic)");
  check(simulation.dt > 0.0, "simulation.dt_s", "must be positive");
  check(simulation.slot >= simulation.dt, "simulation.slot_s", "must be at least dt");
  check(simulation.trace_cycles >= 1, "simulation.trace_cycles", "must be at least 1");
  try {
    parse_ts_grid(simulation.ts_grid);
  } catch (const ConfigError& e) {
    throw ConfigError("simulation.ts_grid_ms", e.what());
  }
  check(!seeds.empty(), "seeds", "needs at least one seed");
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
  if (blank) return cfg;

  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }

  ObjectReader r(root, "");
  if (const json* radio = r.child("radio")) {
    ObjectReader rr(*radio, "radio");
    rr.read("carrier_freq_hz", cfg.carrier_freq);
    rr.read("bandwidth_hz", cfg.bandwidth);
    rr.read("noise_psd_dbm_hz", cfg.noise_psd_dbm_hz);
    rr.read("noise_figure_db", cfg.noise_figure_db);
    rr.read("tx_power_dbm", cfg.tx_power_dbm);
    rr.finish();
  }
  if (const json* a = r.child("bs_array")) read_array(*a, "bs_array", cfg.bs_array);
  if (const json* a = r.child("ris_array")) read_array(*a, "ris_array", cfg.ris_array);
  if (const json* users = r.child("users")) {
    ObjectReader ur(*users, "users");
    if (const json* dirs = ur.child("directions_deg")) {
      const std::string dpath = "users.directions_deg";
      if (!dirs->is_array()) throw ConfigError(dpath, "expected an array");
      cfg.user_directions.clear();
      for (std::size_t i = 0; i < dirs->size(); ++i) {
        DirectionDeg d;
        ObjectReader dr((*dirs)[i], dpath + "[" + std::to_string(i) + "]");
        dr.read("elevation", d.elevation);
        dr.read("azimuth", d.azimuth);
        dr.finish();
        cfg.user_directions.push_back(d);
      }
    }
    ur.read("range_m", cfg.user_range_m);
    ur.finish();
  }
  if (const json* links = r.child("links")) {
    ObjectReader lr(*links, "links");
    if (const json* l = lr.child("bs_ue")) read_link(*l, "links.bs_ue", cfg.link_bs_ue);
    if (const json* l = lr.child("bs_ris")) read_link(*l, "links.bs_ris", cfg.link_bs_ris);
    if (const json* l = lr.child("ris_ue")) read_link(*l, "links.ris_ue", cfg.link_ris_ue);
    lr.finish();
  }
  r.read("blockage", cfg.blockage);
  r.read("snr_threshold_db", cfg.snr_threshold_db);
  if (const json* lc = r.child("lc")) read_lc(*lc, "lc", cfg.lc);
  if (const json* opt = r.child("optimizer")) {
    ObjectReader orr(*opt, "optimizer");
    orr.read("alpha", cfg.optimizer.alpha);
    orr.read("i_max", cfg.optimizer.i_max);
    orr.read("delta_rad", cfg.optimizer.delta);
    orr.read("lambda_init", cfg.optimizer.lambda_init);
    orr.read("line_search_points", cfg.optimizer.line_search_points);
    orr.read("c_plus", cfg.optimizer.c_plus);
    orr.read("c_minus", cfg.optimizer.c_minus);
    orr.finish();
  }
  if (const json* sim = r.child("simulation")) {
    ObjectReader sr(*sim, "simulation");
    sr.read("dt_s", cfg.simulation.dt);
    sr.read("slot_s", cfg.simulation.slot);
    sr.read("trace_cycles", cfg.simulation.trace_cycles);
    sr.read("ts_grid_ms", cfg.simulation.ts_grid);
    sr.finish();
  }
  if (const json* seeds = r.child("seeds")) {
    if (!seeds->is_array()) throw ConfigError("seeds", "expected an array of integers");
    cfg.seeds.clear();
    for (std::size_t i = 0; i < seeds->size(); ++i) {
      const json& s = (*seeds)[i];
      if (!s.is_number_unsigned()) throw ConfigError("seeds[" + std::to_string(i) + "]", "expected a nonnegative integer");
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  r.finish();
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ScenarioConfig& c) {
  json dirs = json::array();
  for (const auto& d : c.user_directions) dirs.push_back({{"elevation", d.elevation}, {"azimuth", d.azimuth}});
  json curve = json::array();
  for (const auto& p : c.lc.voltage_curve) curve.push_back({{"voltage", p.voltage}, {"phase_rad", p.phase}});

  json root;
  root["radio"] = {{"carrier_freq_hz", c.carrier_freq},
                   {"bandwidth_hz", c.bandwidth},
                   {"noise_psd_dbm_hz", c.noise_psd_dbm_hz},
                   {"noise_figure_db", c.noise_figure_db},
                   {"tx_power_dbm", c.tx_power_dbm}};
  root["bs_array"] = array_json(c.bs_array);
  root["ris_array"] = array_json(c.ris_array);
  root["users"] = {{"directions_deg", dirs}, {"range_m", c.user_range_m}};
  root["links"] = {{"bs_ue", link_json(c.link_bs_ue)},
                   {"bs_ris", link_json(c.link_bs_ris)},
                   {"ris_ue", link_json(c.link_ris_ue)}};
  root["blockage"] = c.blockage;
  root["snr_threshold_db"] = c.snr_threshold_db;
  root["lc"] = {{"tau_plus_s", c.lc.tau_plus},
                {"tau_minus_s", c.lc.tau_minus},
                {"omega_max_rad", c.lc.omega_max},
                {"phase_clamp_eps_rad", c.lc.phase_clamp_eps},
                {"voltage_curve", curve}};
  root["optimizer"] = {{"alpha", c.optimizer.alpha},
                       {"i_max", c.optimizer.i_max},
                       {"delta_rad", c.optimizer.delta},
                       {"lambda_init", c.optimizer.lambda_init},
                       {"line_search_points", c.optimizer.line_search_points},
                       {"c_plus", c.optimizer.c_plus},
                       {"c_minus", c.optimizer.c_minus}};
  root["simulation"] = {{"dt_s", c.simulation.dt},
                        {"slot_s", c.simulation.slot},
                        {"trace_cycles", c.simulation.trace_cycles},
                        {"ts_grid_ms", c.simulation.ts_grid}};
  root["seeds"] = c.seeds;
  return root.dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> TsGrid::values_s() const {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double ms = start_ms + i * step_ms;
    if (ms > stop_ms + 1e-9 * step_ms) break;
    out.push_back(ms * 1e-3);
  }
  return out;
}

TsGrid parse_ts_grid(const std::string& spec) {
  TsGrid g{};
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &g.start_ms, &g.stop_ms, &g.step_ms, &tail) != 3) {
    throw ConfigError("ts-grid", "expected start:stop:step in milliseconds, got '" + spec + "'");
  }
  if (!(g.start_ms > 0.0) || !(g.step_ms > 0.0) || !(g.stop_ms >= g.start_ms)) {
    throw ConfigError("ts-grid", "need 0 < start <= stop and step > 0");
  }
  return g;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& spec) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    unsigned long long a = 0, b = 0;
    char tail = 0;
    if (std::sscanf(item.c_str(), "%llu-%llu%c", &a, &b, &tail) == 2 && b >= a) {
      for (unsigned long long s = a; s <= b; ++s) out.push_back(s);
    } else if (std::sscanf(item.c_str(), "%llu%c", &a, &tail) == 1) {
      out.push_back(a);
    } else {
      throw ConfigError("seeds", "cannot parse seed '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("seeds", "empty seed list");
  return out;
}

}  // namespace lcris
