#include "lcris/geometry_channel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <string>

#include "lcris/config.hpp"
#include "lcris/rng.hpp"

namespace lcris {
namespace {

// RNG stream labels per link.
constexpr std::uint64_t kStreamBsRis = 1;
constexpr std::uint64_t kStreamRisUser = 100;
constexpr std::uint64_t kStreamBsUser = 200;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

struct LocalFrame {
  Vec3 ex, ey, ez;
};

LocalFrame frame_for(const Vec3& boresight) {
  const double len = norm(boresight);
  if (!(len > 0.0)) throw DegenerateGeometry("array boresight must be nonzero");
  const Vec3 ex = scaled(boresight, 1.0 / len);
  Vec3 up{0.0, 0.0, 1.0};
  if (norm(cross(ex, up)) < 1e-9) up = {0.0, 1.0, 0.0};  // boresight along the vertical
  const double proj = dot(up, ex);
  Vec3 ez{up[0] - proj * ex[0], up[1] - proj * ex[1], up[2] - proj * ex[2]};
  ez = scaled(ez, 1.0 / norm(ez));
  return {ex, cross(ez, ex), ez};
}

CVector conj_row(const CMatrix& m) {
  CVector out(m.cols());
  for (std::size_t i = 0; i < m.cols(); ++i) out[i] = std::conj(m(0, i));
  return out;
}

}  // namespace

void ArraySpec::validate() const {
  if (n_y < 1 || n_z < 1) throw InvalidParameter("array needs at least one element per axis");
  if (!(spacing > 0.0)) throw InvalidParameter("array spacing must be positive");
  if (!(norm(boresight) > 0.0)) throw InvalidParameter("array boresight must be nonzero");
}

void LinkParams::validate() const {
  if (!(k_factor >= 0.0)) throw InvalidParameter("k_factor must be nonnegative");
  if (!(pathloss_exponent > 0.0)) throw InvalidParameter("pathloss_exponent must be positive");
  if (!(ref_distance > 0.0)) throw InvalidParameter("ref_distance must be positive");
  if (!std::isfinite(ref_gain_db)) throw InvalidParameter("ref_gain_db must be finite");
}

bool LinkParams::pure_los() const { return k_factor >= kLosKFactor; }

double ChannelSet::bs_ris_nlos_residual() const {
  double diff = 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < h_bs_ris.rows(); ++r) {
    for (std::size_t c = 0; c < h_bs_ris.cols(); ++c) {
      const cplx los = bs_ris_los_amplitude * ris_steering[r] * std::conj(bs_steering[c]);
      diff += std::norm(h_bs_ris(r, c) - los);
      total += std::norm(h_bs_ris(r, c));
    }
  }
  return total > 0.0 ? std::sqrt(diff / total) : 0.0;
}

bool ChannelSet::direct_blocked(std::size_t user) const {
  const auto& h = h_direct.at(user);
  return std::all_of(h.begin(), h.end(), [](const cplx& v) { return v == cplx{}; });
}

CVector steering_vector(const ArraySpec& array, const AngleTuple& angles) {
  array.validate();
  const double u = std::sin(angles.azimuth) * std::cos(angles.elevation);
  const double v = std::sin(angles.elevation);
  CVector a(array.size());
  for (std::size_t p = 0; p < array.n_y; ++p) {
    for (std::size_t q = 0; q < array.n_z; ++q) {
      const double phase = kTwoPi * array.spacing * (static_cast<double>(p) * u + static_cast<double>(q) * v);
      a[p * array.n_z + q] = {std::cos(phase), std::sin(phase)};
    }
  }
  return a;
}

double distance_between(const Vec3& a, const Vec3& b) {
  return norm(Vec3{b[0] - a[0], b[1] - a[1], b[2] - a[2]});
}

AngleTuple angles_between(const Vec3& from_pos, const Vec3& to_pos, const Vec3& boresight) {
  const Vec3 d{to_pos[0] - from_pos[0], to_pos[1] - from_pos[1], to_pos[2] - from_pos[2]};
  const double len = norm(d);
  if (!(len > 1e-12)) throw DegenerateGeometry("coincident positions have no direction");
  const LocalFrame f = frame_for(boresight);
  const double lx = dot(d, f.ex) / len;
  const double ly = dot(d, f.ey) / len;
  const double lz = dot(d, f.ez) / len;
  AngleTuple out;
  out.elevation = std::asin(std::clamp(lz, -1.0, 1.0));
  out.azimuth = std::atan2(ly, lx);
  if (out.azimuth <= -kPi) out.azimuth = kPi;
  return out;
}

Vec3 direction_from_angles(const AngleTuple& angles, const Vec3& boresight) {
  const LocalFrame f = frame_for(boresight);
  const double lx = std::cos(angles.elevation) * std::cos(angles.azimuth);
  const double ly = std::cos(angles.elevation) * std::sin(angles.azimuth);
  const double lz = std::sin(angles.elevation);
  Vec3 out{};
  for (int i = 0; i < 3; ++i) out[i] = lx * f.ex[i] + ly * f.ey[i] + lz * f.ez[i];
  return out;
}

double pathloss_gain(const LinkParams& link, double distance) {
  link.validate();
  if (!(distance > 0.0)) throw InvalidParameter("distance must be positive");
  return db_to_linear(link.ref_gain_db) * std::pow(distance / link.ref_distance, -link.pathloss_exponent);
}

CMatrix rician_channel(std::uint64_t seed, const LinkParams& link, const ArraySpec& tx,
                       const ArraySpec& rx, const AngleTuple& aod, const AngleTuple& aoa,
                       double distance) {
  const double gain = pathloss_gain(link, distance);
  const double c = std::sqrt(gain);
  const bool los_only = link.pure_los();
  const double w_los = los_only ? 1.0 : std::sqrt(link.k_factor / (link.k_factor + 1.0));
  const double w_nlos = los_only ? 0.0 : std::sqrt(1.0 / (link.k_factor + 1.0));

  const CVector a_tx = steering_vector(tx, aod);
  const CVector a_rx = steering_vector(rx, aoa);
  CMatrix h(rx.size(), tx.size());
  Rng rng(seed);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t t = 0; t < h.cols(); ++t) {
      cplx v = w_los * c * a_rx[r] * std::conj(a_tx[t]);
      if (!los_only) v += w_nlos * rng.complex_normal(gain);
      h(r, t) = v;
    }
  }
  return h;
}

std::vector<Vec3> user_positions(const ScenarioConfig& config) {
  std::vector<Vec3> out;
  out.reserve(config.num_users());
  for (const auto& dir : config.user_angles()) {
    const Vec3 u = direction_from_angles(dir, config.ris_array.boresight);
    const Vec3& base = config.ris_array.position;
    out.push_back({base[0] + config.user_range_m * u[0], base[1] + config.user_range_m * u[1],
                   base[2] + config.user_range_m * u[2]});
  }
  return out;
}

ChannelSet build_scenario_channels(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const ArraySpec& bs = config.bs_array;
  const ArraySpec& ris = config.ris_array;
  const ArraySpec single{};

  ChannelSet set;
  const double d_bs_ris = distance_between(bs.position, ris.position);
  set.bs_aod = angles_between(bs.position, ris.position, bs.boresight);
  set.ris_aoa = angles_between(ris.position, bs.position, ris.boresight);
  set.h_bs_ris = rician_channel(derive_seed(seed, kStreamBsRis), config.link_bs_ris, bs, ris, set.bs_aod,
                                set.ris_aoa, d_bs_ris);
  set.bs_steering = steering_vector(bs, set.bs_aod);
  set.ris_steering = steering_vector(ris, set.ris_aoa);
  const LinkParams& lbr = config.link_bs_ris;
  const double w_los = lbr.pure_los() ? 1.0 : std::sqrt(lbr.k_factor / (lbr.k_factor + 1.0));
  set.bs_ris_los_amplitude = w_los * std::sqrt(pathloss_gain(lbr, d_bs_ris));

  const auto users = user_positions(config);
  for (std::size_t k = 0; k < users.size(); ++k) {
    const Vec3& pos = users[k];
    if (distance_between(pos, ris.position) < 1e-9 || distance_between(pos, bs.position) < 1e-9) {
      throw DegenerateGeometry("user " + std::to_string(k + 1) + " is co-located with the BS or RIS");
    }
    const AngleTuple aod = angles_between(ris.position, pos, ris.boresight);
    set.ris_aod.push_back(aod);
    const CMatrix row = rician_channel(derive_seed(seed, kStreamRisUser + k), config.link_ris_ue, ris,
                                       single, aod, AngleTuple{}, distance_between(ris.position, pos));
    set.h_ris_user.push_back(conj_row(row));

    if (config.blockage == 0.0) {
      set.h_direct.emplace_back(bs.size(), cplx{});
    } else {
      const CMatrix d = rician_channel(derive_seed(seed, kStreamBsUser + k), config.link_bs_ue, bs,
                                       single, angles_between(bs.position, pos, bs.boresight),
                                       AngleTuple{}, distance_between(bs.position, pos));
      CVector h = conj_row(d);
      for (auto& v : h) v *= config.blockage;
      set.h_direct.push_back(std::move(h));
    }
  }
  return set;
}

void write_channel_csv(std::ostream& os, const ChannelSet& channels) {
  const auto old_precision = os.precision();
  os << std::setprecision(17);
  os << "link,user,row,col,re,im\n";
  for (std::size_t r = 0; r < channels.h_bs_ris.rows(); ++r) {
    for (std::size_t c = 0; c < channels.h_bs_ris.cols(); ++c) {
      const cplx v = channels.h_bs_ris(r, c);
      os << "bs_ris,0," << r << ',' << c << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
  for (std::size_t k = 0; k < channels.num_users(); ++k) {
    for (std::size_t n = 0; n < channels.h_ris_user[k].size(); ++n) {
      const cplx v = channels.h_ris_user[k][n];
      os << "ris_user," << k + 1 << ',' << n << ",0," << v.real() << ',' << v.imag() << '\n';
    }
    for (std::size_t n = 0; n < channels.h_direct[k].size(); ++n) {
      const cplx v = channels.h_direct[k][n];
      os << "bs_user," << k + 1 << ',' << n << ",0," << v.real() << ',' << v.imag() << '\n';
    }
  }
  os.precision(old_precision);
}

}  // namespace lcris
