#pragma once

// Uniform planar arrays, link geometry and Rician channel synthesis for the
// BS -> RIS -> user downlink.
//
// Array convention. An array's local frame has x along the boresight, z along
// the world "up" axis projected orthogonal to the boresight, and y = z cross x.
// Element (p, q) sits at (0, p*d, q*d) wavelengths, p < n_y, q < n_z, and is
// stored at index n = p*n_z + q. For a direction with elevation theta (angle
// above the local x-y plane) and azimuth phi (measured from x toward y), the
// steering entry is exp(+j*2*pi*d*(p*sin(phi)*cos(theta) + q*sin(theta))).

#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include "lcris/common.hpp"

namespace lcris {

using Vec3 = std::array<double, 3>;

struct ArraySpec {
  std::size_t n_y = 1;
  std::size_t n_z = 1;
  double spacing = 0.5;  // wavelengths
  Vec3 position{0.0, 0.0, 0.0};
  Vec3 boresight{1.0, 0.0, 0.0};

  std::size_t size() const { return n_y * n_z; }
  void validate() const;

  bool operator==(const ArraySpec&) const = default;
};

struct AngleTuple {
  double elevation = 0.0;  // theta, [-pi/2, pi/2]
  double azimuth = 0.0;    // phi, (-pi, pi]

  bool operator==(const AngleTuple&) const = default;
};

struct LinkParams {
  double k_factor = 0.0;
  double pathloss_exponent = 2.0;
  double ref_gain_db = -61.0;
  double ref_distance = 1.0;  // m

  void validate() const;
  bool pure_los() const;

  bool operator==(const LinkParams&) const = default;
};

/// K-factors at or above this are treated as a pure LOS link.
inline constexpr double kLosKFactor = 1e12;

struct ChannelSet {
  std::vector<CVector> h_direct;     // per user, length N_t
  CMatrix h_bs_ris;                  // N x N_t
  std::vector<CVector> h_ris_user;   // per user, length N
  AngleTuple bs_aod;                 // BS -> RIS, in the BS frame
  AngleTuple ris_aoa;                // direction of the BS, in the RIS frame
  std::vector<AngleTuple> ris_aod;   // RIS -> user k, in the RIS frame
  CVector bs_steering;               // a_BS(bs_aod)
  CVector ris_steering;              // a_RIS(ris_aoa)
  double bs_ris_los_amplitude = 0.0; // sqrt(K/(K+1)) * c of the BS-RIS link

  std::size_t num_users() const { return h_ris_user.size(); }
  std::size_t num_elements() const { return h_bs_ris.rows(); }
  std::size_t num_bs_antennas() const { return h_bs_ris.cols(); }

  /// Relative Frobenius residual of H_t against its LOS component.
  double bs_ris_nlos_residual() const;
  bool direct_blocked(std::size_t user) const;

  bool operator==(const ChannelSet&) const = default;
};

/// Steering vector of length n_y*n_z; every entry has unit modulus.
CVector steering_vector(const ArraySpec& array, const AngleTuple& angles);

/// Direction from from_pos to to_pos expressed in the local frame of an array with the given boresight.
AngleTuple angles_between(const Vec3& from_pos, const Vec3& to_pos, const Vec3& boresight);

/// World-frame unit vector for a direction given in an array's local frame.
Vec3 direction_from_angles(const AngleTuple& angles, const Vec3& boresight);

double distance_between(const Vec3& a, const Vec3& b);

/// Large-scale power gain 10^(beta/10) * (d/d0)^(-eta).
double pathloss_gain(const LinkParams& link, double distance);

/// Rician MIMO channel, rx.size() x tx.size():
///   sqrt(K/(K+1)) * c * a_rx a_tx^H + sqrt(1/(K+1)) * H_nLOS,
/// with c^2 = pathloss_gain and H_nLOS entries CN(0, pathloss_gain).
CMatrix rician_channel(std::uint64_t seed, const LinkParams& link, const ArraySpec& tx,
                       const ArraySpec& rx, const AngleTuple& aod, const AngleTuple& aoa,
                       double distance);

struct ScenarioConfig;

/// Channels for every user of a scenario. Draws come from per-link RNG streams of `seed`.
ChannelSet build_scenario_channels(const ScenarioConfig& config, std::uint64_t seed);

/// Users' world positions implied by the scenario's RIS-frame directions and range.
std::vector<Vec3> user_positions(const ScenarioConfig& config);

/// Writes one row per complex entry: link,user,row,col,re,im.
void write_channel_csv(std::ostream& os, const ChannelSet& channels);

}  // namespace lcris
