#pragma once

// Transmit beamformers and the received SNR, both through the full cascaded
// channel and through the rank-one phase-only quadratic form.

#include <cstddef>

#include "lcris/common.hpp"
#include "lcris/geometry_channel.hpp"

namespace lcris {

struct Beamformer {
  CVector weights;          // q, length N_t
  double power_budget = 0;  // P_t, W

  double power() const;
};

/// SNR as a function of the RIS phases with the beamformer held fixed:
///
///   SNR(omega) = scale * |direct + sum_n m[n] * exp(j*omega[n])|^2.
///
/// Equivalently s^H M s (plus the direct-path terms) with M = scale * conj(m) m^T,
/// which is never formed. `direct` is zero when the BS-user path is blocked.
class SnrQuadratic {
 public:
  SnrQuadratic(CVector m, double scale, cplx direct = {});

  std::span<const cplx> m() const { return m_; }
  double scale() const { return scale_; }
  cplx direct() const { return direct_; }
  std::size_t size() const { return m_.size(); }

  /// direct + m^T s for s = exp(j*omega).
  cplx amplitude(const PhaseVector& phases) const;
  double snr(const PhaseVector& phases) const;

  /// z = M s (plus the direct-path term): z[n] = scale * conj(m[n]) * amplitude.
  /// Its modulus and argument give the per-element weights r and angles phi.
  CVector z(const PhaseVector& phases) const;

  /// scale * (|direct| + sum |m_n|)^2, the largest SNR any phase vector can reach.
  double cophasing_bound() const;

 private:
  CVector m_;
  double scale_;
  cplx direct_;
};

/// sqrt(P_t) * h_eff / ||h_eff||; SNR = P_t ||h_eff||^2 / noise.
Beamformer matched_filter(std::span<const cplx> h_eff, double p_t);

/// sqrt(P_t) * a_BS / ||a_BS||, the matched filter of the LOS BS-RIS link.
Beamformer los_beamformer(const ArraySpec& bs_array, const AngleTuple& bs_aod, double p_t);

/// h_eff^H = h_d^H + h_r^H diag(exp(j*omega)) H_t for user k.
CVector effective_channel(const ChannelSet& channels, std::size_t user, const PhaseVector& phases);

/// |h_eff^H q|^2 / noise with unit reflection amplitudes.
double snr_direct(const ChannelSet& channels, std::size_t user, const PhaseVector& phases,
                  const Beamformer& q, double noise_power);

/// Quadratic form of the LOS-dominant, blocked-direct regime:
///   m = diag(h_r^H) a_RIS,  scale = c^2 |a_BS^H q|^2 / noise,
/// which equals c^2 P_t ||a_BS||^2 / noise for q = q_LOS. Throws
/// PreconditionError when H_t has an nLOS part or the direct path is open.
SnrQuadratic snr_quadratic_form(const ChannelSet& channels, std::size_t user, const Beamformer& q_los,
                                double noise_power);

/// Exact quadratic form for any channel and fixed beamformer:
///   m = conj(h_r) o (H_t q),  direct = h_d^H q,  scale = 1 / noise.
SnrQuadratic effective_quadratic_form(const ChannelSet& channels, std::size_t user, const Beamformer& q,
                                      double noise_power);

/// Relative nLOS residual of H_t below which the LOS quadratic form is accepted.
inline constexpr double kLosRegimeTolerance = 1e-9;

}  // namespace lcris
