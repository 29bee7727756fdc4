#include "lcris/precoder.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lcris/kernels.hpp"

namespace lcris {
namespace {

CVector phase_rotations(const PhaseVector& phases) {
  CVector s(phases.size());
  for (std::size_t n = 0; n < phases.size(); ++n) s[n] = std::polar(1.0, phases[n]);
  return s;
}

void check_user(const ChannelSet& channels, std::size_t user) {
  if (user >= channels.num_users()) throw ShapeError("user index out of range");
}

}  // namespace

double Beamformer::power() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0,
                         [](double acc, const cplx& w) { return acc + std::norm(w); });
}

SnrQuadratic::SnrQuadratic(CVector m, double scale, cplx direct)
    : m_(std::move(m)), scale_(scale), direct_(direct) {
  if (!(scale_ >= 0.0)) throw InvalidParameter("quadratic-form scale must be nonnegative");
}

cplx SnrQuadratic::amplitude(const PhaseVector& phases) const {
  if (phases.size() != m_.size()) throw ShapeError("phase vector length does not match the quadratic form");
  const CVector s = phase_rotations(phases);
  return direct_ + simd::dotu(m_, s);
}

double SnrQuadratic::snr(const PhaseVector& phases) const { return scale_ * std::norm(amplitude(phases)); }

CVector SnrQuadratic::z(const PhaseVector& phases) const {
  CVector out(m_.size());
  simd::scale_conj(m_, scale_ * amplitude(phases), out);
  return out;
}

double SnrQuadratic::cophasing_bound() const {
  const double amp = std::abs(direct_) + simd::abs_sum(m_);
  return scale_ * amp * amp;
}

Beamformer matched_filter(std::span<const cplx> h_eff, double p_t) {
  if (!(p_t > 0.0)) throw InvalidParameter("transmit power must be positive");
  const double norm2 = std::real(simd::dotc(h_eff, h_eff));
  if (!(norm2 > 0.0)) throw DegenerateChannel("matched filter of a zero channel");
  const double gain = std::sqrt(p_t / norm2);
  Beamformer q{CVector(h_eff.begin(), h_eff.end()), p_t};
  for (auto& w : q.weights) w *= gain;
  return q;
}

Beamformer los_beamformer(const ArraySpec& bs_array, const AngleTuple& bs_aod, double p_t) {
  const CVector a = steering_vector(bs_array, bs_aod);
  return matched_filter(a, p_t);
}

CVector effective_channel(const ChannelSet& channels, std::size_t user, const PhaseVector& phases) {
  check_user(channels, user);
  const std::size_t n = channels.num_elements();
  const std::size_t nt = channels.num_bs_antennas();
  if (phases.size() != n) throw ShapeError("phase vector length does not match the RIS size");
  // h_eff = h_d + H_t^H diag(exp(-j*omega)) h_r
  CVector h = channels.h_direct[user];
  if (h.size() != nt) throw ShapeError("direct channel length does not match the BS array");
  const CVector& hr = channels.h_ris_user[user];
  for (std::size_t r = 0; r < n; ++r) {
    const cplx coeff = std::polar(1.0, -phases[r]) * hr[r];
    const auto row = channels.h_bs_ris.row(r);
    for (std::size_t t = 0; t < nt; ++t) h[t] += std::conj(row[t]) * coeff;
  }
  return h;
}

double snr_direct(const ChannelSet& channels, std::size_t user, const PhaseVector& phases,
                  const Beamformer& q, double noise_power) {
  check_user(channels, user);
  if (q.weights.size() != channels.num_bs_antennas()) throw ShapeError("beamformer length mismatch");
  if (phases.size() != channels.num_elements()) throw ShapeError("phase vector length mismatch");
  if (!(noise_power > 0.0)) throw InvalidParameter("noise power must be positive");
  // h_d^H q + sum_n conj(h_r[n]) e^{j omega_n} (H_t q)[n]
  CVector g(channels.num_elements());
  simd::matvec(channels.h_bs_ris, q.weights, g);
  const CVector s = phase_rotations(phases);
  CVector reflected(g.size());
  simd::conj_mul(channels.h_ris_user[user], g, reflected);
  const cplx y = simd::dotc(channels.h_direct[user], q.weights) + simd::dotu(reflected, s);
  return std::norm(y) / noise_power;
}

SnrQuadratic snr_quadratic_form(const ChannelSet& channels, std::size_t user, const Beamformer& q_los,
                                double noise_power) {
  check_user(channels, user);
  if (!(noise_power > 0.0)) throw InvalidParameter("noise power must be positive");
  if (!channels.direct_blocked(user)) {
    throw PreconditionError("LOS quadratic form requires a blocked direct channel");
  }
  const double residual = channels.bs_ris_nlos_residual();
  if (residual > kLosRegimeTolerance) {
    throw PreconditionError("LOS quadratic form requires a pure-LOS BS-RIS channel (nLOS residual " +
                            std::to_string(residual) + ")");
  }
  if (q_los.weights.size() != channels.bs_steering.size()) throw ShapeError("beamformer length mismatch");
  CVector m(channels.num_elements());
  simd::conj_mul(channels.h_ris_user[user], channels.ris_steering, m);
  const double c2 = channels.bs_ris_los_amplitude * channels.bs_ris_los_amplitude;
  const double scale = c2 * std::norm(simd::dotc(channels.bs_steering, q_los.weights)) / noise_power;
  return SnrQuadratic(std::move(m), scale);
}

SnrQuadratic effective_quadratic_form(const ChannelSet& channels, std::size_t user, const Beamformer& q,
                                      double noise_power) {
  check_user(channels, user);
  if (!(noise_power > 0.0)) throw InvalidParameter("noise power must be positive");
  if (q.weights.size() != channels.num_bs_antennas()) throw ShapeError("beamformer length mismatch");
  CVector g(channels.num_elements());
  simd::matvec(channels.h_bs_ris, q.weights, g);
  CVector m(g.size());
  simd::conj_mul(channels.h_ris_user[user], g, m);
  const cplx direct = simd::dotc(channels.h_direct[user], q.weights);
  return SnrQuadratic(std::move(m), 1.0 / noise_power, direct);
}

}  // namespace lcris
