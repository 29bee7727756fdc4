// AVX2 + FMA kernel variants. This file is compiled with -mavx2 -mfma and its
// functions are only reached through the dispatch table after a CPUID check.

#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace lcris::simd {
namespace {

// Two interleaved complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// a * b
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_sw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

// conj(a) * b
inline __m256d cmul_conj(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_sw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmsubadd_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

inline cplx reduce_complex(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return {lanes[0] + lanes[2], lanes[1] + lanes[3]};
}

inline double reduce_real(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

cplx dotu_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, cmul(load2(a + i), load2(b + i)));
    acc1 = _mm256_add_pd(acc1, cmul(load2(a + i + 2), load2(b + i + 2)));
  }
  for (; i + 2 <= n; i += 2) acc0 = _mm256_add_pd(acc0, cmul(load2(a + i), load2(b + i)));
  cplx sum = reduce_complex(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

cplx dotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, cmul_conj(load2(a + i), load2(b + i)));
    acc1 = _mm256_add_pd(acc1, cmul_conj(load2(a + i + 2), load2(b + i + 2)));
  }
  for (; i + 2 <= n; i += 2) acc0 = _mm256_add_pd(acc0, cmul_conj(load2(a + i), load2(b + i)));
  cplx sum = reduce_complex(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

void conj_mul_avx2(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out + i, cmul_conj(load2(a + i), load2(b + i)));
  for (; i < n; ++i) out[i] = std::conj(a[i]) * b[i];
}

void scale_conj_avx2(const cplx* a, cplx s, cplx* out, std::size_t n) {
  const __m256d sv = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out + i, cmul_conj(load2(a + i), sv));
  for (; i < n; ++i) out[i] = s * std::conj(a[i]);
}

double abs_sum_avx2(const cplx* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = load2(a + i);
    const __m256d y = load2(a + i + 2);
    // [|a0|^2, |a2|^2, |a1|^2, |a3|^2]
    const __m256d sq = _mm256_hadd_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y));
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
  }
  double sum = reduce_real(acc);
  for (; i < n; ++i) sum += std::sqrt(a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  return sum;
}

double weighted_sq_diff_avx2(const double* cur, const double* prev, double c_plus, double c_minus,
                             std::size_t n) {
  const __m256d cp = _mm256_set1_pd(c_plus);
  const __m256d cm = _mm256_set1_pd(c_minus);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(cur + i), _mm256_loadu_pd(prev + i));
    const __m256d rising = _mm256_cmp_pd(d, zero, _CMP_GE_OQ);
    const __m256d t = _mm256_mul_pd(_mm256_blendv_pd(cm, cp, rising), d);
    acc = _mm256_fmadd_pd(t, t, acc);
  }
  double sum = reduce_real(acc);
  for (; i < n; ++i) {
    const double d = cur[i] - prev[i];
    const double t = (d >= 0.0 ? c_plus : c_minus) * d;
    sum += t * t;
  }
  return sum;
}

constexpr KernelTable kAvx2Table{
    Isa::avx2,        "avx2",        dotu_avx2,            dotc_avx2, conj_mul_avx2,
    scale_conj_avx2,  abs_sum_avx2,  weighted_sq_diff_avx2,
};

}  // namespace

const KernelTable& avx2_table_unchecked() { return kAvx2Table; }

}  // namespace lcris::simd
