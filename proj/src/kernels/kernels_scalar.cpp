#include <cmath>

#include "kernels_internal.hpp"

namespace lcris::simd {
namespace {

cplx dotu_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

cplx dotc_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void conj_mul_scalar(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {a[i].real() * b[i].real() + a[i].imag() * b[i].imag(),
              a[i].real() * b[i].imag() - a[i].imag() * b[i].real()};
  }
}

void scale_conj_scalar(const cplx* a, cplx s, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {s.real() * a[i].real() + s.imag() * a[i].imag(),
              s.imag() * a[i].real() - s.real() * a[i].imag()};
  }
}

double abs_sum_scalar(const cplx* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::sqrt(a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  }
  return acc;
}

double weighted_sq_diff_scalar(const double* cur, const double* prev, double c_plus, double c_minus,
                               std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = cur[i] - prev[i];
    const double t = (d >= 0.0 ? c_plus : c_minus) * d;
    acc += t * t;
  }
  return acc;
}

constexpr KernelTable kScalarTable{
    Isa::scalar,        "scalar",         dotu_scalar,          dotc_scalar, conj_mul_scalar,
    scale_conj_scalar,  abs_sum_scalar,   weighted_sq_diff_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalarTable; }

}  // namespace lcris::simd
