#pragma once

// Data-parallel inner loops used by the channel, precoder and optimizer code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2+FMA
// variant. The variant is picked once at first use from CPUID; setting the
// environment variable LCRIS_SIMD=scalar (or avx2) overrides the choice.
// Variants agree to rounding but not bit-for-bit, since the AVX2 reductions
// use a different summation order. A single process always uses one table, so
// outputs are reproducible run to run on the same machine.

#include <cstddef>
#include <span>
#include <vector>

#include "lcris/common.hpp"

namespace lcris::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  // sum_n a[n] * b[n]
  cplx (*dotu)(const cplx* a, const cplx* b, std::size_t n);
  // sum_n conj(a[n]) * b[n]
  cplx (*dotc)(const cplx* a, const cplx* b, std::size_t n);
  // out[n] = conj(a[n]) * b[n]
  void (*conj_mul)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  // out[n] = s * conj(a[n])
  void (*scale_conj)(const cplx* a, cplx s, cplx* out, std::size_t n);
  // sum_n |a[n]|
  double (*abs_sum)(const cplx* a, std::size_t n);
  // sum_n (c[n] * (cur[n] - prev[n]))^2, c[n] = c_plus if the difference is >= 0 else c_minus
  double (*weighted_sq_diff)(const double* cur, const double* prev, double c_plus, double c_minus,
                             std::size_t n);
};

const KernelTable& scalar_kernels();

/// AVX2 table, or nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

/// The table selected for this process.
const KernelTable& active();

// Span front-ends over the active table. Lengths must match.
cplx dotu(std::span<const cplx> a, std::span<const cplx> b);
cplx dotc(std::span<const cplx> a, std::span<const cplx> b);
void conj_mul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
void scale_conj(std::span<const cplx> a, cplx s, std::span<cplx> out);
double abs_sum(std::span<const cplx> a);
double weighted_sq_diff(std::span<const double> cur, std::span<const double> prev, double c_plus,
                        double c_minus);

/// y = A x.
void matvec(const CMatrix& a, std::span<const cplx> x, std::span<cplx> y);

}  // namespace lcris::simd
