#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace lcris::simd {
namespace {

bool cpu_supports_avx2() {
#if defined(LCRIS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select_table() {
  const KernelTable* avx2 = avx2_kernels();
  if (const char* env = std::getenv("LCRIS_SIMD")) {
    const std::string_view want{env};
    if (want == "scalar") return scalar_kernels();
    if (want == "avx2" && avx2 != nullptr) return *avx2;
  }
  return avx2 != nullptr ? *avx2 : scalar_kernels();
}

void check_len(std::size_t a, std::size_t b) {
  if (a != b) throw ShapeError("kernel operands differ in length");
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(LCRIS_HAVE_AVX2)
  static const bool supported = cpu_supports_avx2();
  return supported ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const KernelTable* t = avx2_kernels()) out.push_back(t);
  return out;
}

const KernelTable& active() {
  static const KernelTable& table = select_table();
  return table;
}

cplx dotu(std::span<const cplx> a, std::span<const cplx> b) {
  check_len(a.size(), b.size());
  return active().dotu(a.data(), b.data(), a.size());
}

cplx dotc(std::span<const cplx> a, std::span<const cplx> b) {
  check_len(a.size(), b.size());
  return active().dotc(a.data(), b.data(), a.size());
}

void conj_mul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  check_len(a.size(), b.size());
  check_len(a.size(), out.size());
  active().conj_mul(a.data(), b.data(), out.data(), a.size());
}

void scale_conj(std::span<const cplx> a, cplx s, std::span<cplx> out) {
  check_len(a.size(), out.size());
  active().scale_conj(a.data(), s, out.data(), a.size());
}

double abs_sum(std::span<const cplx> a) { return active().abs_sum(a.data(), a.size()); }

double weighted_sq_diff(std::span<const double> cur, std::span<const double> prev, double c_plus,
                        double c_minus) {
  check_len(cur.size(), prev.size());
  return active().weighted_sq_diff(cur.data(), prev.data(), c_plus, c_minus, cur.size());
}

void matvec(const CMatrix& a, std::span<const cplx> x, std::span<cplx> y) {
  check_len(a.cols(), x.size());
  check_len(a.rows(), y.size());
  const KernelTable& k = active();
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = k.dotu(a.row(r).data(), x.data(), x.size());
}

}  // namespace lcris::simd
