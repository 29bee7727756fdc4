#pragma once

#include "lcris/kernels.hpp"

namespace lcris::simd {

#if defined(LCRIS_HAVE_AVX2)
// Defined in kernels_avx2.cpp, which is the only translation unit built with -mavx2.
const KernelTable& avx2_table_unchecked();
#endif

}  // namespace lcris::simd
