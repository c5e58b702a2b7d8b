// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cbir/simd.hpp"

namespace cbir::simd::detail {

#if defined(CBIR_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

#if defined(CBIR_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

}  // namespace cbir::simd::detail
