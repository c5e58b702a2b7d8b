// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"

namespace cbir::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &scalar_kernels();
    case Isa::avx2:
#if defined(CBIR_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return &detail::avx2_kernels();
      }
#endif
      return nullptr;
    case Isa::neon:
#if defined(CBIR_HAVE_NEON)
      return &detail::neon_kernels();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (kernels_for(isa)) out.push_back(isa);
  }
  return out;
}

namespace {

const KernelTable& resolve() {
  if (const char* env = std::getenv("CBIR_ISA")) {
    const std::string want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == to_string(isa)) {
        if (const auto* t = kernels_for(isa)) return *t;
      }
    }
  }
  const auto isas = available_isas();
  return *kernels_for(isas.back());
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace cbir::simd
