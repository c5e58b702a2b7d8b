// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

namespace cbir::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

/// The data-parallel inner loops of the engine. Every entry point takes two
/// arrays of length n and accumulates in double precision.
struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_l2)(const double* a, const double* b, std::size_t n);
  double (*l1)(const double* a, const double* b, std::size_t n);
  double (*hassanat)(const double* a, const double* b, std::size_t n);
  double (*canberra)(const double* a, const double* b, std::size_t n);
};

/// Per-dimension Hassanat term, written exactly as the two-branch formula.
inline double hassanat_term(double a, double b) {
  const double lo = a < b ? a : b;
  const double hi = a < b ? b : a;
  if (lo >= 0.0) return 1.0 - (1.0 + lo) / (1.0 + hi);
  const double shift = std::abs(lo);
  return 1.0 - (1.0 + lo + shift) / (1.0 + hi + shift);
}

/// Per-dimension Canberra term with the 0/0 case defined as 0.
inline double canberra_term(double a, double b) {
  const double den = std::abs(a) + std::abs(b);
  if (den == 0.0) return 0.0;
  return std::abs(a - b) / den;
}

/// Reference implementations; the vector variants are tested against these.
const KernelTable& scalar_kernels();

/// Kernels for `isa`, or nullptr when that variant was not compiled in or the
/// running CPU does not support it.
const KernelTable* kernels_for(Isa isa);

/// ISAs usable on this machine, scalar first.
std::vector<Isa> available_isas();

/// The table used by the engine: the widest available variant, unless the
/// CBIR_ISA environment variable names another one ("scalar", "avx2",
/// "neon"). Resolved once on first call.
const KernelTable& active();

}  // namespace cbir::simd
