// SPDX-License-Identifier: Apache-2.0
//
// Compiled with -mavx2 -mfma. Nothing here may run before dispatch has
// confirmed AVX2 support on the host.

#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace cbir::simd::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

// Local copies of the scalar terms: the header's inline versions must not be
// instantiated under -mavx2, or the linker may hand them to scalar callers.
double hassanat_tail(double a, double b) {
  const double lo = a < b ? a : b;
  const double hi = a < b ? b : a;
  const double shift = lo < 0.0 ? -lo : 0.0;
  return 1.0 - (1.0 + lo + shift) / (1.0 + hi + shift);
}

double canberra_tail(double a, double b) {
  const double den = std::abs(a) + std::abs(b);
  return den == 0.0 ? 0.0 : std::abs(a - b) / den;
}

// Two independent accumulators of four lanes; the tail runs the scalar term.
template <class Lanes, class Tail>
double reduce(const double* a, const double* b, std::size_t n, Lanes lanes, Tail tail) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, lanes(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, lanes(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  if (i + 4 <= n) {
    acc0 = _mm256_add_pd(acc0, lanes(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += tail(a[i], b[i]);
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double squared_l2(const double* a, const double* b, std::size_t n) {
  return reduce(
      a, b, n,
      [](__m256d x, __m256d y) {
        const __m256d d = _mm256_sub_pd(x, y);
        return _mm256_mul_pd(d, d);
      },
      [](double x, double y) { return (x - y) * (x - y); });
}

double l1(const double* a, const double* b, std::size_t n) {
  return reduce(
      a, b, n, [](__m256d x, __m256d y) { return vabs(_mm256_sub_pd(x, y)); },
      [](double x, double y) { return std::abs(x - y); });
}

double hassanat(const double* a, const double* b, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  return reduce(
      a, b, n,
      [&](__m256d x, __m256d y) {
        const __m256d lo = _mm256_min_pd(x, y);
        const __m256d hi = _mm256_max_pd(x, y);
        // |min| when min < 0, else 0: folds both branches into one expression.
        const __m256d shift = _mm256_max_pd(_mm256_sub_pd(zero, lo), zero);
        const __m256d num = _mm256_add_pd(_mm256_add_pd(one, lo), shift);
        const __m256d den = _mm256_add_pd(_mm256_add_pd(one, hi), shift);
        return _mm256_sub_pd(one, _mm256_div_pd(num, den));
      },
      hassanat_tail);
}

double canberra(const double* a, const double* b, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  return reduce(
      a, b, n,
      [&](__m256d x, __m256d y) {
        const __m256d den = _mm256_add_pd(vabs(x), vabs(y));
        const __m256d ratio = _mm256_div_pd(vabs(_mm256_sub_pd(x, y)), den);
        const __m256d nonzero = _mm256_cmp_pd(den, zero, _CMP_NEQ_OQ);
        return _mm256_and_pd(nonzero, ratio);
      },
      canberra_tail);
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::avx2, dot, squared_l2, l1, hassanat, canberra};
  return table;
}

}  // namespace cbir::simd::detail
