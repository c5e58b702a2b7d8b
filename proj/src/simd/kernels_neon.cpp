// SPDX-License-Identifier: Apache-2.0
//
// AArch64 NEON variants. Advanced SIMD is mandatory on AArch64, so dispatch
// enables this table unconditionally when it is compiled in.

#include <arm_neon.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace cbir::simd::detail {
namespace {

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

template <class Lanes, class Tail>
double reduce(const double* a, const double* b, std::size_t n, Lanes lanes, Tail tail) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, lanes(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, lanes(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += tail(a[i], b[i]);
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  return reduce(
      a, b, n, [](float64x2_t x, float64x2_t y) { return vmulq_f64(x, y); },
      [](double x, double y) { return x * y; });
}

double squared_l2(const double* a, const double* b, std::size_t n) {
  return reduce(
      a, b, n,
      [](float64x2_t x, float64x2_t y) {
        const float64x2_t d = vsubq_f64(x, y);
        return vmulq_f64(d, d);
      },
      [](double x, double y) { return (x - y) * (x - y); });
}

double l1(const double* a, const double* b, std::size_t n) {
  return reduce(
      a, b, n, [](float64x2_t x, float64x2_t y) { return vabdq_f64(x, y); },
      [](double x, double y) { return std::abs(x - y); });
}

double hassanat(const double* a, const double* b, std::size_t n) {
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t zero = vdupq_n_f64(0.0);
  return reduce(
      a, b, n,
      [&](float64x2_t x, float64x2_t y) {
        const float64x2_t lo = vminq_f64(x, y);
        const float64x2_t hi = vmaxq_f64(x, y);
        const float64x2_t shift = vmaxq_f64(vnegq_f64(lo), zero);
        const float64x2_t num = vaddq_f64(vaddq_f64(one, lo), shift);
        const float64x2_t den = vaddq_f64(vaddq_f64(one, hi), shift);
        return vsubq_f64(one, vdivq_f64(num, den));
      },
      hassanat_tail);
}

double canberra(const double* a, const double* b, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  return reduce(
      a, b, n,
      [&](float64x2_t x, float64x2_t y) {
        const float64x2_t den = vaddq_f64(vabsq_f64(x), vabsq_f64(y));
        const float64x2_t ratio = vdivq_f64(vabdq_f64(x, y), den);
        const uint64x2_t is_zero = vceqq_f64(den, zero);
        return vbslq_f64(is_zero, zero, ratio);
      },
      canberra_tail);
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{Isa::neon, dot, squared_l2, l1, hassanat, canberra};
  return table;
}

}  // namespace cbir::simd::detail
