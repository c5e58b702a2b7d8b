// SPDX-License-Identifier: Apache-2.0

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "cbir/error.hpp"
#include "cbir/reduce.hpp"
#include "fftw_planner.hpp"

namespace cbir {
namespace detail {

std::mutex& fftw_planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

}  // namespace detail

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface
// is. Plans are cached per length and live for the whole process. Estimate
// mode keeps the chosen algorithm, and therefore the rounding, independent
// of timing.
struct DctPlans {
  fftw_plan forward;  // REDFT10 (DCT-II)
  fftw_plan inverse;  // REDFT01 (DCT-III)
};

const DctPlans& plans_for(std::size_t n) {
  static std::map<std::size_t, DctPlans> cache;
  std::lock_guard lock(detail::fftw_planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> in(n), out(n);
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT;
  DctPlans p{fftw_plan_r2r_1d(len, in.data(), out.data(), FFTW_REDFT10, flags),
             fftw_plan_r2r_1d(len, in.data(), out.data(), FFTW_REDFT01, flags)};
  if (!p.forward || !p.inverse) throw Error("FFTW could not plan a DCT of length " + std::to_string(n));
  return cache.emplace(n, p).first->second;
}

}  // namespace

std::vector<double> dct_forward(std::span<const double> x) {
  if (x.empty()) throw DimensionError("DCT of an empty vector");
  const std::size_t n = x.size();
  std::vector<double> in(x.begin(), x.end()), out(n);
  fftw_execute_r2r(plans_for(n).forward, in.data(), out.data());
  // REDFT10 returns 2 * sum x_j cos(pi (2j+1) k / 2N).
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  out[0] *= scale / std::sqrt(2.0);
  for (std::size_t k = 1; k < n; ++k) out[k] *= scale;
  return out;
}

std::vector<double> dct_inverse(std::span<const double> coeffs) {
  if (coeffs.empty()) throw DimensionError("inverse DCT of an empty vector");
  const std::size_t n = coeffs.size();
  std::vector<double> in(coeffs.begin(), coeffs.end()), out(n);
  // REDFT01 computes Z_0 + 2 * sum_{j>=1} Z_j cos(pi j (2k+1) / 2N).
  in[0] /= std::sqrt(static_cast<double>(n));
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  for (std::size_t k = 1; k < n; ++k) in[k] *= scale;
  fftw_execute_r2r(plans_for(n).inverse, in.data(), out.data());
  return out;
}

std::vector<double> dct_keep(std::span<const double> coeffs, const DctSpec& spec) {
  if (!spec.keep) return {coeffs.begin(), coeffs.end()};
  const std::size_t keep = *spec.keep;
  if (keep < 1 || keep > coeffs.size()) {
    throw SpecError("cannot keep " + std::to_string(keep) + " of " + std::to_string(coeffs.size()) +
                    " DCT coefficients");
  }
  return {coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(keep)};
}

}  // namespace cbir
