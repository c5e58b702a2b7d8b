// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "cbir/error.hpp"
#include "cbir/reduce.hpp"

namespace cbir {

std::vector<double> haar_level(std::span<const double> x) {
  if (x.empty()) throw DimensionError("Haar level of an empty vector");
  const std::size_t n = x.size();
  std::vector<double> out((n + 1) / 2);
  for (std::size_t i = 0; i + 1 < n; i += 2) out[i / 2] = (x[i] + x[i + 1]) / std::numbers::sqrt2;
  // Odd length: the last sample is paired with itself.
  if (n % 2 != 0) out.back() = 2.0 * x[n - 1] / std::numbers::sqrt2;
  return out;
}

std::vector<double> haar_reduce(std::span<const double> x, std::size_t levels) {
  if (levels < 1) throw SpecError("Haar reduction needs at least one level");
  std::vector<double> cur = haar_level(x);
  for (std::size_t l = 1; l < levels; ++l) cur = haar_level(cur);
  return cur;
}

}  // namespace cbir
