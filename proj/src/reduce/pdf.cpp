// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "cbir/error.hpp"
#include "cbir/reduce.hpp"

namespace cbir {

std::vector<double> pdf_reduce(std::span<const double> x, const PdfSpec& spec,
                               std::size_t* clamped) {
  if (spec.bins < 1) throw SpecError("PDF needs at least one bin");
  if (x.empty()) throw DimensionError("PDF of an empty vector");
  double lo, hi;
  if (spec.range) {
    std::tie(lo, hi) = *spec.range;
    if (!(lo < hi)) throw SpecError("PDF range needs lo < hi");
  } else {
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    lo = *mn;
    hi = *mx;
  }

  std::vector<double> counts(spec.bins, 0.0);
  std::size_t outside = 0;
  if (hi == lo) {
    counts[0] = static_cast<double>(x.size());
  } else {
    const double width = (hi - lo) / static_cast<double>(spec.bins);
    const double last = static_cast<double>(spec.bins - 1);
    for (double v : x) {
      if (v < lo || v > hi) ++outside;
      const double b = std::clamp(std::floor((v - lo) / width), 0.0, last);
      counts[static_cast<std::size_t>(b)] += 1.0;
    }
  }
  const double total = static_cast<double>(x.size());
  for (double& c : counts) c /= total;
  if (clamped) *clamped = outside;
  return counts;
}

}  // namespace cbir
