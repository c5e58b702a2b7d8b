// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "cbir/error.hpp"
#include "cbir/reduce.hpp"

namespace cbir {

ZScoreParams zscore_fit(const FeatureSet& train) {
  if (train.size() < 2) throw SpecError("z-score needs at least two training vectors");
  const std::size_t d = train.dim();
  const double n = static_cast<double>(train.size());
  ZScoreParams p{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < train.size(); ++i) {
    auto r = train.row(i);
    for (std::size_t j = 0; j < d; ++j) p.mean[j] += r[j];
  }
  for (double& m : p.mean) m /= n;
  // Second pass on centred values.
  for (std::size_t i = 0; i < train.size(); ++i) {
    auto r = train.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double c = r[j] - p.mean[j];
      p.stddev[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    bool constant = true;
    const double first = train.row(0)[j];
    for (std::size_t i = 1; i < train.size() && constant; ++i) constant = train.row(i)[j] == first;
    // A constant column can leave rounding residue in the mean; pin it.
    if (constant) {
      p.mean[j] = first;
      p.stddev[j] = 0.0;
    } else {
      p.stddev[j] = std::sqrt(p.stddev[j] / n);
    }
  }
  return p;
}

std::vector<double> zscore_apply(const ZScoreParams& params, std::span<const double> v) {
  if (v.size() != params.mean.size()) {
    throw DimensionError("z-score fitted on " + std::to_string(params.mean.size()) +
                         " dimensions, got " + std::to_string(v.size()));
  }
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    out[j] = params.stddev[j] > 0.0 ? (v[j] - params.mean[j]) / params.stddev[j] : 0.0;
  }
  return out;
}

}  // namespace cbir
