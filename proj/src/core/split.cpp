// SPDX-License-Identifier: Apache-2.0

#include "cbir/split.hpp"

#include <algorithm>
#include <map>

#include "cbir/error.hpp"
#include "cbir/rng.hpp"

namespace cbir {

std::string to_string(SplitMode mode) { return mode == SplitMode::holdout ? "holdout" : "loocv"; }

SplitMode parse_split_mode(const std::string& text) {
  if (text == "holdout") return SplitMode::holdout;
  if (text == "loocv") return SplitMode::loocv;
  throw SpecError("unknown split mode '" + text + "'");
}

Split stratified_split(const FeatureSet& fs, const SplitSpec& spec) {
  if (spec.mode != SplitMode::holdout) throw SplitError("LOOCV has no fixed train/test split");
  if (spec.test_per_class < 1) throw SplitError("test-per-class must be at least 1");

  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < fs.size(); ++i) members[fs.label(i)].push_back(i);

  std::vector<bool> is_test(fs.size(), false);
  Rng rng(spec.seed);
  for (auto& [label, idx] : members) {
    if (idx.size() <= spec.test_per_class) {
      throw SplitError("class '" + label + "' has " + std::to_string(idx.size()) +
                       " items; holdout needs more than " + std::to_string(spec.test_per_class));
    }
    // Partial Fisher-Yates: the first test_per_class slots become the draw.
    for (std::size_t k = 0; k < spec.test_per_class; ++k) {
      const std::size_t j = k + rng.below(idx.size() - k);
      std::swap(idx[k], idx[j]);
      is_test[idx[k]] = true;
    }
  }

  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t i = 0; i < fs.size(); ++i) (is_test[i] ? test_idx : train_idx).push_back(i);
  return {fs.subset(train_idx), fs.subset(test_idx)};
}

}  // namespace cbir
