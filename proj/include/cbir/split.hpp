// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "cbir/feature_set.hpp"

namespace cbir {

enum class SplitMode { holdout, loocv };

struct SplitSpec {
  SplitMode mode = SplitMode::holdout;
  std::size_t test_per_class = 10;  // holdout only
  std::uint64_t seed = 0;
};

struct Split {
  FeatureSet train;
  FeatureSet test;
};

/// Draws `test_per_class` items uniformly without replacement from every
/// class; the rest form the training set. Both halves keep the original
/// storage order. Classes are visited in lexicographic order, so the draw is
/// a pure function of (fs, spec). Throws SplitError naming the first class
/// with no more than `test_per_class` members, or when called in LOOCV mode.
Split stratified_split(const FeatureSet& fs, const SplitSpec& spec);

std::string to_string(SplitMode mode);
SplitMode parse_split_mode(const std::string& text);

}  // namespace cbir
