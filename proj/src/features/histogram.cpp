// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "cbir/error.hpp"
#include "cbir/features.hpp"

namespace cbir {
namespace {

std::size_t bin_of(double v, std::size_t bins) {
  const auto b = static_cast<std::size_t>(std::floor(v * static_cast<double>(bins)));
  return std::min(b, bins - 1);
}

}  // namespace

std::vector<double> color_histogram(const ImageBuffer& img, std::size_t bins) {
  if (bins < 1) throw SpecError("histogram needs at least one bin");
  if (img.empty()) throw DataError("histogram of an empty image");
  if (img.channels() == 3 && bins > 1024) throw SpecError("joint histogram too large");
  const std::size_t pixels = img.width() * img.height();
  const auto& px = img.pixels();
  std::vector<double> hist(img.channels() == 3 ? bins * bins * bins : bins, 0.0);
  for (std::size_t i = 0; i < pixels; ++i) {
    std::size_t idx;
    if (img.channels() == 3) {
      idx = (bin_of(px[3 * i], bins) * bins + bin_of(px[3 * i + 1], bins)) * bins +
            bin_of(px[3 * i + 2], bins);
    } else {
      idx = bin_of(px[i], bins);
    }
    hist[idx] += 1.0;
  }
  for (double& h : hist) h /= static_cast<double>(pixels);
  return hist;
}

}  // namespace cbir
