// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cbir/error.hpp"
#include "cbir/features.hpp"

namespace cbir {
namespace {

struct Grid {
  std::size_t cells_x, cells_y, blocks_x, blocks_y;
};

Grid grid_for(std::size_t width, std::size_t height, std::size_t cell) {
  Grid g{width / cell, height / cell, 0, 0};
  g.blocks_x = std::max<std::size_t>(g.cells_x, 2) - 1;
  g.blocks_y = std::max<std::size_t>(g.cells_y, 2) - 1;
  return g;
}

void check(std::size_t width, std::size_t height, std::size_t cell, std::size_t bins) {
  if (cell < 1) throw SpecError("HOG cell size must be positive");
  if (bins < 1) throw SpecError("HOG needs at least one orientation bin");
  if (width < cell || height < cell) {
    throw DataError("image of " + std::to_string(width) + "x" + std::to_string(height) +
                    " is smaller than one " + std::to_string(cell) + "-pixel HOG cell");
  }
}

}  // namespace

std::size_t hog_length(std::size_t width, std::size_t height, std::size_t cell, std::size_t bins) {
  check(width, height, cell, bins);
  const Grid g = grid_for(width, height, cell);
  return g.blocks_x * g.blocks_y * 4 * bins;
}

std::vector<double> hog_features(const ImageBuffer& input, std::size_t cell, std::size_t bins) {
  if (input.empty()) throw DataError("HOG of an empty image");
  check(input.width(), input.height(), cell, bins);
  const ImageBuffer img = to_gray(input);
  const std::size_t W = img.width(), H = img.height();
  const Grid g = grid_for(W, H, cell);

  // Per-cell histograms; pixels beyond the last whole cell are ignored.
  std::vector<double> cells(g.cells_x * g.cells_y * bins, 0.0);
  const double bin_width = std::numbers::pi / static_cast<double>(bins);
  for (std::size_t y = 0; y < g.cells_y * cell; ++y) {
    for (std::size_t x = 0; x < g.cells_x * cell; ++x) {
      const double gx = img.at(std::min(x + 1, W - 1), y) - img.at(x == 0 ? 0 : x - 1, y);
      const double gy = img.at(x, std::min(y + 1, H - 1)) - img.at(x, y == 0 ? 0 : y - 1);
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double angle = std::atan2(gy, gx);
      if (angle < 0.0) angle += std::numbers::pi;
      if (angle >= std::numbers::pi) angle -= std::numbers::pi;
      const double pos = angle / bin_width;
      const auto lo = static_cast<std::size_t>(std::floor(pos)) % bins;
      const double frac = pos - std::floor(pos);
      const std::size_t hi = (lo + 1) % bins;
      double* h = &cells[((y / cell) * g.cells_x + x / cell) * bins];
      h[lo] += mag * (1.0 - frac);
      h[hi] += mag * frac;
    }
  }

  std::vector<double> out;
  out.reserve(g.blocks_x * g.blocks_y * 4 * bins);
  std::vector<double> block(4 * bins);
  for (std::size_t by = 0; by < g.blocks_y; ++by) {
    for (std::size_t bx = 0; bx < g.blocks_x; ++bx) {
      std::fill(block.begin(), block.end(), 0.0);
      for (std::size_t q = 0; q < 4; ++q) {
        const std::size_t cx = bx + q % 2, cy = by + q / 2;
        if (cx >= g.cells_x || cy >= g.cells_y) continue;  // zero padding
        std::copy_n(&cells[(cy * g.cells_x + cx) * bins], bins, block.begin() + q * bins);
      }
      double sq = 0.0;
      for (double v : block) sq += v * v;
      const double scale = 1.0 / std::sqrt(sq + kHogEpsilon * kHogEpsilon);
      for (double v : block) out.push_back(v * scale);
    }
  }
  return out;
}

}  // namespace cbir
