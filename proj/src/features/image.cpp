// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "cbir/error.hpp"
#include "cbir/features.hpp"
#include "cbir/parallel.hpp"

namespace cbir {

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height, std::size_t channels,
                         std::vector<double> pixels)
    : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0) throw DataError("image has zero extent");
  if (channels != 1 && channels != 3) {
    throw DataError("image must have 1 or 3 channels, got " + std::to_string(channels));
  }
  if (pixels_.size() != width * height * channels) {
    throw DataError("image of " + std::to_string(width) + "x" + std::to_string(height) + "x" +
                    std::to_string(channels) + " has " + std::to_string(pixels_.size()) +
                    " samples");
  }
  for (double v : pixels_) {
    if (!(v >= 0.0 && v <= 1.0)) throw DataError("pixel value outside [0, 1]");
  }
}

ImageBuffer to_gray(const ImageBuffer& img) {
  if (img.channels() == 1) return img;
  std::vector<double> grey(img.width() * img.height());
  const auto& px = img.pixels();
  for (std::size_t i = 0; i < grey.size(); ++i) {
    const double v = 0.299 * px[3 * i] + 0.587 * px[3 * i + 1] + 0.114 * px[3 * i + 2];
    grey[i] = std::clamp(v, 0.0, 1.0);
  }
  return ImageBuffer(img.width(), img.height(), 1, std::move(grey));
}

std::optional<std::filesystem::path> find_image(const std::filesystem::path& dir,
                                                std::string_view id) {
  const std::filesystem::path base = dir / std::string(id);
  std::error_code ec;
  if (std::filesystem::is_regular_file(base, ec)) return base;
  for (const char* ext : {".pgm", ".ppm", ".pnm"}) {
    std::filesystem::path p = base;
    p += ext;
    if (std::filesystem::is_regular_file(p, ec)) return p;
  }
  return std::nullopt;
}

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::gabor: return "gabor";
    case FeatureKind::hist: return "hist";
    case FeatureKind::hog: return "hog";
  }
  return "?";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "gabor") return FeatureKind::gabor;
  if (text == "hist") return FeatureKind::hist;
  if (text == "hog") return FeatureKind::hog;
  throw SpecError("unknown feature kind '" + std::string(text) + "'");
}

std::vector<double> extract(const ImageBuffer& img, const ExtractSpec& spec) {
  switch (spec.kind) {
    case FeatureKind::gabor: return gabor_features(img, spec.gabor);
    case FeatureKind::hist: return color_histogram(img, spec.hist_bins);
    case FeatureKind::hog: return hog_features(img, spec.hog_cell, spec.hog_bins);
  }
  throw SpecError("invalid feature kind");
}

FeatureSet extract_directory(const std::filesystem::path& dir, const LabelMap& manifest,
                             const ExtractSpec& spec, std::size_t jobs) {
  std::vector<std::pair<std::string, std::string>> entries(manifest.begin(), manifest.end());
  std::sort(entries.begin(), entries.end());
  std::vector<std::vector<double>> rows(entries.size());
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    const auto path = find_image(dir, entries[i].first);
    if (!path) throw IoError("no image for id '" + entries[i].first + "' under " + dir.string());
    try {
      rows[i] = extract(read_pnm(*path), spec);
    } catch (const IoError&) {
      throw;
    } catch (const Error& e) {
      throw DataError("image '" + entries[i].first + "': " + e.what());
    }
  });
  FeatureSet fs;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && rows[i].size() != rows[0].size()) {
      throw DimensionError("image '" + entries[i].first + "' gives " +
                           std::to_string(rows[i].size()) + " features, expected " +
                           std::to_string(rows[0].size()));
    }
    fs.add(entries[i].first, rows[i], entries[i].second);
  }
  return fs;
}

}  // namespace cbir
