// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cbir/feature_set.hpp"

namespace cbir {

/// Row-major pixels in [0, 1], channels interleaved.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  /// Throws DataError on a zero extent, a channel count other than 1 or 3,
  /// a wrong pixel count, or a value outside [0, 1].
  ImageBuffer(std::size_t width, std::size_t height, std::size_t channels,
              std::vector<double> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t channels() const noexcept { return channels_; }
  bool empty() const noexcept { return pixels_.empty(); }
  const std::vector<double>& pixels() const noexcept { return pixels_; }
  double at(std::size_t x, std::size_t y, std::size_t c = 0) const {
    return pixels_[(y * width_ + x) * channels_ + c];
  }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 1;
  std::vector<double> pixels_;
};

/// Rec. 601 luma for colour input; grey input is returned as is.
ImageBuffer to_gray(const ImageBuffer& img);

/// Netpbm P2, P3, P5 and P6 (8- or 16-bit samples).
ImageBuffer read_pnm(const std::filesystem::path& path);
/// Writes P5 or P6 with 8-bit samples.
void write_pnm(const ImageBuffer& img, const std::filesystem::path& path);

/// DIR/id, then DIR/id.pgm, .ppm, .pnm.
std::optional<std::filesystem::path> find_image(const std::filesystem::path& dir,
                                                std::string_view id);

// ---------------------------------------------------------------------------
// Gabor

struct GaborSpec {
  std::size_t scales = 5;
  std::size_t orientations = 5;
  std::vector<double> sigma;  ///< per scale, pixels
  std::vector<double> u0;     ///< per scale, cycles per pixel
  std::size_t kernel_radius = 24;
  bool remove_dc = true;  ///< subtract the kernel mean before filtering

  /// sigma geometric from 2 to 8, u0 = 1 / (2 sigma).
  static GaborSpec defaults(std::size_t scales = 5, std::size_t orientations = 5);
  void validate() const;
};

/// Raw samples on [-r, r]^2 for zero-based scale m and orientation n
/// (theta = pi n / O). Entry (r + y, r + x) holds f(x, y).
Eigen::MatrixXd gabor_kernel(const GaborSpec& spec, std::size_t m, std::size_t n);

/// Mean and standard deviation of |I * f_mn| for every filter, scale-major,
/// mean first. Borders replicate the nearest edge pixel.
std::vector<double> gabor_features(const ImageBuffer& img, const GaborSpec& spec);

// ---------------------------------------------------------------------------
// Histograms and HOG

/// Joint RGB histogram (bins^3, red slowest) or grey histogram (bins),
/// normalised to sum 1.
std::vector<double> color_histogram(const ImageBuffer& img, std::size_t bins_per_channel);

/// Unsigned-gradient HOG with centred differences, bins over [0, pi) centred
/// at b pi / bins, 2x2-cell blocks at stride one cell, L2 block norm.
std::vector<double> hog_features(const ImageBuffer& img, std::size_t cell = 8,
                                 std::size_t bins = 9);

inline constexpr double kHogEpsilon = 1e-5;

/// Number of values hog_features returns for a given image size.
std::size_t hog_length(std::size_t width, std::size_t height, std::size_t cell, std::size_t bins);

// ---------------------------------------------------------------------------
// Batch extraction

enum class FeatureKind { gabor, hist, hog };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);

struct ExtractSpec {
  FeatureKind kind = FeatureKind::gabor;
  GaborSpec gabor = GaborSpec::defaults();
  std::size_t hist_bins = 8;
  std::size_t hog_cell = 8;
  std::size_t hog_bins = 9;
};

std::vector<double> extract(const ImageBuffer& img, const ExtractSpec& spec);

/// Extracts every manifest entry found under `dir`, in id order. A missing
/// image is an IoError; images whose descriptors differ in length are a
/// DimensionError.
FeatureSet extract_directory(const std::filesystem::path& dir, const LabelMap& manifest,
                             const ExtractSpec& spec, std::size_t jobs = 1);

}  // namespace cbir
