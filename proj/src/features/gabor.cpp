// SPDX-License-Identifier: Apache-2.0

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "../reduce/fftw_planner.hpp"
#include "cbir/error.hpp"
#include "cbir/features.hpp"

namespace cbir {
namespace {

// Owning FFTW buffers and plans for one padded frame size.
class FftFrame {
 public:
  FftFrame(int rows, int cols)
      : rows_(rows), cols_(cols), half_(cols / 2 + 1),
        real_(fftw_alloc_real(static_cast<std::size_t>(rows) * cols)),
        spec_(fftw_alloc_complex(static_cast<std::size_t>(rows) * half_)) {
    if (!real_ || !spec_) throw Error("out of memory for Gabor filtering");
    std::lock_guard lock(detail::fftw_planner_mutex());
    forward_ = fftw_plan_dft_r2c_2d(rows, cols, real_, spec_, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_2d(rows, cols, spec_, real_, FFTW_ESTIMATE);
    if (!forward_ || !inverse_) throw Error("FFTW could not plan a 2-D transform");
  }
  FftFrame(const FftFrame&) = delete;
  FftFrame& operator=(const FftFrame&) = delete;
  ~FftFrame() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (forward_) fftw_destroy_plan(forward_);
    if (inverse_) fftw_destroy_plan(inverse_);
    fftw_free(real_);
    fftw_free(spec_);
  }

  double* real() noexcept { return real_; }
  std::size_t real_size() const noexcept { return static_cast<std::size_t>(rows_) * cols_; }
  std::size_t spec_size() const noexcept { return static_cast<std::size_t>(rows_) * half_; }

  std::vector<std::complex<double>> forward() {
    fftw_execute(forward_);
    std::vector<std::complex<double>> out(spec_size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {spec_[i][0], spec_[i][1]};
    return out;
  }

  // Inverse of a product of two spectra; the result lands in real().
  void inverse_product(const std::vector<std::complex<double>>& a,
                       const std::vector<std::complex<double>>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::complex<double> p = a[i] * b[i];
      spec_[i][0] = p.real();
      spec_[i][1] = p.imag();
    }
    fftw_execute(inverse_);
  }

 private:
  int rows_, cols_, half_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

}  // namespace

GaborSpec GaborSpec::defaults(std::size_t scales, std::size_t orientations) {
  GaborSpec s;
  s.scales = scales;
  s.orientations = orientations;
  s.sigma.resize(scales);
  s.u0.resize(scales);
  for (std::size_t m = 0; m < scales; ++m) {
    const double t = scales == 1 ? 0.0 : static_cast<double>(m) / static_cast<double>(scales - 1);
    s.sigma[m] = 2.0 * std::pow(4.0, t);
    s.u0[m] = 1.0 / (2.0 * s.sigma[m]);
  }
  s.kernel_radius = static_cast<std::size_t>(std::ceil(3.0 * s.sigma.back()));
  return s;
}

void GaborSpec::validate() const {
  if (scales < 1 || orientations < 1) throw SpecError("Gabor bank needs at least one scale and orientation");
  if (sigma.size() != scales || u0.size() != scales) {
    throw SpecError("Gabor bank needs one sigma and one u0 per scale");
  }
  for (std::size_t m = 0; m < scales; ++m) {
    if (!(sigma[m] > 0.0) || !std::isfinite(sigma[m])) throw SpecError("Gabor sigma must be positive");
    if (!std::isfinite(u0[m])) throw SpecError("Gabor u0 must be finite");
  }
  if (kernel_radius > 4096) throw SpecError("Gabor kernel radius too large");
}

Eigen::MatrixXd gabor_kernel(const GaborSpec& spec, std::size_t m, std::size_t n) {
  spec.validate();
  if (m >= spec.scales || n >= spec.orientations) {
    throw SpecError("Gabor filter index (" + std::to_string(m) + ", " + std::to_string(n) +
                    ") out of range");
  }
  const double sigma = spec.sigma[m];
  const double theta = std::numbers::pi * static_cast<double>(n) / static_cast<double>(spec.orientations);
  const double c = std::cos(theta), s = std::sin(theta);
  const double norm = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
  const auto r = static_cast<long>(spec.kernel_radius);
  Eigen::MatrixXd k(2 * r + 1, 2 * r + 1);
  for (long y = -r; y <= r; ++y) {
    for (long x = -r; x <= r; ++x) {
      const auto xd = static_cast<double>(x), yd = static_cast<double>(y);
      k(y + r, x + r) = norm * std::exp(-(xd * xd + yd * yd) / (2.0 * sigma * sigma)) *
                        std::cos(2.0 * std::numbers::pi * spec.u0[m] * (xd * c + yd * s));
    }
  }
  return k;
}

std::vector<double> gabor_features(const ImageBuffer& input, const GaborSpec& spec) {
  spec.validate();
  if (input.empty()) throw DataError("Gabor features of an empty image");
  const ImageBuffer img = to_gray(input);
  const auto W = static_cast<long>(img.width()), H = static_cast<long>(img.height());
  const auto r = static_cast<long>(spec.kernel_radius);
  // A frame of (H + 2r) x (W + 2r) holds the edge-replicated image; the
  // circular wrap only reaches outputs that are cropped away.
  const long P = H + 2 * r, Q = W + 2 * r;
  FftFrame frame(static_cast<int>(P), static_cast<int>(Q));
  double* buf = frame.real();

  for (long i = 0; i < P; ++i) {
    const long y = std::clamp(i - r, 0L, H - 1);
    for (long j = 0; j < Q; ++j) {
      const long x = std::clamp(j - r, 0L, W - 1);
      buf[i * Q + j] = img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    }
  }
  const auto image_spec = frame.forward();

  const double inv_area = 1.0 / static_cast<double>(P * Q);
  const double count = static_cast<double>(W * H);
  std::vector<double> mag(static_cast<std::size_t>(W * H));
  std::vector<double> out;
  out.reserve(2 * spec.scales * spec.orientations);
  for (std::size_t m = 0; m < spec.scales; ++m) {
    for (std::size_t n = 0; n < spec.orientations; ++n) {
      Eigen::MatrixXd k = gabor_kernel(spec, m, n);
      if (spec.remove_dc) k.array() -= k.mean();
      std::fill(buf, buf + frame.real_size(), 0.0);
      for (long a = 0; a < k.rows(); ++a) {
        for (long b = 0; b < k.cols(); ++b) buf[a * Q + b] = k(a, b);
      }
      const auto kernel_spec = frame.forward();
      frame.inverse_product(image_spec, kernel_spec);
      // Output pixel (y, x) sits at (y + 2r, x + 2r) of the full convolution.
      double sum = 0.0;
      for (long y = 0; y < H; ++y) {
        const double* rowp = buf + (y + 2 * r) * Q + 2 * r;
        for (long x = 0; x < W; ++x) {
          mag[static_cast<std::size_t>(y * W + x)] = std::abs(rowp[x] * inv_area);
          sum += mag[static_cast<std::size_t>(y * W + x)];
        }
      }
      const double mean = sum / count;
      double var = 0.0;
      for (double v : mag) var += (v - mean) * (v - mean);
      var /= count;
      out.push_back(mean);
      out.push_back(std::sqrt(var));
    }
  }
  return out;
}

}  // namespace cbir
