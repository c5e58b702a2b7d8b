// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cbir/feature_set.hpp"

namespace cbir {

// ---------------------------------------------------------------------------
// DCT

/// Number of leading DCT coefficients to keep; nullopt keeps all of them.
struct DctSpec {
  std::optional<std::size_t> keep;
};

/// Orthonormal DCT-II. Output[0] is the DC coefficient. O(N log N).
std::vector<double> dct_forward(std::span<const double> x);

/// Orthonormal DCT-III, the inverse of dct_forward.
std::vector<double> dct_inverse(std::span<const double> coeffs);

/// The DC coefficient plus the keep-1 lowest AC coefficients.
std::vector<double> dct_keep(std::span<const double> coeffs, const DctSpec& spec);

// ---------------------------------------------------------------------------
// Z-score

struct ZScoreParams {
  std::vector<double> mean;
  std::vector<double> stddev;  // population convention
};

/// Needs at least two rows.
ZScoreParams zscore_fit(const FeatureSet& train);
/// Dimensions with zero spread map to 0.
std::vector<double> zscore_apply(const ZScoreParams& params, std::span<const double> v);

// ---------------------------------------------------------------------------
// PCA

struct PcaModel {
  std::vector<double> mean;
  Eigen::MatrixXd components;   // k x d, orthonormal rows
  std::vector<double> variances;  // k, descending, population convention
};

/// Top-k principal axes from the SVD of the centred data. The largest
/// magnitude entry of every component is made positive. Requires
/// 1 <= k <= min(n-1, d).
PcaModel pca_fit(const FeatureSet& train, std::size_t k);
std::vector<double> pca_project(const PcaModel& model, std::span<const double> v);

// ---------------------------------------------------------------------------
// Haar approximation coefficients

/// Pairwise (x[2i] + x[2i+1]) / sqrt(2); an odd trailing element contributes
/// 2 * x[N-1] / sqrt(2). Output length is ceil(N/2).
std::vector<double> haar_level(std::span<const double> x);
/// haar_level applied `levels` times (levels >= 1).
std::vector<double> haar_reduce(std::span<const double> x, std::size_t levels);

// ---------------------------------------------------------------------------
// Value histogram as a probability vector

struct PdfSpec {
  std::size_t bins = 32;
  /// Explicit [lo, hi]; nullopt takes each vector's own min and max.
  std::optional<std::pair<double, double>> range;
};

/// Equal-width bins, last bin right-inclusive, normalised by the count.
/// Values outside an explicit range are clamped into the end bins and
/// counted in `*clamped` when it is non-null.
std::vector<double> pdf_reduce(std::span<const double> x, const PdfSpec& spec,
                               std::size_t* clamped = nullptr);

}  // namespace cbir
