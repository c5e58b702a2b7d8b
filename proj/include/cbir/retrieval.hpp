// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbir/feature_set.hpp"
#include "cbir/metrics.hpp"
#include "cbir/reduce.hpp"
#include "cbir/sparse.hpp"

namespace cbir {

// ---------------------------------------------------------------------------
// Stage specifications
//
// Text form, one token per stage, stages joined by ',' or '+':
//   dct:all | dct:KEEP | zscore | pca:K | dwt:LEVELS | pdf:BINS[:LO:HI]
//   sparse[:key=value...] with keys method (kmeans|ksvd), size, sparsity,
//   iters, seed, cl (homotopy|lasso|en|ssf), lambda, lambda2, scale
//   (rel|abs), max_iter, tol.

enum class StageKind { dct, zscore, pca, dwt, pdf, sparse };

struct SparseStageSpec {
  DictLearner learner = DictLearner::ksvd;
  std::size_t size = 10;
  std::size_t sparsity = 0;  ///< K-SVD only; 0 picks default_ksvd_sparsity
  std::size_t iters = 0;     ///< learner iteration cap; 0 picks default_dict_iters
  std::uint64_t seed = 0;
  ClSpec cl;
};

struct StageSpec {
  StageKind kind = StageKind::zscore;
  DctSpec dct;
  std::size_t pca_components = 0;
  std::size_t dwt_levels = 0;
  PdfSpec pdf;
  SparseStageSpec sparse;
};

/// Throws SpecError on a malformed token.
StageSpec parse_stage(std::string_view token);
/// Empty text (or "none") is the identity pipeline.
std::vector<StageSpec> parse_stages(std::string_view text);
/// Canonical token; parse_stage(format_stage(s)) reproduces s.
std::string format_stage(const StageSpec& spec);
std::string format_stages(std::span<const StageSpec> stages, char separator = ',');

// ---------------------------------------------------------------------------
// Fitted pipeline

struct FittedStage {
  StageSpec spec;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  /// id_fingerprint of the rows the stage was fitted on; nullopt for
  /// stateless stages.
  std::optional<std::uint64_t> fingerprint;
  std::optional<ZScoreParams> zscore;
  std::optional<PcaModel> pca;
  std::optional<Dictionary> dictionary;
  std::shared_ptr<const SparseProblem> problem;
};

class TransformPipeline {
 public:
  TransformPipeline() = default;
  TransformPipeline(std::size_t input_dim, std::vector<FittedStage> stages);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept;
  const std::vector<FittedStage>& stages() const noexcept { return stages_; }
  bool identity() const noexcept { return stages_.empty(); }

 private:
  std::size_t input_dim_ = 0;
  std::vector<FittedStage> stages_;
};

/// Fits stateful stages on `train` only, feeding each stage the output of
/// the previous one. A stage that cannot accept its input dimension, or
/// fails to fit, raises PipelineError naming its position and token.
TransformPipeline fit_pipeline(std::span<const StageSpec> stages, const FeatureSet& train,
                               std::size_t jobs = 1);

/// DimensionError when v does not match the pipeline's input dimension.
std::vector<double> apply_pipeline(const TransformPipeline& p, std::span<const double> v);
FeatureSet apply_pipeline(const TransformPipeline& p, const FeatureSet& fs, std::size_t jobs = 1);

// ---------------------------------------------------------------------------
// Ranking

struct RankedEntry {
  std::string id;
  double distance = 0.0;
};

struct RankedResult {
  std::string query_id;
  std::vector<RankedEntry> entries;  ///< ascending distance, then id
};

/// Exhaustive scan of the gallery. The entry whose id equals q_id, if any,
/// is left out.
RankedResult rank_query(const FeatureSet& gallery, std::span<const double> q,
                        std::string_view q_id, MetricKind metric);

/// Gallery row indices in ranked order, skipping `exclude` when it is set.
/// The index form of rank_query, for callers that already hold the rows.
/// `distances`, when given, receives one distance per gallery row in storage
/// order.
std::vector<std::size_t> rank_indices(const FeatureSet& gallery, std::span<const double> q,
                                      std::optional<std::size_t> exclude, MetricKind metric,
                                      std::vector<double>* distances = nullptr);

}  // namespace cbir
