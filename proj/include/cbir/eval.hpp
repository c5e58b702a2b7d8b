// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cbir/feature_set.hpp"
#include "cbir/metrics.hpp"
#include "cbir/retrieval.hpp"
#include "cbir/split.hpp"

namespace cbir {

// ---------------------------------------------------------------------------
// Per-ranking measures. A relevance vector holds 1 at ranks whose item
// shares the query's label.

std::vector<char> relevance(const RankedResult& r, const LabelMap& labels,
                            std::string_view query_label);

/// (1/R) sum_k P(k) rel(k), R the number of relevant items in the ranking.
/// Throws EvaluationError naming the query when R is zero.
double average_precision(const RankedResult& r, const LabelMap& labels,
                         std::string_view query_label);
double average_precision(std::span<const char> rel, std::string_view query_id = "?");

/// Arithmetic mean of per-query APs; query labels come from `labels`.
double mean_average_precision(std::span<const RankedResult> results, const LabelMap& labels);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

/// One point per rank k = 1..n.
std::vector<PrPoint> pr_curve(const RankedResult& r, const LabelMap& labels,
                              std::string_view query_label);
std::vector<PrPoint> pr_curve(std::span<const char> rel, std::string_view query_id = "?");

inline constexpr std::size_t kPrLevels = 11;

/// Max precision at recall >= 0, 0.1, ..., 1.0.
std::array<double, kPrLevels> interpolated_precision(std::span<const PrPoint> curve);

/// Fraction of queries whose first result carries another label.
double error_rate(std::span<const RankedResult> results, const LabelMap& labels);

/// 1 - mean precision at rank k, for k = 1..min over queries of R.
std::vector<double> error_rate_curve(std::span<const RankedResult> results, const LabelMap& labels);

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentSpec {
  SplitSpec split;
  std::vector<StageSpec> stages;
  MetricKind metric = MetricKind::euclidean;
  bool strict_loocv = false;  ///< refit the pipeline without each query
  std::size_t jobs = 1;
  bool keep_rankings = false;
};

/// "pipeline=...;metric=..;split=..;seed=.." with stages joined by '+'.
std::string config_string(const ExperimentSpec& spec);

struct QueryOutcome {
  std::string id;
  std::string label;
  double ap = 0.0;
  double ap11 = 0.0;  ///< mean of the 11 interpolated precisions
  bool top1_correct = false;
  std::size_t relevant = 0;
};

struct EvalReport {
  std::string config;
  std::uint64_t fingerprint = 0;  ///< config plus input ids
  std::size_t gallery_size = 0;   ///< items each query ranks
  double map = 0.0;
  double map11 = 0.0;
  double er = 0.0;
  std::map<std::string, double> per_class_map;
  std::array<double, kPrLevels> pr11{};
  std::vector<double> er_curve;
  std::vector<QueryOutcome> queries;      ///< in query order
  std::vector<RankedResult> rankings;     ///< only with keep_rankings
};

/// Holdout: fit on the stratified train half, rank the train half for
/// every test query. LOOCV: fit once on everything (or per query when
/// strict), every item queries the other n-1.
EvalReport run_experiment(const FeatureSet& fs, const ExperimentSpec& spec);

/// One report per metric from a single pipeline fit; spec.metric is
/// ignored.
std::vector<EvalReport> run_experiment(const FeatureSet& fs, const ExperimentSpec& spec,
                                       std::span<const MetricKind> metrics);

// ---------------------------------------------------------------------------
// Report files

std::string report_json(const EvalReport& report);
/// recall,precision at the 11 interpolation levels.
std::string pr_csv(const EvalReport& report);
/// rank,er
std::string er_csv(const EvalReport& report);
/// config=...,map=...,er=...
std::string flat_line(const EvalReport& report);
/// query_id,label,ap,ap11,top1
std::string queries_csv(const EvalReport& report);

/// Writes report.json, pr.csv, er.csv, queries.csv and summary.txt into dir.
std::vector<std::filesystem::path> write_report(const EvalReport& report,
                                                const std::filesystem::path& dir);

}  // namespace cbir
