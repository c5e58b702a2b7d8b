// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <limits>

#include "cbir/error.hpp"
#include "cbir/eval.hpp"

namespace cbir {
namespace {

const std::string& label_for(const LabelMap& labels, const std::string& id) {
  auto it = labels.find(id);
  if (it == labels.end()) throw EvaluationError("no label for '" + id + "'");
  return it->second;
}

std::size_t count_relevant(std::span<const char> rel) {
  return static_cast<std::size_t>(std::count(rel.begin(), rel.end(), 1));
}

}  // namespace

std::vector<char> relevance(const RankedResult& r, const LabelMap& labels,
                            std::string_view query_label) {
  std::vector<char> rel(r.entries.size());
  for (std::size_t k = 0; k < rel.size(); ++k) {
    rel[k] = label_for(labels, r.entries[k].id) == query_label ? 1 : 0;
  }
  return rel;
}

double average_precision(std::span<const char> rel, std::string_view query_id) {
  const std::size_t R = count_relevant(rel);
  if (R == 0) {
    throw EvaluationError("query '" + std::string(query_id) + "' has no relevant gallery items");
  }
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < rel.size(); ++k) {
    if (rel[k]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  return sum / static_cast<double>(R);
}

double average_precision(const RankedResult& r, const LabelMap& labels,
                         std::string_view query_label) {
  return average_precision(relevance(r, labels, query_label), r.query_id);
}

double mean_average_precision(std::span<const RankedResult> results, const LabelMap& labels) {
  if (results.empty()) throw EvaluationError("mean average precision of no queries");
  double sum = 0.0;
  for (const auto& r : results) sum += average_precision(r, labels, label_for(labels, r.query_id));
  return sum / static_cast<double>(results.size());
}

std::vector<PrPoint> pr_curve(std::span<const char> rel, std::string_view query_id) {
  const std::size_t R = count_relevant(rel);
  if (R == 0) {
    throw EvaluationError("query '" + std::string(query_id) + "' has no relevant gallery items");
  }
  std::vector<PrPoint> out(rel.size());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < rel.size(); ++k) {
    hits += rel[k] ? 1 : 0;
    out[k].recall = static_cast<double>(hits) / static_cast<double>(R);
    out[k].precision = static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return out;
}

std::vector<PrPoint> pr_curve(const RankedResult& r, const LabelMap& labels,
                              std::string_view query_label) {
  return pr_curve(relevance(r, labels, query_label), r.query_id);
}

std::array<double, kPrLevels> interpolated_precision(std::span<const PrPoint> curve) {
  std::array<double, kPrLevels> out{};
  for (std::size_t level = 0; level < kPrLevels; ++level) {
    const double threshold = static_cast<double>(level) / 10.0;
    for (const auto& p : curve) {
      if (p.recall >= threshold - 1e-12) out[level] = std::max(out[level], p.precision);
    }
  }
  return out;
}

double error_rate(std::span<const RankedResult> results, const LabelMap& labels) {
  if (results.empty()) throw EvaluationError("error rate of no queries");
  std::size_t wrong = 0;
  for (const auto& r : results) {
    if (r.entries.empty()) throw EvaluationError("query '" + r.query_id + "' ranked nothing");
    if (label_for(labels, r.entries.front().id) != label_for(labels, r.query_id)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(results.size());
}

std::vector<double> error_rate_curve(std::span<const RankedResult> results, const LabelMap& labels) {
  if (results.empty()) throw EvaluationError("error rate of no queries");
  std::vector<std::vector<char>> rels;
  std::size_t L = std::numeric_limits<std::size_t>::max();
  for (const auto& r : results) {
    rels.push_back(relevance(r, labels, label_for(labels, r.query_id)));
    L = std::min(L, count_relevant(rels.back()));
  }
  std::vector<double> out(L, 0.0);
  for (const auto& rel : rels) {
    std::size_t hits = 0;
    for (std::size_t k = 0; k < L; ++k) {
      hits += rel[k] ? 1 : 0;
      out[k] += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  for (double& v : out) v = 1.0 - v / static_cast<double>(results.size());
  return out;
}

}  // namespace cbir
