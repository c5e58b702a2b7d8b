// SPDX-License-Identifier: Apache-2.0

#include "cbir/metrics.hpp"

#include <cmath>

#include "cbir/error.hpp"
#include "cbir/simd.hpp"

namespace cbir {
namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("vectors of length " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + " cannot be compared");
  }
}

}  // namespace

std::string_view short_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean: return "ed";
    case MetricKind::manhattan: return "md";
    case MetricKind::hassanat: return "hd";
    case MetricKind::canberra: return "cd";
  }
  return "?";
}

MetricKind parse_metric(std::string_view text) {
  if (text == "ed" || text == "euclidean") return MetricKind::euclidean;
  if (text == "md" || text == "manhattan") return MetricKind::manhattan;
  if (text == "hd" || text == "hassanat") return MetricKind::hassanat;
  if (text == "cd" || text == "canberra") return MetricKind::canberra;
  throw SpecError("unknown metric '" + std::string(text) + "'");
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  return std::sqrt(simd::active().squared_l2(a.data(), b.data(), a.size()));
}

double manhattan(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  return simd::active().l1(a.data(), b.data(), a.size());
}

double hassanat(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  return simd::active().hassanat(a.data(), b.data(), a.size());
}

double canberra(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  return simd::active().canberra(a.data(), b.data(), a.size());
}

double distance(MetricKind kind, std::span<const double> a, std::span<const double> b) {
  switch (kind) {
    case MetricKind::euclidean: return euclidean(a, b);
    case MetricKind::manhattan: return manhattan(a, b);
    case MetricKind::hassanat: return hassanat(a, b);
    case MetricKind::canberra: return canberra(a, b);
  }
  throw SpecError("invalid metric");
}

}  // namespace cbir
