// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>

namespace cbir {

enum class MetricKind { euclidean, manhattan, hassanat, canberra };

inline constexpr MetricKind kAllMetrics[] = {MetricKind::euclidean, MetricKind::manhattan,
                                             MetricKind::hassanat, MetricKind::canberra};

/// Short CLI names: ed, md, hd, cd.
std::string_view short_name(MetricKind kind);
/// Accepts the short names and the full names; throws SpecError otherwise.
MetricKind parse_metric(std::string_view text);

// All four throw DimensionError when the lengths differ.

double euclidean(std::span<const double> a, std::span<const double> b);
double manhattan(std::span<const double> a, std::span<const double> b);

/// Sum over dimensions of the bounded Hassanat term; each term is in [0, 1).
double hassanat(std::span<const double> a, std::span<const double> b);

/// Sum of |a-b| / (|a|+|b|), with a 0/0 term counted as 0.
double canberra(std::span<const double> a, std::span<const double> b);

double distance(MetricKind kind, std::span<const double> a, std::span<const double> b);

}  // namespace cbir
