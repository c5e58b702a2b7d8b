// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>

#include "cbir/error.hpp"
#include "cbir/retrieval.hpp"

namespace cbir {

std::vector<std::size_t> rank_indices(const FeatureSet& gallery, std::span<const double> q,
                                      std::optional<std::size_t> exclude, MetricKind metric,
                                      std::vector<double>* distances) {
  if (!gallery.empty() && q.size() != gallery.dim()) {
    throw DimensionError("query has " + std::to_string(q.size()) + " dimensions, gallery " +
                         std::to_string(gallery.dim()));
  }
  std::vector<double> dist(gallery.size());
  for (std::size_t i = 0; i < gallery.size(); ++i) dist[i] = distance(metric, gallery.row(i), q);
  std::vector<std::size_t> order;
  order.reserve(gallery.size());
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    if (!exclude || *exclude != i) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    return gallery.id(a) < gallery.id(b);
  });
  if (distances) *distances = std::move(dist);
  return order;
}

RankedResult rank_query(const FeatureSet& gallery, std::span<const double> q,
                        std::string_view q_id, MetricKind metric) {
  if (q_id.empty()) throw DataError("query id is required");
  std::vector<double> dist;
  const auto order = rank_indices(gallery, q, gallery.find(q_id), metric, &dist);
  RankedResult out;
  out.query_id = std::string(q_id);
  out.entries.reserve(order.size());
  for (std::size_t i : order) out.entries.push_back({gallery.id(i), dist[i]});
  return out;
}

}  // namespace cbir
