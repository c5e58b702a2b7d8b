// SPDX-License-Identifier: Apache-2.0

#include "cbir/feature_set.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cbir/error.hpp"

namespace cbir {

void FeatureSet::add(std::string id, std::span<const double> values, std::string label) {
  if (id.empty()) throw DataError("feature row " + std::to_string(size()) + " has an empty id");
  if (label.empty()) throw DataError("id '" + id + "' has an empty label");
  if (values.empty()) throw DimensionError("id '" + id + "' has no values");
  if (dim_ == 0) dim_ = values.size();
  if (values.size() != dim_) {
    throw DimensionError("id '" + id + "' has " + std::to_string(values.size()) +
                         " values, expected " + std::to_string(dim_));
  }
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j])) {
      throw DataError("id '" + id + "' has a non-finite value at column " + std::to_string(j));
    }
  }
  if (index_.contains(id)) throw DataError("duplicate id '" + id + "'");
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  labels_.push_back(std::move(label));
  data_.insert(data_.end(), values.begin(), values.end());
}

std::optional<std::size_t> FeatureSet::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& FeatureSet::label_of(std::string_view id) const {
  auto i = find(id);
  if (!i) throw DataError("unknown id '" + std::string(id) + "'");
  return labels_[*i];
}

LabelMap FeatureSet::label_map() const {
  LabelMap m;
  m.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) m.emplace(ids_[i], labels_[i]);
  return m;
}

std::vector<std::string> FeatureSet::classes() const {
  std::set<std::string> s(labels_.begin(), labels_.end());
  return {s.begin(), s.end()};
}

FeatureSet FeatureSet::subset(std::span<const std::size_t> indices) const {
  FeatureSet out(dim_);
  for (std::size_t i : indices) out.add(ids_.at(i), row(i), labels_[i]);
  return out;
}

FeatureSet FeatureSet::with_values(std::size_t dim, std::vector<double> values) const {
  if (values.size() != size() * dim) {
    throw DimensionError("replacement matrix has " + std::to_string(values.size()) +
                         " values, expected " + std::to_string(size() * dim));
  }
  FeatureSet out(dim);
  for (std::size_t i = 0; i < size(); ++i) {
    out.add(ids_[i], std::span<const double>(values.data() + i * dim, dim), labels_[i]);
  }
  return out;
}

}  // namespace cbir
