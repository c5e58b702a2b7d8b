// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cbir {

using LabelMap = std::unordered_map<std::string, std::string>;

/// A labelled n x d feature matrix. Rows keep insertion order; ids are opaque
/// and unique. Values are stored row-major in one contiguous buffer so the
/// distance kernels can scan the gallery without indirection.
class FeatureSet {
 public:
  FeatureSet() = default;
  /// `dim == 0` leaves the dimension to be fixed by the first row.
  explicit FeatureSet(std::size_t dim) : dim_(dim) {}

  /// Appends a row. Throws DataError on an empty or duplicate id, an empty
  /// label, or a non-finite value; DimensionError on a length mismatch.
  void add(std::string id, std::span<const double> values, std::string label);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  std::size_t dim() const noexcept { return dim_; }

  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  const std::vector<double>& data() const noexcept { return data_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Throws DataError when the id is unknown.
  const std::string& label_of(std::string_view id) const;
  LabelMap label_map() const;

  /// Distinct labels in lexicographic order.
  std::vector<std::string> classes() const;

  /// Rows at `indices`, in the order given.
  FeatureSet subset(std::span<const std::size_t> indices) const;

  /// Replaces every row's values; `values` must hold size() rows of `dim`.
  FeatureSet with_values(std::size_t dim, std::vector<double> values) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// FNV-1a 64-bit hash, used for training fingerprints and file digests.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Fingerprint of a set's ids in storage order.
std::uint64_t id_fingerprint(const FeatureSet& fs);

std::string hex64(std::uint64_t value);

}  // namespace cbir
