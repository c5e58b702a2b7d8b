// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cbir/feature_set.hpp"

namespace cbir {

enum class FeatureFormat { csv, binary };

/// Binary feature file layout (all integers little-endian):
///   "CBFV" | u32 version=1 | u32 n | u32 d |
///   n x { u16 id_len | id bytes | d x float32 }
inline constexpr char kFeatureMagic[4] = {'C', 'B', 'F', 'V'};
inline constexpr std::uint32_t kFeatureVersion = 1;

/// CSV rows carry nine significant digits.
inline constexpr int kCsvDigits = 9;

/// One unlabelled row as it appears in a feature file.
struct FeatureRow {
  std::string id;
  std::vector<double> values;
};

/// Reads rows from a CSV or binary feature file (format sniffed from the
/// magic bytes). The dimension is taken from the first row and enforced on
/// the rest; a mismatch raises FormatError carrying the row index.
std::vector<FeatureRow> read_feature_rows(const std::filesystem::path& path);

/// `id,label` per line, no header.
LabelMap load_manifest(const std::filesystem::path& path);

/// Loads features and attaches labels from the manifest. Every feature id
/// must appear in the manifest (ManifestError otherwise); manifest entries
/// without features are ignored.
FeatureSet load_feature_set(const std::filesystem::path& path,
                            const std::filesystem::path& manifest);

void save_feature_set(const FeatureSet& fs, const std::filesystem::path& path,
                      FeatureFormat format);

void save_manifest(const FeatureSet& fs, const std::filesystem::path& path);

/// Format by extension: ".csv" is CSV, anything else binary.
FeatureFormat format_for_path(const std::filesystem::path& path);

}  // namespace cbir
