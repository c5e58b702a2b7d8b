// SPDX-License-Identifier: Apache-2.0

#include "cbir/feature_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <string_view>

#include "cbir/detail/binary_io.hpp"
#include "cbir/error.hpp"

namespace cbir {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view field, long row, std::size_t column) {
  field = trim(field);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw FormatError("row " + std::to_string(row) + ": column " + std::to_string(column) +
                          " is not a number: '" + std::string(field) + "'",
                      row);
  }
  if (!std::isfinite(v)) {
    throw DataError("row " + std::to_string(row) + ": non-finite value at column " +
                    std::to_string(column));
  }
  return v;
}

std::vector<FeatureRow> read_csv_rows(std::istream& in) {
  std::vector<FeatureRow> rows;
  std::size_t dim = 0;
  std::string line;
  long row = 0;
  while (std::getline(in, line)) {
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    FeatureRow r;
    auto comma = rest.find(',');
    r.id = std::string(trim(rest.substr(0, comma)));
    if (r.id.empty()) throw FormatError("row " + std::to_string(row) + ": empty id", row);
    while (comma != std::string_view::npos) {
      rest = rest.substr(comma + 1);
      comma = rest.find(',');
      r.values.push_back(parse_real(rest.substr(0, comma), row, r.values.size()));
    }
    if (r.values.empty()) throw FormatError("row " + std::to_string(row) + ": no values", row);
    if (dim == 0) dim = r.values.size();
    if (r.values.size() != dim) {
      throw FormatError("row " + std::to_string(row) + " ('" + r.id + "') has " +
                            std::to_string(r.values.size()) + " values, expected " +
                            std::to_string(dim),
                        row);
    }
    rows.push_back(std::move(r));
    ++row;
  }
  return rows;
}

std::vector<FeatureRow> read_binary_rows(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kFeatureMagic, 4) != 0) {
    throw FormatError("bad feature file magic");
  }
  const auto version = detail::read_le<std::uint32_t>(in, "version");
  if (version != kFeatureVersion) {
    throw FormatError("unsupported feature file version " + std::to_string(version));
  }
  const auto n = detail::read_le<std::uint32_t>(in, "row count");
  const auto d = detail::read_le<std::uint32_t>(in, "dimension");
  if (n > 0 && d == 0) throw FormatError("zero dimension");
  std::vector<FeatureRow> rows;
  rows.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const long row = static_cast<long>(i);
    FeatureRow r;
    const auto len = detail::read_le<std::uint16_t>(in, "id length");
    r.id.resize(len);
    if (len > 0 && !in.read(r.id.data(), len)) {
      throw FormatError("row " + std::to_string(row) + ": truncated id", row);
    }
    if (r.id.empty()) throw FormatError("row " + std::to_string(row) + ": empty id", row);
    r.values.resize(d);
    for (std::uint32_t j = 0; j < d; ++j) {
      const float v = detail::read_f32(in, "value");
      if (!std::isfinite(v)) {
        throw DataError("row " + std::to_string(row) + ": non-finite value at column " +
                        std::to_string(j));
      }
      r.values[j] = v;
    }
    rows.push_back(std::move(r));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after last row");
  return rows;
}

}  // namespace

FeatureFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? FeatureFormat::csv : FeatureFormat::binary;
}

std::vector<FeatureRow> read_feature_rows(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open feature file " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  const bool binary = in.gcount() == 4 && std::memcmp(magic, kFeatureMagic, 4) == 0;
  in.clear();
  in.seekg(0);
  return binary ? read_binary_rows(in) : read_csv_rows(in);
}

LabelMap load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  LabelMap labels;
  std::string line;
  long row = 0;
  while (std::getline(in, line)) {
    std::string_view s = trim(line);
    if (s.empty()) continue;
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) {
      throw ManifestError("manifest row " + std::to_string(row) + " lacks an 'id,label' pair");
    }
    std::string id(trim(s.substr(0, comma)));
    std::string label(trim(s.substr(comma + 1)));
    if (id.empty() || label.empty()) {
      throw ManifestError("manifest row " + std::to_string(row) + " has an empty field");
    }
    auto [it, inserted] = labels.emplace(id, label);
    if (!inserted && it->second != label) {
      throw ManifestError("manifest gives id '" + id + "' two labels");
    }
    ++row;
  }
  return labels;
}

FeatureSet load_feature_set(const std::filesystem::path& path,
                            const std::filesystem::path& manifest) {
  const LabelMap labels = load_manifest(manifest);
  auto rows = read_feature_rows(path);
  FeatureSet fs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto it = labels.find(rows[i].id);
    if (it == labels.end()) {
      throw ManifestError("id '" + rows[i].id + "' (row " + std::to_string(i) +
                          ") is missing from the manifest");
    }
    fs.add(std::move(rows[i].id), rows[i].values, it->second);
  }
  return fs;
}

void save_feature_set(const FeatureSet& fs, const std::filesystem::path& path,
                      FeatureFormat format) {
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& id = fs.id(i);
    if (id.empty()) throw DataError("row " + std::to_string(i) + " has an empty id");
    if (format == FeatureFormat::csv && id.find_first_of(",\n\r") != std::string::npos) {
      throw FormatError("id '" + id + "' cannot be written to CSV", static_cast<long>(i));
    }
    if (format == FeatureFormat::binary) {
      if (id.size() > std::numeric_limits<std::uint16_t>::max()) {
        throw FormatError("id longer than 65535 bytes", static_cast<long>(i));
      }
      for (double v : fs.row(i)) {
        if (std::abs(v) > std::numeric_limits<float>::max()) {
          throw DataError("id '" + id + "' has a value outside float32 range");
        }
      }
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  if (format == FeatureFormat::csv) {
    char buf[40];
    for (std::size_t i = 0; i < fs.size(); ++i) {
      out << fs.id(i);
      for (double v : fs.row(i)) {
        std::snprintf(buf, sizeof buf, ",%.*g", kCsvDigits, v);
        out << buf;
      }
      out << '\n';
    }
  } else {
    out.write(kFeatureMagic, 4);
    detail::write_le<std::uint32_t>(out, kFeatureVersion);
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(fs.size()));
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(fs.dim()));
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const auto& id = fs.id(i);
      detail::write_le<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
      out.write(id.data(), static_cast<std::streamsize>(id.size()));
      for (double v : fs.row(i)) detail::write_f32(out, static_cast<float>(v));
    }
  }
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

void save_manifest(const FeatureSet& fs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t i = 0; i < fs.size(); ++i) out << fs.id(i) << ',' << fs.label(i) << '\n';
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

}  // namespace cbir
