// SPDX-License-Identifier: Apache-2.0

#include <cstring>
#include <fstream>

#include "cbir/detail/binary_io.hpp"
#include "cbir/error.hpp"
#include "cbir/sparse.hpp"

namespace cbir {

void save_dictionary(const Dictionary& dict, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kDictionaryMagic, 4);
  detail::write_le<std::uint32_t>(out, kDictionaryVersion);
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(dict.dim()));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(dict.size()));
  detail::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(dict.learner()));
  detail::write_le<std::uint64_t>(out, dict.seed());
  const Eigen::MatrixXd& a = dict.atoms();
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) detail::write_f64(out, a(r, k));
  }
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dictionary " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kDictionaryMagic, 4) != 0) {
    throw FormatError("bad dictionary magic in " + path.string());
  }
  const auto version = detail::read_le<std::uint32_t>(in, "version");
  if (version != kDictionaryVersion) {
    throw FormatError("unsupported dictionary version " + std::to_string(version));
  }
  const auto d = detail::read_le<std::uint32_t>(in, "dimension");
  const auto K = detail::read_le<std::uint32_t>(in, "atom count");
  const auto tag = detail::read_le<std::uint8_t>(in, "learner tag");
  if (tag > 1) throw FormatError("unknown learner tag " + std::to_string(tag));
  const auto seed = detail::read_le<std::uint64_t>(in, "seed");
  Eigen::MatrixXd atoms(d, K);
  for (std::uint32_t k = 0; k < K; ++k) {
    for (std::uint32_t r = 0; r < d; ++r) atoms(r, k) = detail::read_f64(in, "atom value");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in dictionary");
  return Dictionary(std::move(atoms), static_cast<DictLearner>(tag), seed);
}

}  // namespace cbir
