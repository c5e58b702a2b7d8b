// SPDX-License-Identifier: Apache-2.0

#include <cstdio>

#include "cbir/feature_set.hpp"

namespace cbir {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t id_fingerprint(const FeatureSet& fs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& id : fs.ids()) {
    h = fnv1a64(id, h);
    h = fnv1a64(std::string_view("\n", 1), h);
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace cbir
