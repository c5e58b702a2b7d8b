// SPDX-License-Identifier: Apache-2.0

#include <fstream>

#include "cbir/cli.hpp"
#include "cbir/error.hpp"
#include "cbir/feature_set.hpp"
#include "cli_internal.hpp"

namespace cbir::cli {

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
  }
  return hex64(h);
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output, bool is_directory) {
  if (is_directory) return output / "run_manifest.json";
  std::filesystem::path p = output;
  p += ".manifest.json";
  return p;
}

RunManifest::RunManifest(std::string subcommand, std::vector<std::string> args)
    : subcommand_(std::move(subcommand)), args_(std::move(args)) {}

void RunManifest::set_option(const std::string& name, nlohmann::ordered_json value) {
  options_[name] = std::move(value);
}

void RunManifest::add_seed(const std::string& name, std::uint64_t seed) { seeds_[name] = seed; }

void RunManifest::add_input(const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    inputs_.push_back({{"path", path.string()}, {"kind", "directory"}});
    return;
  }
  inputs_.push_back({{"path", path.string()},
                     {"bytes", std::filesystem::file_size(path)},
                     {"fnv1a64", file_digest(path)}});
}

void RunManifest::add_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(path, ec)) {
    outputs_.push_back({{"path", path.string()}, {"fnv1a64", file_digest(path)}});
  } else {
    outputs_.push_back({{"path", path.string()}});
  }
}

void RunManifest::set_wall_clock(double seconds) { wall_clock_ = seconds; }

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "cbir";
  j["version"] = kToolVersion;
  j["subcommand"] = subcommand_;
  j["args"] = args_;
  j["options"] = options_;
  j["seeds"] = seeds_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["wall_clock_seconds"] = wall_clock_;
  return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write run manifest " + path.string());
  out << to_json().dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace cbir::cli
