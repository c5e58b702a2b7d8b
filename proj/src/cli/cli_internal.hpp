// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbir/metrics.hpp"
#include "cbir/retrieval.hpp"
#include "json.hpp"

namespace cbir::cli {

// ---------------------------------------------------------------------------
// Option groups shared by several subcommands

/// --dct [KEEP|all], --zscore, --pca K, --dwt L, --pdf BINS[:LO:HI],
/// --pipeline SPEC|FILE and --dict METHOD, composed in command-line order.
struct TransformOptions {
  std::vector<std::string> dct;
  std::vector<std::string> pca;
  std::vector<std::string> dwt;
  std::vector<std::string> pdf;
  std::vector<std::string> pipeline;
  std::vector<std::string> dict;
  int zscore = 0;

  // Settings of the sparse stage that --dict inserts.
  std::size_t size = 10;
  std::size_t sparsity = 0;
  std::size_t dict_iters = 0;
  std::uint64_t dict_seed = 0;
  std::string cl = "homotopy";
  double lambda = 0.1;
  std::optional<double> lambda2;
  std::string scale = "rel";
  std::size_t max_iter = 10000;
  double tol = 1e-7;

  void add_to(CLI::App& app, bool with_dict);
  void add_cl_to(CLI::App& app);
  /// Stage list in the order the flags appeared on `app`'s command line.
  std::vector<StageSpec> stages(const CLI::App& app) const;
  ClSpec cl_spec() const;
  SparseStageSpec sparse_spec(DictLearner learner) const;
};

/// Reads a pipeline argument: the contents of FILE when it names a regular
/// file, the text itself otherwise.
std::string pipeline_text(const std::string& arg);

std::vector<std::string> split_list(const std::string& text);

// ---------------------------------------------------------------------------
// Run manifest

class RunManifest {
 public:
  RunManifest(std::string subcommand, std::vector<std::string> args);

  void set_option(const std::string& name, nlohmann::ordered_json value);
  void add_seed(const std::string& name, std::uint64_t seed);
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void set_wall_clock(double seconds);

  nlohmann::ordered_json to_json() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string subcommand_;
  std::vector<std::string> args_;
  nlohmann::ordered_json options_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json seeds_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
  double wall_clock_ = 0.0;
};

/// FNV-1a over the file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

/// OUT.manifest.json for a file, OUT/run_manifest.json for a directory.
std::filesystem::path manifest_path_for(const std::filesystem::path& output, bool is_directory);

// ---------------------------------------------------------------------------
// Subcommands

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> args;  ///< full argument list, for the manifest
};

/// Registers every subcommand on `app`; the returned callable runs whichever
/// one was parsed.
class Commands {
 public:
  explicit Commands(CLI::App& app);
  ~Commands();
  int execute(Context& ctx);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace cbir::cli
