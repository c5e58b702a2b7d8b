// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <map>
#include <sstream>

#include "cbir/error.hpp"
#include "cli_internal.hpp"

namespace cbir::cli {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string pipeline_text(const std::string& arg) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(arg, ec)) return arg;
  std::ifstream in(arg);
  if (!in) throw IoError("cannot read pipeline file " + arg);
  std::ostringstream text;
  text << in.rdbuf();
  std::string s = text.str();
  // Lines may hold one stage each; '#' starts a comment.
  std::string joined;
  std::istringstream lines(s);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (line.empty()) continue;
    if (!joined.empty()) joined += ',';
    joined += line;
  }
  return joined;
}

void TransformOptions::add_to(CLI::App& app, bool with_dict) {
  app.add_option("--dct", dct, "DCT, keeping KEEP leading coefficients or all")
      ->expected(0, 1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->type_name("[KEEP|all]");
  app.add_flag("--zscore", zscore, "z-score normalisation fitted on the training rows");
  app.add_option("--pca", pca, "project onto K principal components")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->type_name("K");
  app.add_option("--dwt", dwt, "Haar approximation, LEVELS levels")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->type_name("LEVELS");
  app.add_option("--pdf", pdf, "value histogram with BINS bins, optionally over [LO, HI]")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->type_name("BINS[:LO:HI]");
  app.add_option("--pipeline", pipeline, "stage list, or a file holding one")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->type_name("SPEC|FILE");
  if (!with_dict) return;
  app.add_option("--dict", dict, "sparse coding stage with a learned dictionary")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->check(CLI::IsMember({"kmeans", "ksvd"}))
      ->type_name("kmeans|ksvd");
  app.add_option("--size", size, "dictionary atoms")->capture_default_str();
  app.add_option("--sparsity", sparsity, "K-SVD coding sparsity (0 = default)")->capture_default_str();
  app.add_option("--dict-iters", dict_iters, "dictionary learner iterations (0 = 50 for ksvd, 100 for kmeans)")->capture_default_str();
  app.add_option("--dict-seed", dict_seed, "dictionary learner seed")->capture_default_str();
  add_cl_to(app);
}

void TransformOptions::add_cl_to(CLI::App& app) {
  app.add_option("--cl", cl, "coefficient learner")
      ->check(CLI::IsMember({"homotopy", "lasso", "en", "elastic_net", "ssf"}))
      ->capture_default_str();
  app.add_option("--lambda", lambda, "l1 penalty")->capture_default_str();
  app.add_option("--lambda2", lambda2, "l2 penalty for the elastic net (default: lambda)");
  app.add_option("--scale", scale, "penalties relative to lambda_max or absolute")
      ->check(CLI::IsMember({"rel", "abs"}))
      ->capture_default_str();
  app.add_option("--max-iter", max_iter, "solver iteration cap")->capture_default_str();
  app.add_option("--tol", tol, "solver tolerance")->capture_default_str();
}

ClSpec TransformOptions::cl_spec() const {
  ClSpec s;
  s.algorithm = parse_cl_algorithm(cl);
  s.lambda1 = lambda;
  s.lambda2 = lambda2;
  s.relative = scale == "rel";
  s.max_iter = max_iter;
  s.tol = tol;
  return s;
}

SparseStageSpec TransformOptions::sparse_spec(DictLearner learner) const {
  SparseStageSpec s;
  s.learner = learner;
  s.size = size;
  s.sparsity = sparsity;
  s.iters = dict_iters;
  s.seed = dict_seed;
  s.cl = cl_spec();
  return s;
}

std::vector<StageSpec> TransformOptions::stages(const CLI::App& app) const {
  std::vector<StageSpec> out;
  std::map<std::string, std::size_t> seen;
  for (const CLI::Option* opt : app.parse_order()) {
    const std::string name = opt->get_name();
    const std::size_t k = seen[name]++;
    if (name == "--dct") {
      out.push_back(parse_stage(dct.at(k).empty() ? "dct:all" : "dct:" + dct.at(k)));
    } else if (name == "--zscore") {
      out.push_back(parse_stage("zscore"));
    } else if (name == "--pca") {
      out.push_back(parse_stage("pca:" + pca.at(k)));
    } else if (name == "--dwt") {
      out.push_back(parse_stage("dwt:" + dwt.at(k)));
    } else if (name == "--pdf") {
      out.push_back(parse_stage("pdf:" + pdf.at(k)));
    } else if (name == "--pipeline") {
      for (auto& s : parse_stages(pipeline_text(pipeline.at(k)))) out.push_back(std::move(s));
    } else if (name == "--dict") {
      StageSpec s;
      s.kind = StageKind::sparse;
      s.sparse = sparse_spec(parse_dict_learner(dict.at(k)));
      // Round-trip through the text form so the same checks apply.
      out.push_back(parse_stage(format_stage(s)));
    }
  }
  return out;
}

}  // namespace cbir::cli
