// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cbir/cli.hpp"
#include "cbir/error.hpp"
#include "cbir/eval.hpp"
#include "cbir/feature_io.hpp"
#include "cbir/features.hpp"
#include "cbir/parallel.hpp"
#include "cbir/sparse.hpp"
#include "cli_internal.hpp"

namespace cbir::cli {
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void make_parent(const fs::path& file) {
  if (file.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
  }
}

nlohmann::ordered_json option_values(const CLI::App& app) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_name() == "--help" || opt->count() == 0) continue;
    j[opt->get_name()] = opt->results();
  }
  return j;
}

std::size_t jobs_or_default(std::size_t jobs) { return jobs == 0 ? default_jobs() : jobs; }

}  // namespace

struct Commands::State {
  // Every subcommand pointer, in registration order.
  CLI::App* extract = nullptr;
  CLI::App* learn_dict = nullptr;
  CLI::App* encode = nullptr;
  CLI::App* reduce = nullptr;
  CLI::App* query = nullptr;
  CLI::App* evaluate = nullptr;
  CLI::App* report = nullptr;
  CLI::App* sweep = nullptr;

  // Shared across subcommands; each subcommand binds only what it uses.
  std::string features, manifest, out, in_dir, dict_path, gallery, query_id, queries_file;
  std::string kind = "gabor";
  std::string method = "ksvd";
  std::string metric = "ed";
  std::string split = "holdout";
  std::size_t test_per_class = 10;
  std::uint64_t seed = 0;
  std::size_t size = 10, sparsity = 0, iters = 0;
  std::size_t top = 10;
  std::size_t jobs = 0;
  bool strict_loocv = false;
  std::string run_manifest;

  std::size_t hist_bins = 8, hog_cell = 8, hog_bins = 9, scales = 5, orientations = 5;
  bool no_dc_removal = false;

  std::vector<std::string> report_inputs;
  std::string report_value = "map";

  std::string sizes = "10,20,30,40,50,256,512";
  std::string learners = "ksvd";
  std::string cls = "homotopy,lasso,en,ssf";
  std::string metrics = "ed,md,hd,cd";
  std::string lambdas = "0.1";

  TransformOptions transforms;

  int run_extract(Context& ctx);
  int run_learn_dict(Context& ctx);
  int run_encode(Context& ctx);
  int run_reduce(Context& ctx);
  int run_query(Context& ctx);
  int run_evaluate(Context& ctx);
  int run_report(Context& ctx);
  int run_sweep(Context& ctx);

  void finish(RunManifest& m, const fs::path& output, bool is_directory,
              std::chrono::steady_clock::time_point start) const;
};

void Commands::State::finish(RunManifest& m, const fs::path& output, bool is_directory,
                             std::chrono::steady_clock::time_point start) const {
  m.set_wall_clock(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  fs::path target;
  if (!run_manifest.empty()) {
    target = run_manifest;
  } else if (!output.empty()) {
    target = manifest_path_for(output, is_directory);
  } else {
    return;
  }
  make_parent(target);
  m.write(target);
}

Commands::Commands(CLI::App& app) : state_(std::make_unique<State>()) {
  State& s = *state_;
  auto common_manifest = [&](CLI::App* sub) {
    sub->add_option("--run-manifest", s.run_manifest, "where to write the run manifest");
  };
  auto jobs = [&](CLI::App* sub) {
    sub->add_option("--jobs", s.jobs, "worker threads (0 = all cores)")->capture_default_str();
  };

  s.extract = app.add_subcommand("extract", "compute image features");
  s.extract->add_option("--kind", s.kind, "feature kind")
      ->check(CLI::IsMember({"gabor", "hist", "hog"}))
      ->capture_default_str();
  s.extract->add_option("--in", s.in_dir, "image directory")->required();
  s.extract->add_option("--manifest", s.manifest, "id,label file")->required();
  s.extract->add_option("--out", s.out, "feature file (.csv or binary)")->required();
  s.extract->add_option("--bins", s.hist_bins, "histogram bins per channel")->capture_default_str();
  s.extract->add_option("--cell", s.hog_cell, "HOG cell size in pixels")->capture_default_str();
  s.extract->add_option("--hog-bins", s.hog_bins, "HOG orientation bins")->capture_default_str();
  s.extract->add_option("--scales", s.scales, "Gabor scales")->capture_default_str();
  s.extract->add_option("--orientations", s.orientations, "Gabor orientations")->capture_default_str();
  s.extract->add_flag("--no-dc-removal", s.no_dc_removal, "keep the Gabor kernel mean");
  jobs(s.extract);
  common_manifest(s.extract);

  s.learn_dict = app.add_subcommand("learn-dict", "learn a dictionary from feature vectors");
  s.learn_dict->add_option("--features", s.features, "training features")->required();
  s.learn_dict->add_option("--manifest", s.manifest, "id,label file")->required();
  s.learn_dict->add_option("--method", s.method, "dictionary learner")
      ->check(CLI::IsMember({"kmeans", "ksvd"}))
      ->capture_default_str();
  s.learn_dict->add_option("--size", s.size, "atoms")->capture_default_str();
  s.learn_dict->add_option("--sparsity", s.sparsity, "K-SVD coding sparsity (0 = default)")
      ->capture_default_str();
  s.learn_dict->add_option("--iters", s.iters, "learner iterations (0 = 50 for ksvd, 100 for kmeans)")
      ->capture_default_str();
  s.learn_dict->add_option("--seed", s.seed, "learner seed")->capture_default_str();
  s.learn_dict->add_option("--out", s.out, "dictionary file")->required();
  common_manifest(s.learn_dict);

  s.encode = app.add_subcommand("encode", "sparse-code feature vectors against a dictionary");
  s.encode->add_option("--features", s.features, "features to encode")->required();
  s.encode->add_option("--manifest", s.manifest, "id,label file")->required();
  s.encode->add_option("--dict", s.dict_path, "dictionary file")->required();
  s.encode->add_option("--out", s.out, "code file (.csv or binary)")->required();
  s.transforms.add_cl_to(*s.encode);
  jobs(s.encode);
  common_manifest(s.encode);

  s.reduce = app.add_subcommand("reduce", "fit transforms on a feature set and apply them");
  s.reduce->add_option("--features", s.features, "input features")->required();
  s.reduce->add_option("--manifest", s.manifest, "id,label file")->required();
  s.reduce->add_option("--out", s.out, "output feature file")->required();
  s.transforms.add_to(*s.reduce, false);
  jobs(s.reduce);
  common_manifest(s.reduce);

  s.query = app.add_subcommand("query", "rank a gallery for one query");
  s.query->add_option("--gallery", s.gallery, "gallery features")->required();
  s.query->add_option("--manifest", s.manifest, "id,label file")->required();
  s.query->add_option("--query-id", s.query_id, "query id")->required();
  s.query->add_option("--queries", s.queries_file,
                      "feature file holding the query when it is not in the gallery");
  s.query->add_option("--metric", s.metric, "distance")
      ->check(CLI::IsMember({"ed", "md", "hd", "cd"}))
      ->capture_default_str();
  s.query->add_option("--top", s.top, "results to print (0 = all)")->capture_default_str();
  s.transforms.add_to(*s.query, true);
  common_manifest(s.query);

  s.evaluate = app.add_subcommand("evaluate", "run a retrieval experiment and write its report");
  s.evaluate->add_option("--features", s.features, "feature file")->required();
  s.evaluate->add_option("--manifest", s.manifest, "id,label file")->required();
  s.evaluate->add_option("--out", s.out, "report directory")->required();
  s.evaluate->add_option("--metric", s.metric, "distance")
      ->check(CLI::IsMember({"ed", "md", "hd", "cd"}))
      ->capture_default_str();
  s.evaluate->add_option("--split", s.split, "validation protocol")
      ->check(CLI::IsMember({"holdout", "loocv"}))
      ->capture_default_str();
  s.evaluate->add_option("--test-per-class", s.test_per_class, "holdout queries per class")
      ->capture_default_str();
  s.evaluate->add_option("--seed", s.seed, "split seed")->capture_default_str();
  s.evaluate->add_flag("--strict-loocv", s.strict_loocv, "refit the pipeline for every query");
  s.transforms.add_to(*s.evaluate, true);
  jobs(s.evaluate);
  common_manifest(s.evaluate);

  s.report = app.add_subcommand("report", "tabulate evaluation reports by pipeline and metric");
  s.report->add_option("inputs", s.report_inputs, "report.json files or directories")->required();
  s.report->add_option("--value", s.report_value, "cell value")
      ->check(CLI::IsMember({"map", "map11", "er"}))
      ->capture_default_str();
  s.report->add_option("--out", s.out, "CSV table (stdout when omitted)");
  common_manifest(s.report);

  s.sweep = app.add_subcommand("sweep", "evaluate the grid of dictionary sizes, learners and metrics");
  s.sweep->add_option("--features", s.features, "feature file")->required();
  s.sweep->add_option("--manifest", s.manifest, "id,label file")->required();
  s.sweep->add_option("--out", s.out, "output directory")->required();
  s.sweep->add_option("--sizes", s.sizes, "dictionary sizes")->capture_default_str();
  s.sweep->add_option("--learners", s.learners, "dictionary learners")->capture_default_str();
  s.sweep->add_option("--cls", s.cls, "coefficient learners")->capture_default_str();
  s.sweep->add_option("--metrics", s.metrics, "distances")->capture_default_str();
  s.sweep->add_option("--lambdas", s.lambdas, "l1 penalties")->capture_default_str();
  s.sweep->add_option("--split", s.split, "validation protocol")
      ->check(CLI::IsMember({"holdout", "loocv"}))
      ->capture_default_str();
  s.sweep->add_option("--test-per-class", s.test_per_class, "holdout queries per class")
      ->capture_default_str();
  s.sweep->add_option("--seed", s.seed, "split seed")->capture_default_str();
  s.sweep->add_option("--sparsity", s.transforms.sparsity, "K-SVD sparsity (0 = default)")
      ->capture_default_str();
  s.sweep->add_option("--dict-iters", s.transforms.dict_iters, "learner iterations")
      ->capture_default_str();
  s.sweep->add_option("--dict-seed", s.transforms.dict_seed, "learner seed")->capture_default_str();
  s.sweep->add_option("--scale", s.transforms.scale, "penalty scale")
      ->check(CLI::IsMember({"rel", "abs"}))
      ->capture_default_str();
  s.sweep->add_option("--max-iter", s.transforms.max_iter, "solver iteration cap")
      ->capture_default_str();
  s.sweep->add_option("--tol", s.transforms.tol, "solver tolerance")->capture_default_str();
  s.sweep->add_option("--pipeline", s.transforms.pipeline, "stages applied before sparse coding")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  jobs(s.sweep);
  common_manifest(s.sweep);
}

Commands::~Commands() = default;

int Commands::execute(Context& ctx) {
  State& s = *state_;
  if (s.extract->parsed()) return s.run_extract(ctx);
  if (s.learn_dict->parsed()) return s.run_learn_dict(ctx);
  if (s.encode->parsed()) return s.run_encode(ctx);
  if (s.reduce->parsed()) return s.run_reduce(ctx);
  if (s.query->parsed()) return s.run_query(ctx);
  if (s.evaluate->parsed()) return s.run_evaluate(ctx);
  if (s.report->parsed()) return s.run_report(ctx);
  if (s.sweep->parsed()) return s.run_sweep(ctx);
  throw CLI::CallForHelp();
}

// ---------------------------------------------------------------------------

int Commands::State::run_extract(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m("extract", ctx.args);
  m.set_option("flags", option_values(*extract));
  ExtractSpec spec;
  spec.kind = parse_feature_kind(kind);
  spec.gabor = GaborSpec::defaults(scales, orientations);
  spec.gabor.remove_dc = !no_dc_removal;
  spec.hist_bins = hist_bins;
  spec.hog_cell = hog_cell;
  spec.hog_bins = hog_bins;
  const LabelMap labels = load_manifest(manifest);
  m.add_input(manifest);
  m.add_input(in_dir);
  const FeatureSet fs = extract_directory(in_dir, labels, spec, jobs_or_default(jobs));
  make_parent(out);
  save_feature_set(fs, out, format_for_path(out));
  m.add_output(out);
  finish(m, out, false, start);
  ctx.out << "extracted " << fs.size() << " images, " << fs.dim() << " features each\n";
  return kExitOk;
}

int Commands::State::run_learn_dict(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m("learn-dict", ctx.args);
  m.set_option("flags", option_values(*learn_dict));
  m.add_seed("dictionary", seed);
  const FeatureSet train = load_feature_set(features, manifest);
  m.add_input(features);
  m.add_input(manifest);
  const DictLearner learner = parse_dict_learner(method);
  const std::size_t rounds = iters ? iters : default_dict_iters(learner);
  std::vector<double> trace;
  const Dictionary dict =
      learner == DictLearner::kmeans
          ? build_dict_kmeans(train, size, seed, rounds)
          : build_dict_ksvd(train, size, sparsity ? sparsity : default_ksvd_sparsity(size), rounds,
                            seed, &trace);
  make_parent(out);
  save_dictionary(dict, out);
  m.add_output(out);
  if (!trace.empty()) m.set_option("objective_trace", trace);
  finish(m, out, false, start);
  ctx.out << "dictionary " << to_string(learner) << " " << dict.dim() << "x" << dict.size();
  if (!trace.empty()) ctx.out << " objective " << num(trace.back());
  ctx.out << "\n";
  return kExitOk;
}

int Commands::State::run_encode(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m("encode", ctx.args);
  m.set_option("flags", option_values(*encode));
  const FeatureSet fs = load_feature_set(features, manifest);
  const Dictionary dict = load_dictionary(dict_path);
  m.add_input(features);
  m.add_input(manifest);
  m.add_input(dict_path);
  const ClSpec cl = transforms.cl_spec();
  const EncodeResult res = encode_set(dict, fs, cl, jobs_or_default(jobs));
  make_parent(out);
  save_feature_set(res.codes, out, format_for_path(out));
  m.add_output(out);
  m.set_option("unconverged", res.report.unconverged_ids);
  finish(m, out, false, start);
  ctx.out << "encoded " << res.report.vectors << " vectors, " << res.report.converged
          << " converged\n";
  if (!res.report.unconverged_ids.empty()) {
    ctx.err << "warning: " << res.report.unconverged_ids.size()
            << " vectors hit the iteration cap\n";
  }
  return kExitOk;
}

int Commands::State::run_reduce(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m("reduce", ctx.args);
  m.set_option("flags", option_values(*reduce));
  const FeatureSet fs = load_feature_set(features, manifest);
  m.add_input(features);
  m.add_input(manifest);
  const auto stages = transforms.stages(*reduce);
  m.set_option("pipeline", format_stages(stages));
  const auto pipeline = fit_pipeline(stages, fs, jobs_or_default(jobs));
  const FeatureSet outset = apply_pipeline(pipeline, fs, jobs_or_default(jobs));
  make_parent(out);
  save_feature_set(outset, out, format_for_path(out));
  m.add_output(out);
  finish(m, out, false, start);
  ctx.out << "reduced " << fs.dim() << " -> " << outset.dim() << " dimensions\n";
  return kExitOk;
}

int Commands::State::run_query(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m("query", ctx.args);
  m.set_option("flags", option_values(*query));
  const FeatureSet g = load_feature_set(gallery, manifest);
  m.add_input(gallery);
  m.add_input(manifest);
  std::vector<double> q;
  if (!queries_file.empty()) {
    m.add_input(queries_file);
    for (auto& row : read_feature_rows(queries_file)) {
      if (row.id == query_id) q = std::move(row.values);
    }
    if (q.empty()) throw DataError("query '" + query_id + "' not found in " + queries_file);
  } else if (auto idx = g.find(query_id)) {
    const auto r = g.row(*idx);
    q.assign(r.begin(), r.end());
  } else {
    throw DataError("query '" + query_id + "' is not in the gallery; pass --queries");
  }
  const auto stages = transforms.stages(*query);
  m.set_option("pipeline", format_stages(stages));
  const auto pipeline = fit_pipeline(stages, g, default_jobs());
  const FeatureSet tg = apply_pipeline(pipeline, g, default_jobs());
  const auto tq = apply_pipeline(pipeline, q);
  const RankedResult r = rank_query(tg, tq, query_id, parse_metric(metric));
  const std::size_t n = top == 0 ? r.entries.size() : std::min(top, r.entries.size());
  ctx.out << "id,distance\n";
  for (std::size_t i = 0; i < n; ++i) ctx.out << r.entries[i].id << "," << num(r.entries[i].distance) << "\n";
  finish(m, {}, false, start);
  return kExitOk;
}

int Commands::State::run_evaluate(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m("evaluate", ctx.args);
  m.set_option("flags", option_values(*evaluate));
  const FeatureSet fs = load_feature_set(features, manifest);
  m.add_input(features);
  m.add_input(manifest);
  ExperimentSpec spec;
  spec.split.mode = parse_split_mode(split);
  spec.split.test_per_class = test_per_class;
  spec.split.seed = seed;
  spec.stages = transforms.stages(*evaluate);
  spec.metric = parse_metric(metric);
  spec.strict_loocv = strict_loocv;
  spec.jobs = jobs_or_default(jobs);
  m.add_seed("split", seed);
  m.set_option("config", config_string(spec));
  const EvalReport rep = run_experiment(fs, spec);
  for (const auto& p : write_report(rep, out)) m.add_output(p);
  finish(m, out, true, start);
  ctx.out << flat_line(rep);
  return kExitOk;
}

namespace {

struct ConfigParts {
  std::string pipeline, metric, split, seed;
};

ConfigParts parse_config(const std::string& config) {
  ConfigParts p;
  std::istringstream in(config);
  std::string part;
  while (std::getline(in, part, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) continue;
    const auto key = part.substr(0, eq), value = part.substr(eq + 1);
    if (key == "pipeline") p.pipeline = value;
    if (key == "metric") p.metric = value;
    if (key == "split") p.split = value;
    if (key == "seed") p.seed = value;
  }
  return p;
}

void collect_reports(const fs::path& p, std::vector<fs::path>& out) {
  std::error_code ec;
  if (fs::is_directory(p, ec)) {
    for (const auto& e : fs::recursive_directory_iterator(p)) {
      if (e.is_regular_file() && e.path().filename() == "report.json") out.push_back(e.path());
    }
  } else if (fs::is_regular_file(p, ec)) {
    out.push_back(p);
  } else {
    throw IoError("no report at " + p.string());
  }
}

// Rows keyed by (pipeline, split, seed); one column per metric in ed, md,
// hd, cd order, then any others.
std::string tabulate(const std::vector<std::pair<ConfigParts, double>>& cells) {
  std::map<std::tuple<std::string, std::string, std::string>, std::map<std::string, double>> rows;
  std::set<std::string> metric_set;
  for (const auto& [cfg, v] : cells) {
    rows[{cfg.pipeline, cfg.split, cfg.seed}][cfg.metric] = v;
    metric_set.insert(cfg.metric);
  }
  std::vector<std::string> metric_cols;
  for (MetricKind k : kAllMetrics) {
    const std::string name(short_name(k));
    if (metric_set.erase(name)) metric_cols.push_back(name);
  }
  metric_cols.insert(metric_cols.end(), metric_set.begin(), metric_set.end());
  std::string out = "pipeline,split,seed";
  for (const auto& c : metric_cols) out += "," + c;
  out += "\n";
  for (const auto& [key, vals] : rows) {
    out += std::get<0>(key) + "," + std::get<1>(key) + "," + std::get<2>(key);
    for (const auto& c : metric_cols) {
      auto it = vals.find(c);
      out += "," + (it == vals.end() ? std::string() : fixed4(it->second));
    }
    out += "\n";
  }
  return out;
}

}  // namespace

int Commands::State::run_report(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m("report", ctx.args);
  m.set_option("flags", option_values(*report));
  std::vector<fs::path> files;
  for (const auto& in : report_inputs) collect_reports(in, files);
  std::sort(files.begin(), files.end());
  std::vector<std::pair<ConfigParts, double>> cells;
  for (const auto& f : files) {
    std::ifstream in(f);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
      cells.emplace_back(parse_config(j.at("config").get<std::string>()),
                         j.at(report_value).get<double>());
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(f.string() + ": " + e.what());
    }
    m.add_input(f);
  }
  const std::string table = tabulate(cells);
  if (out.empty()) {
    ctx.out << table;
  } else {
    make_parent(out);
    write_text(out, table);
    m.add_output(out);
    finish(m, out, false, start);
  }
  return kExitOk;
}

int Commands::State::run_sweep(Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m("sweep", ctx.args);
  m.set_option("flags", option_values(*sweep));
  const FeatureSet fs = load_feature_set(features, manifest);
  m.add_input(features);
  m.add_input(manifest);
  m.add_seed("split", seed);
  m.add_seed("dictionary", transforms.dict_seed);

  std::vector<StageSpec> prefix;
  for (const auto& p : transforms.pipeline) {
    for (auto& st : parse_stages(pipeline_text(p))) prefix.push_back(std::move(st));
  }
  std::vector<std::size_t> size_list;
  for (const auto& t : split_list(sizes)) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) throw SpecError("bad size '" + t + "'");
    size_list.push_back(v);
  }
  std::vector<DictLearner> learner_list;
  for (const auto& t : split_list(learners)) learner_list.push_back(parse_dict_learner(t));
  std::vector<std::string> cl_list = split_list(cls);
  for (const auto& t : cl_list) parse_cl_algorithm(t);
  std::vector<MetricKind> metric_list;
  for (const auto& t : split_list(metrics)) metric_list.push_back(parse_metric(t));
  std::vector<double> lambda_list;
  for (const auto& t : split_list(lambdas)) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || !(v > 0.0)) {
      throw SpecError("bad lambda '" + t + "'");
    }
    lambda_list.push_back(v);
  }
  if (size_list.empty() || learner_list.empty() || cl_list.empty() || metric_list.empty() ||
      lambda_list.empty()) {
    throw SpecError("sweep grid is empty");
  }

  fs::create_directories(out);
  std::string summary = "learner,size,cl,lambda,metric,map,map11,er,status\n";
  std::vector<std::pair<ConfigParts, double>> cells;
  std::size_t done = 0, skipped = 0;
  for (DictLearner learner : learner_list) {
    for (std::size_t size_v : size_list) {
      for (const auto& cl_name : cl_list) {
        for (double lam : lambda_list) {
          TransformOptions t = transforms;
          t.size = size_v;
          t.cl = cl_name;
          t.lambda = lam;
          StageSpec sp;
          sp.kind = StageKind::sparse;
          sp.sparse = t.sparse_spec(learner);
          ExperimentSpec spec;
          spec.split.mode = parse_split_mode(split);
          spec.split.test_per_class = test_per_class;
          spec.split.seed = seed;
          spec.stages = prefix;
          spec.stages.push_back(parse_stage(format_stage(sp)));
          spec.jobs = jobs_or_default(jobs);
          const std::string tag = std::string(to_string(learner)) + "-" + std::to_string(size_v) +
                                  "-" + std::string(to_string(parse_cl_algorithm(cl_name))) +
                                  "-l" + num(lam);
          const std::string row_prefix = std::string(to_string(learner)) + "," +
                                         std::to_string(size_v) + "," +
                                         std::string(to_string(parse_cl_algorithm(cl_name))) +
                                         "," + num(lam) + ",";
          std::vector<EvalReport> reports;
          try {
            reports = run_experiment(fs, spec, metric_list);
          } catch (const PipelineError& e) {
            // A dictionary larger than the training set, for instance.
            ctx.err << "skipped " << tag << ": " << e.what() << "\n";
            for (MetricKind mk : metric_list) {
              summary += row_prefix + std::string(short_name(mk)) + ",,,,skipped\n";
            }
            ++skipped;
            continue;
          }
          for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& rep = reports[i];
            const fs::path dir = fs::path(out) / (tag + "-" + std::string(short_name(metric_list[i])));
            for (const auto& p : write_report(rep, dir)) m.add_output(p);
            summary += row_prefix + std::string(short_name(metric_list[i])) + "," + num(rep.map) +
                       "," + num(rep.map11) + "," + num(rep.er) + ",ok\n";
            cells.emplace_back(parse_config(rep.config), rep.map);
            ctx.out << flat_line(rep);
          }
          ++done;
        }
      }
    }
  }
  write_text(fs::path(out) / "summary.csv", summary);
  write_text(fs::path(out) / "table.csv", tabulate(cells));
  m.add_output(fs::path(out) / "summary.csv");
  m.add_output(fs::path(out) / "table.csv");
  finish(m, out, true, start);
  ctx.err << "sweep: " << done << " configurations evaluated, " << skipped << " skipped\n";
  if (done == 0) throw PipelineError("no sweep configuration could be evaluated");
  return kExitOk;
}

}  // namespace cbir::cli
