// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>

#include "cbir/error.hpp"
#include "cbir/retrieval.hpp"

namespace cbir {
namespace {

std::vector<std::string_view> split(std::string_view text, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || seps.find(text[i]) != std::string_view::npos) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::string_view token, const std::string& why) {
  throw SpecError("stage '" + std::string(token) + "': " + why);
}

std::uint64_t to_uint(std::string_view token, std::string_view text) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    bad(token, "expected an unsigned integer, got '" + std::string(text) + "'");
  }
  return v;
}

double to_double(std::string_view token, std::string_view text) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || !std::isfinite(v)) {
    bad(token, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void need_args(std::string_view token, const std::vector<std::string_view>& parts,
               std::size_t lo, std::size_t hi) {
  const std::size_t args = parts.size() - 1;
  if (args < lo || args > hi) bad(token, "wrong number of arguments");
}

}  // namespace

StageSpec parse_stage(std::string_view token) {
  token = trim(token);
  const auto parts = split(token, ":");
  const std::string_view name = parts[0];
  StageSpec s;
  if (name == "dct") {
    s.kind = StageKind::dct;
    need_args(token, parts, 0, 1);
    if (parts.size() == 2 && parts[1] != "all") {
      s.dct.keep = to_uint(token, parts[1]);
      if (*s.dct.keep == 0) bad(token, "must keep at least one coefficient");
    }
  } else if (name == "zscore") {
    s.kind = StageKind::zscore;
    need_args(token, parts, 0, 0);
  } else if (name == "pca") {
    s.kind = StageKind::pca;
    need_args(token, parts, 1, 1);
    s.pca_components = to_uint(token, parts[1]);
    if (s.pca_components == 0) bad(token, "needs at least one component");
  } else if (name == "dwt") {
    s.kind = StageKind::dwt;
    need_args(token, parts, 1, 1);
    s.dwt_levels = to_uint(token, parts[1]);
    if (s.dwt_levels == 0) bad(token, "needs at least one level");
  } else if (name == "pdf") {
    s.kind = StageKind::pdf;
    need_args(token, parts, 1, 3);
    if (parts.size() == 3) bad(token, "range needs both LO and HI");
    s.pdf.bins = to_uint(token, parts[1]);
    if (s.pdf.bins == 0) bad(token, "needs at least one bin");
    if (parts.size() == 4) {
      const double lo = to_double(token, parts[2]), hi = to_double(token, parts[3]);
      if (!(lo < hi)) bad(token, "range must satisfy LO < HI");
      s.pdf.range = std::make_pair(lo, hi);
    }
  } else if (name == "sparse") {
    s.kind = StageKind::sparse;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      const auto eq = parts[i].find('=');
      if (eq == std::string_view::npos) bad(token, "expected key=value, got '" + std::string(parts[i]) + "'");
      const auto key = parts[i].substr(0, eq), value = parts[i].substr(eq + 1);
      auto& sp = s.sparse;
      try {
        if (key == "method") {
          sp.learner = parse_dict_learner(value);
        } else if (key == "size") {
          sp.size = to_uint(token, value);
        } else if (key == "sparsity") {
          sp.sparsity = to_uint(token, value);
        } else if (key == "iters") {
          sp.iters = to_uint(token, value);
          if (sp.iters == 0) bad(token, "iters must be positive");
              } else if (key == "seed") {
          sp.seed = to_uint(token, value);
        } else if (key == "cl") {
          sp.cl.algorithm = parse_cl_algorithm(value);
        } else if (key == "lambda") {
          sp.cl.lambda1 = to_double(token, value);
        } else if (key == "lambda2") {
          sp.cl.lambda2 = to_double(token, value);
        } else if (key == "scale") {
          if (value != "rel" && value != "abs") bad(token, "scale must be rel or abs");
          sp.cl.relative = value == "rel";
        } else if (key == "max_iter") {
          sp.cl.max_iter = to_uint(token, value);
        } else if (key == "tol") {
          sp.cl.tol = to_double(token, value);
        } else {
          bad(token, "unknown key '" + std::string(key) + "'");
        }
      } catch (const SpecError& e) {
        if (std::string_view(e.what()).starts_with("stage ")) throw;
        bad(token, e.what());
      }
    }
    const auto& sp = s.sparse;
    if (sp.size < 2) bad(token, "dictionary size must be at least 2");
    if (sp.learner == DictLearner::ksvd && sp.sparsity > sp.size) bad(token, "sparsity exceeds size");
    if (!(sp.cl.lambda1 > 0.0)) bad(token, "lambda must be positive");
    if (sp.cl.lambda2 && *sp.cl.lambda2 < 0.0) bad(token, "lambda2 must be nonnegative");
    if (!(sp.cl.tol > 0.0)) bad(token, "tol must be positive");
    if (sp.cl.max_iter == 0) bad(token, "max_iter must be positive");
  } else {
    bad(token, "unknown stage");
  }
  return s;
}

std::vector<StageSpec> parse_stages(std::string_view text) {
  text = trim(text);
  std::vector<StageSpec> out;
  if (text.empty() || text == "none") return out;
  for (auto token : split(text, ",+")) {
    if (trim(token).empty()) throw SpecError("empty stage in pipeline '" + std::string(text) + "'");
    out.push_back(parse_stage(token));
  }
  return out;
}

std::string format_stage(const StageSpec& s) {
  switch (s.kind) {
    case StageKind::dct:
      return s.dct.keep ? "dct:" + std::to_string(*s.dct.keep) : "dct:all";
    case StageKind::zscore:
      return "zscore";
    case StageKind::pca:
      return "pca:" + std::to_string(s.pca_components);
    case StageKind::dwt:
      return "dwt:" + std::to_string(s.dwt_levels);
    case StageKind::pdf: {
      std::string t = "pdf:" + std::to_string(s.pdf.bins);
      if (s.pdf.range) t += ":" + num(s.pdf.range->first) + ":" + num(s.pdf.range->second);
      return t;
    }
    case StageKind::sparse: {
      const auto& sp = s.sparse;
      std::string t = "sparse:method=" + std::string(to_string(sp.learner)) +
                      ":size=" + std::to_string(sp.size);
      if (sp.learner == DictLearner::ksvd) t += ":sparsity=" + std::to_string(sp.sparsity);
      if (sp.iters) t += ":iters=" + std::to_string(sp.iters);
      t += ":seed=" + std::to_string(sp.seed) +
           ":cl=" + std::string(to_string(sp.cl.algorithm)) + ":lambda=" + num(sp.cl.lambda1);
      if (sp.cl.lambda2) t += ":lambda2=" + num(*sp.cl.lambda2);
      t += std::string(":scale=") + (sp.cl.relative ? "rel" : "abs") +
           ":max_iter=" + std::to_string(sp.cl.max_iter) + ":tol=" + num(sp.cl.tol);
      return t;
    }
  }
  return "?";
}

std::string format_stages(std::span<const StageSpec> stages, char separator) {
  if (stages.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i > 0) out += separator;
    out += format_stage(stages[i]);
  }
  return out;
}

}  // namespace cbir
