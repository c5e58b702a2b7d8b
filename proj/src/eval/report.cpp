// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>

#include "cbir/error.hpp"
#include "cbir/eval.hpp"
#include "json.hpp"

namespace cbir {
namespace {

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["config"] = r.config;
  j["fingerprint"] = hex64(r.fingerprint);
  j["queries"] = r.queries.size();
  j["gallery_size"] = r.gallery_size;
  j["map"] = r.map;
  j["map11"] = r.map11;
  j["er"] = r.er;
  j["per_class_map"] = nlohmann::ordered_json::object();
  for (const auto& [label, v] : r.per_class_map) j["per_class_map"][label] = v;
  j["pr11"] = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < kPrLevels; ++l) {
    j["pr11"].push_back({{"recall", static_cast<double>(l) / 10.0}, {"precision", r.pr11[l]}});
  }
  j["er_curve"] = r.er_curve;
  j["per_query"] = nlohmann::ordered_json::array();
  for (const auto& q : r.queries) {
    j["per_query"].push_back(
        {{"id", q.id}, {"label", q.label}, {"ap", q.ap}, {"ap11", q.ap11}, {"top1", q.top1_correct}});
  }
  return j.dump(2) + "\n";
}

std::string pr_csv(const EvalReport& r) {
  std::string out = "recall,precision\n";
  for (std::size_t l = 0; l < kPrLevels; ++l) {
    out += num(static_cast<double>(l) / 10.0) + "," + num(r.pr11[l]) + "\n";
  }
  return out;
}

std::string er_csv(const EvalReport& r) {
  std::string out = "rank,er\n";
  for (std::size_t k = 0; k < r.er_curve.size(); ++k) {
    out += std::to_string(k + 1) + "," + num(r.er_curve[k]) + "\n";
  }
  return out;
}

std::string flat_line(const EvalReport& r) {
  return "config=" + r.config + ",map=" + num(r.map) + ",map11=" + num(r.map11) +
         ",er=" + num(r.er) + "\n";
}

std::string queries_csv(const EvalReport& r) {
  std::string out = "query_id,label,ap,ap11,top1\n";
  for (const auto& q : r.queries) {
    out += q.id + "," + q.label + "," + num(q.ap) + "," + num(q.ap11) + "," +
           (q.top1_correct ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<std::filesystem::path> write_report(const EvalReport& r,
                                                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::vector<std::pair<std::string, std::string>> files = {
      {"report.json", report_json(r)}, {"pr.csv", pr_csv(r)},           {"er.csv", er_csv(r)},
      {"queries.csv", queries_csv(r)}, {"summary.txt", flat_line(r)}};
  std::vector<std::filesystem::path> written;
  for (const auto& [name, text] : files) {
    write_text(dir / name, text);
    written.push_back(dir / name);
  }
  return written;
}

}  // namespace cbir
