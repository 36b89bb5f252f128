// Copyright 2026 The flowsieve Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "flowsieve/error.hpp"
#include "flowsieve/pipeline.hpp"
#include "flowsieve/ranking.hpp"

namespace flowsieve::pipeline {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_data("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw_data("write failed for '" + path.string() + "'");
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

}  // namespace

RunReport RunReport::parse(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw_data("report is not a JSON object");
  if (!doc.contains("tool") || !doc.contains("command")) throw_data("not a flowsieve report");
  return RunReport(std::move(doc));
}

RunReport RunReport::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open report '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunReport::dump() const { return doc_.dump(2) + "\n"; }

bool RunReport::has_ranking() const { return doc_.contains("selection"); }
bool RunReport::has_benchmark() const { return doc_.contains("benchmark"); }
bool RunReport::has_grid() const { return doc_.contains("grid_search"); }

std::vector<std::string> RunReport::selected_features() const {
  if (!has_ranking()) throw_data("report has no feature selection");
  return doc_.at("selection").at("feature_set").at("names").get<std::vector<std::string>>();
}

std::string RunReport::ranking_csv() const {
  if (!has_ranking()) throw_data("report has no feature ranking");
  ranking::CombinedRanking r;
  for (const auto& e : doc_.at("selection").at("ranking")) {
    r.entries.push_back({e.at("feature").get<std::string>(), e.at("percent").get<double>()});
  }
  return ranking::to_csv(r);
}

std::string RunReport::benchmark_table() const {
  if (!has_benchmark()) throw_data("report has no benchmark");
  const auto& rows = doc_.at("benchmark").at("rows");
  const nlohmann::json* timing = nullptr;
  if (doc_.contains("timing") && doc_["timing"].contains("benchmark")) timing = &doc_["timing"]["benchmark"];

  const std::vector<std::string> header = {"Model", "Feature Selection", "ACC", "PRC", "RCL",
                                           "F1S",   "FPR",               "Training Time"};
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto& m = row.at("metrics");
    std::string time = "-";
    if (timing && i < timing->size()) time = format("%.5g", (*timing)[i].at("training_time_s").get<double>());
    cells.push_back({row.at("model").get<std::string>(),
                     row.at("feature_selection").get<bool>() ? "Yes" : "No",
                     format("%.3f", m.at("acc").get<double>()),
                     format("%.3f", m.at("prc").get<double>()),
                     format("%.3f", m.at("rcl").get<double>()),
                     format("%.3f", m.at("f1s").get<double>()),
                     format("%.4g", m.at("fpr").get<double>()),
                     time});
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : cells) width[c] = std::max(width[c], r[c].size());
  }
  auto emit = [&](const std::vector<std::string>& r, std::string& out) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c > 0) out += "  ";
      out += c < 2 ? pad_right(r[c], width[c]) : pad_left(r[c], width[c]);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  };
  std::string out;
  emit(header, out);
  for (const auto& r : cells) emit(r, out);
  return out;
}

void RunReport::write(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw_data("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_text(dir / "report.json", dump());
  if (has_ranking()) {
    write_text(dir / "ranking.csv", ranking_csv());
    std::string names;
    for (const auto& n : selected_features()) names += n + "\n";
    write_text(dir / "features.txt", names);
  }
  if (has_benchmark()) write_text(dir / "benchmark.txt", benchmark_table());
}

}  // namespace flowsieve::pipeline
