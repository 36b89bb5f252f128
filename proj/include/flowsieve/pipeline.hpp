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

#ifndef FLOWSIEVE_PIPELINE_HPP_
#define FLOWSIEVE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "flowsieve/dataset.hpp"
#include "flowsieve/selectors.hpp"
#include "flowsieve/trees.hpp"

namespace flowsieve::pipeline {

std::string_view tool_version();

// Everything a run needs. Keys accepted by set() match the config-file keys
// and the CLI long flags (with '-' for '_'):
//   data adapter adapter_dir seed k bins disc_strategy disc_threshold
//   rfe_estimators grid folds test_fraction repeats warmup families out
//   rows informative noise balance shift
struct RunConfig {
  std::string data;
  std::string adapter = "custom";
  std::string adapter_dir;  // empty: the shipped adapters directory
  std::optional<std::uint64_t> seed;
  std::size_t k = 8;
  selectors::DiscretizationConfig disc;
  int rfe_estimators = 20;
  bool grid = true;
  std::size_t folds = 5;
  double test_fraction = 0.2;
  int repeats = 5;
  int warmup = 1;
  std::vector<trees::Family> families = {trees::Family::kRandomForest, trees::Family::kGbmHistogram,
                                         trees::Family::kGbmGoss};
  std::string out;  // output directory; not part of the echo
  flowdata::SyntheticSpec synth;

  void set(std::string_view key, std::string_view value);
  // Applies every entry of a key-value document.
  void apply_file(const std::filesystem::path& path);

  std::uint64_t require_seed() const;
  void validate() const;
  nlohmann::json echo() const;
};

// JSON-backed run report. Everything except the `timing` subtree is a
// deterministic function of the config and the input data.
class RunReport {
 public:
  RunReport() = default;
  explicit RunReport(nlohmann::json doc) : doc_(std::move(doc)) {}

  static RunReport parse(std::string_view text);
  static RunReport load(const std::filesystem::path& path);

  const nlohmann::json& json() const { return doc_; }
  std::string dump() const;  // pretty-printed, trailing newline

  bool has_ranking() const;
  bool has_benchmark() const;
  bool has_grid() const;

  std::vector<std::string> selected_features() const;
  std::string ranking_csv() const;
  // Columns: Model, Feature Selection, ACC, PRC, RCL, F1S, FPR, Training Time.
  std::string benchmark_table() const;

  // report.json plus ranking.csv, features.txt and benchmark.txt when present.
  void write(const std::filesystem::path& dir) const;

 private:
  nlohmann::json doc_;
};

// Loads and scores the dataset, ranks features and picks the top k.
RunReport cmd_select(const RunConfig& cfg);
// cmd_select, then an optional grid search per family on the training side
// of the holdout split, then the full-vs-selected benchmark.
RunReport cmd_benchmark(const RunConfig& cfg);
// Writes a synthetic dataset in canonical form to `path`.
void cmd_synth(const RunConfig& cfg, const std::filesystem::path& path);

// Same steps as cmd_select on an in-memory dataset.
RunReport select_report(const flowdata::Dataset& d, const RunConfig& cfg);
RunReport benchmark_report(const flowdata::Dataset& d, const RunConfig& cfg);

}  // namespace flowsieve::pipeline

#endif  // FLOWSIEVE_PIPELINE_HPP_
