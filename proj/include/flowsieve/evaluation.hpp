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

#ifndef FLOWSIEVE_EVALUATION_HPP_
#define FLOWSIEVE_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flowsieve/dataset.hpp"
#include "flowsieve/trees.hpp"

namespace flowsieve::evaluation {

using flowdata::Dataset;
using flowdata::Label;
using trees::ModelConfig;

// Positive class = malicious.
struct ConfusionMatrix {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Set in Metrics::undefined when the ratio was 0/0 and reported as 0.
enum MetricFlag : unsigned {
  kPrcUndefined = 1u << 0,
  kRclUndefined = 1u << 1,
  kF1Undefined = 1u << 2,
  kFprUndefined = 1u << 3,
  kMacroF1Undefined = 1u << 4,  // either per-class F1 was 0/0
};

// All values in percent.
struct Metrics {
  double acc = 0.0;
  double prc = 0.0;
  double rcl = 0.0;
  double f1s = 0.0;
  double fpr = 0.0;
  double macro_f1 = 0.0;
  // FPR with benign as the positive class: fn / (fn + tp).
  double fpr_benign_positive = 0.0;
  unsigned undefined = 0;

  bool operator==(const Metrics&) const = default;
};

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred);
Metrics metrics(const ConfusionMatrix& c);

struct CvResult {
  std::vector<flowdata::FoldSplit> folds;
  std::vector<ConfusionMatrix> fold_confusions;
  std::vector<Metrics> fold_metrics;
  double mean_macro_f1 = 0.0;
  // Out-of-fold prediction for every row.
  std::vector<Label> oof_predictions;
};

// Stratified k-fold; fold f's model uses cfg with a fold-derived seed.
CvResult cross_validate(const Dataset& d, const ModelConfig& cfg, std::size_t k, std::uint64_t seed);

// Cartesian grid over a family's tuned hyperparameters. Points are expanded
// estimators-major, then learning rate, then feature subsample.
struct GridSpec {
  ModelConfig base;
  std::vector<int> n_estimators;
  std::vector<double> learning_rate;
  std::vector<double> feature_subsample;

  // Forest: a single point (the defaults). Histogram: estimators {80, 90, 100} x
  // lr {0.2} x subsample {0.7, 0.8}. GOSS: estimators {100, 110, 120} x
  // lr {0.01, 0.05, 0.1, 0.2} x subsample {0.7}.
  static GridSpec defaults(trees::Family f);
  std::vector<ModelConfig> expand() const;
};

struct GridRow {
  ModelConfig config;
  std::vector<double> fold_macro_f1;
  double mean_macro_f1 = 0.0;
};

struct GridResult {
  ModelConfig best;
  std::vector<GridRow> table;  // expansion order
};

// Winner: highest mean macro-F1, then fewer estimators, then lower learning
// rate, then earlier in the expansion.
GridResult grid_search(const Dataset& d, const GridSpec& grid, std::size_t k, std::uint64_t seed);

struct BenchmarkRow {
  trees::Family family = trees::Family::kRandomForest;
  bool feature_selection = false;
  ModelConfig config;
  ConfusionMatrix confusion;
  Metrics metrics;
  double training_time_s = 0.0;  // median over timed repeats
  std::vector<double> time_samples_s;
  int repeats = 0;
};

struct BenchmarkOptions {
  int repeats = 5;
  int warmup = 1;  // discarded fits before the timed ones
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

// For each config: fit on all features, then on `selected` only, sharing one
// stratified holdout split. Timing covers fit() alone, runs serially, and
// reports the median of `repeats` monotonic-clock samples.
std::vector<BenchmarkRow> benchmark(const Dataset& d, std::span<const std::string> selected,
                                    std::span<const ModelConfig> configs, const BenchmarkOptions& opts);

double median(std::vector<double> values);

}  // namespace flowsieve::evaluation

#endif  // FLOWSIEVE_EVALUATION_HPP_
