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

#ifndef FLOWSIEVE_TREES_HPP_
#define FLOWSIEVE_TREES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowsieve/dataset.hpp"

namespace flowsieve::trees {

using flowdata::FeatureMatrix;
using flowdata::Label;

enum class Family { kRandomForest, kGbmHistogram, kGbmGoss };

std::string_view family_name(Family f);  // random_forest, gbm_histogram, gbm_goss
std::string_view family_display_name(Family f);  // RF, XGB, LGBM
Family parse_family(std::string_view name);  // accepts either spelling

// Hyperparameters for all three learners; fields a family does not use are
// ignored. The factory functions carry the tuned defaults.
struct ModelConfig {
  Family family = Family::kRandomForest;
  int n_estimators = 100;
  double learning_rate = 0.2;
  int max_depth = 16;        // 0 = unbounded
  int max_leaves = 0;        // 0 = unbounded; leaf-wise growth only
  int min_samples_leaf = 2;  // rows (forest: bootstrap-weighted)
  int max_features = 0;     // forest candidates per split; 0 = floor(sqrt(F))
  bool bootstrap = true;     // forest only
  double feature_subsample = 1.0;  // boosted: fraction of columns drawn per tree
  double min_loss_reduction = 0.0;  // gamma
  double lambda = 1.0;              // leaf L2 regularization
  int histogram_bins = 256;
  double goss_top_fraction = 0.2;
  double goss_other_fraction = 0.1;
  std::uint64_t seed = 0;

  // Gini, 100 trees, sqrt(F) candidates per split, depth 16, leaf >= 2.
  static ModelConfig random_forest();
  // Cross-entropy, lr 0.2, 100 trees, column subsample 0.8, gamma 0.01, depth 8.
  static ModelConfig gbm_histogram();
  // Cross-entropy, lr 0.1, 100 trees, column subsample 0.7, gamma 0.01,
  // 32 leaves, leaf >= 16 rows, GOSS a = 0.2, b = 0.1.
  static ModelConfig gbm_goss();
  static ModelConfig defaults(Family f);

  std::string_view criterion() const { return family == Family::kRandomForest ? "gini" : "cross_entropy"; }
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

// Flat node. Internal nodes route x <= threshold to `left`.
struct TreeNode {
  int split_feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf_value = 0.0;  // forest: class vote; boosted: additive log-odds
  double n_samples = 0.0;   // forest: bootstrap-weighted; boosted: sampled rows

  bool is_leaf() const { return split_feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double evaluate(const FeatureMatrix& x, std::size_t row) const;
  std::size_t leaf_count() const;
  bool operator==(const Tree&) const = default;
};

struct FittedModel {
  ModelConfig config;
  std::size_t n_features = 0;
  std::vector<Tree> trees;
  double base_score = 0.0;                  // boosted prior log-odds
  std::vector<double> feature_importances;  // sums to 1, or all zero without splits
  // Threshold candidates scored during fitting. Not serialized.
  std::uint64_t split_evaluations = 0;

  bool operator==(const FittedModel& o) const {
    return config == o.config && n_features == o.n_features && trees == o.trees &&
           base_score == o.base_score && feature_importances == o.feature_importances;
  }
};

// Gini impurity 1 - sum p_c^2 of per-class counts.
double gini(std::span<const double> counts);

struct GradHess {
  double grad;
  double hess;
};

double sigmoid(double raw);
// Binary cross-entropy of a raw log-odds score.
double logistic_loss(double raw, Label y);
// First and second derivative of logistic_loss w.r.t. the raw score:
// (p - y, p (1 - p)).
GradHess logistic_grad_hess(double raw, Label y);

FittedModel fit_random_forest(const FeatureMatrix& x, std::span<const Label> y, const ModelConfig& cfg);
FittedModel fit_gbm(const FeatureMatrix& x, std::span<const Label> y, const ModelConfig& cfg);
FittedModel fit(const FeatureMatrix& x, std::span<const Label> y, const ModelConfig& cfg);

// Per-round training loss, recorded by fit_gbm when requested. Entry 0 is
// the prior; entry r follows round r.
FittedModel fit_gbm_traced(const FeatureMatrix& x, std::span<const Label> y, const ModelConfig& cfg,
                           std::vector<double>& loss_trace);

struct Prediction {
  std::vector<Label> labels;
  std::vector<double> probability;  // of the malicious class
};

// Forest: majority vote, ties to malicious; probability is the vote share.
// Boosted: sigmoid(base_score + sum of tree outputs), label = p >= 0.5.
Prediction predict(const FittedModel& m, const FeatureMatrix& x);

std::vector<double> feature_importance(const FittedModel& m);

// Versioned JSON document (config, trees, base score, importances).
std::string serialize(const FittedModel& m);
FittedModel deserialize(std::string_view json);

}  // namespace flowsieve::trees

#endif  // FLOWSIEVE_TREES_HPP_
