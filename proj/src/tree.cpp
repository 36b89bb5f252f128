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

#include <cmath>
#include <numeric>

#include "flowsieve/error.hpp"
#include "flowsieve/json_io.hpp"
#include "flowsieve/trees.hpp"
#include "fit_common.hpp"

namespace flowsieve::trees {

namespace {

constexpr std::string_view kModelFormat = "flowsieve-model";
constexpr int kModelVersion = 1;

}  // namespace

namespace detail {

void check_training_input(const FeatureMatrix& x, std::span<const Label> y) {
  if (x.rows == 0 || y.empty()) throw_data("cannot fit on empty data");
  if (y.size() != x.rows) throw_usage("label count does not match row count");
  if (x.cols() == 0) throw_data("cannot fit without features");
  if (x.rows > UINT32_MAX) throw_usage("too many rows");
  bool has0 = false, has1 = false;
  for (const Label v : y) (v == flowdata::kMalicious ? has1 : has0) = true;
  if (!has0 || !has1) throw_data("training labels contain a single class");
}

}  // namespace detail

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kRandomForest: return "random_forest";
    case Family::kGbmHistogram: return "gbm_histogram";
    case Family::kGbmGoss: return "gbm_goss";
  }
  return "random_forest";
}

std::string_view family_display_name(Family f) {
  switch (f) {
    case Family::kRandomForest: return "RF";
    case Family::kGbmHistogram: return "XGB";
    case Family::kGbmGoss: return "LGBM";
  }
  return "RF";
}

Family parse_family(std::string_view name) {
  for (const Family f : {Family::kRandomForest, Family::kGbmHistogram, Family::kGbmGoss}) {
    if (name == family_name(f) || name == family_display_name(f)) return f;
  }
  if (name == "rf") return Family::kRandomForest;
  if (name == "xgb") return Family::kGbmHistogram;
  if (name == "lgbm") return Family::kGbmGoss;
  throw_usage("unknown model family '" + std::string(name) + "'");
}

ModelConfig ModelConfig::random_forest() {
  ModelConfig c;
  c.family = Family::kRandomForest;
  c.n_estimators = 100;
  c.max_depth = 16;
  c.min_samples_leaf = 2;
  c.max_features = 0;
  c.bootstrap = true;
  return c;
}

ModelConfig ModelConfig::gbm_histogram() {
  ModelConfig c;
  c.family = Family::kGbmHistogram;
  c.n_estimators = 100;
  c.learning_rate = 0.2;
  c.max_depth = 8;
  c.max_leaves = 0;
  c.min_samples_leaf = 1;
  c.feature_subsample = 0.8;
  c.min_loss_reduction = 0.01;
  return c;
}

ModelConfig ModelConfig::gbm_goss() {
  ModelConfig c;
  c.family = Family::kGbmGoss;
  c.n_estimators = 100;
  c.learning_rate = 0.1;
  c.max_depth = 0;
  c.max_leaves = 32;
  c.min_samples_leaf = 16;
  c.feature_subsample = 0.7;
  c.min_loss_reduction = 0.01;
  return c;
}

ModelConfig ModelConfig::defaults(Family f) {
  switch (f) {
    case Family::kRandomForest: return random_forest();
    case Family::kGbmHistogram: return gbm_histogram();
    case Family::kGbmGoss: return gbm_goss();
  }
  return random_forest();
}

void ModelConfig::validate() const {
  if (n_estimators < 1) throw_usage("n_estimators must be >= 1");
  if (max_depth < 0) throw_usage("max_depth must be >= 0");
  if (max_leaves < 0 || max_leaves == 1) throw_usage("max_leaves must be 0 or >= 2");
  if (min_samples_leaf < 1) throw_usage("min_samples_leaf must be >= 1");
  if (max_features < 0) throw_usage("max_features must be >= 0");
  if (family != Family::kRandomForest) {
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw_usage("learning_rate must lie in (0, 1]");
    if (!(feature_subsample > 0.0 && feature_subsample <= 1.0)) {
      throw_usage("feature_subsample must lie in (0, 1]");
    }
    if (!(min_loss_reduction >= 0.0)) throw_usage("min_loss_reduction must be >= 0");
    if (!(lambda >= 0.0)) throw_usage("lambda must be >= 0");
    if (histogram_bins < 2 || histogram_bins > 256) throw_usage("histogram_bins must lie in [2, 256]");
  }
  if (family == Family::kGbmGoss) {
    if (!(goss_top_fraction > 0.0 && goss_top_fraction < 1.0) ||
        !(goss_other_fraction > 0.0 && goss_other_fraction < 1.0) ||
        goss_top_fraction + goss_other_fraction > 1.0) {
      throw_usage("GOSS fractions must lie in (0, 1) with a + b <= 1");
    }
  }
}

double gini(std::span<const double> counts) {
  double total = 0.0;
  for (const double c : counts) {
    if (!(c >= 0.0)) throw_usage("gini counts must be nonnegative");
    total += c;
  }
  if (total <= 0.0) throw_usage("gini needs a positive total");
  double sum_sq = 0.0;
  for (const double c : counts) sum_sq += (c / total) * (c / total);
  return 1.0 - sum_sq;
}

double sigmoid(double raw) {
  if (raw >= 0.0) return 1.0 / (1.0 + std::exp(-raw));
  const double e = std::exp(raw);
  return e / (1.0 + e);
}

double logistic_loss(double raw, Label y) {
  // log(1 + exp(-raw)) for y = 1, log(1 + exp(raw)) for y = 0, overflow-safe.
  const double z = y == flowdata::kMalicious ? -raw : raw;
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

GradHess logistic_grad_hess(double raw, Label y) {
  const double p = sigmoid(raw);
  return {p - static_cast<double>(y), p * (1.0 - p)};
}

double Tree::evaluate(const FeatureMatrix& x, std::size_t row) const {
  int i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = x.at(row, static_cast<std::size_t>(n.split_feature)) <= n.threshold ? n.left : n.right;
  }
  return nodes[i].leaf_value;
}

std::size_t Tree::leaf_count() const {
  std::size_t leaves = 0;
  for (const auto& n : nodes) leaves += n.is_leaf() ? 1 : 0;
  return leaves;
}

FittedModel fit(const FeatureMatrix& x, std::span<const Label> y, const ModelConfig& cfg) {
  return cfg.family == Family::kRandomForest ? fit_random_forest(x, y, cfg) : fit_gbm(x, y, cfg);
}

Prediction predict(const FittedModel& m, const FeatureMatrix& x) {
  if (x.cols() != m.n_features) {
    throw_usage("model expects " + std::to_string(m.n_features) + " features, got " +
                std::to_string(x.cols()));
  }
  Prediction out;
  out.labels.resize(x.rows);
  out.probability.resize(x.rows);
  if (m.config.family == Family::kRandomForest) {
    const double n_trees = static_cast<double>(m.trees.size());
    for (std::size_t r = 0; r < x.rows; ++r) {
      std::size_t votes = 0;
      for (const auto& t : m.trees) votes += t.evaluate(x, r) > 0.5 ? 1 : 0;
      out.probability[r] = static_cast<double>(votes) / n_trees;
      out.labels[r] = 2 * votes >= m.trees.size() ? flowdata::kMalicious : flowdata::kBenign;
    }
  } else {
    for (std::size_t r = 0; r < x.rows; ++r) {
      double raw = m.base_score;
      for (const auto& t : m.trees) raw += t.evaluate(x, r);
      out.probability[r] = sigmoid(raw);
      out.labels[r] = out.probability[r] >= 0.5 ? flowdata::kMalicious : flowdata::kBenign;
    }
  }
  return out;
}

std::vector<double> feature_importance(const FittedModel& m) { return m.feature_importances; }

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{
      {"family", family_name(c.family)},
      {"criterion", c.criterion()},
      {"n_estimators", c.n_estimators},
      {"learning_rate", c.learning_rate},
      {"max_depth", c.max_depth},
      {"max_leaves", c.max_leaves},
      {"min_samples_leaf", c.min_samples_leaf},
      {"max_features", c.max_features},
      {"bootstrap", c.bootstrap},
      {"feature_subsample", c.feature_subsample},
      {"min_loss_reduction", c.min_loss_reduction},
      {"lambda", c.lambda},
      {"histogram_bins", c.histogram_bins},
      {"goss_top_fraction", c.goss_top_fraction},
      {"goss_other_fraction", c.goss_other_fraction},
      {"seed", c.seed},
  };
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  c.family = parse_family(j.at("family").get<std::string>());
  j.at("n_estimators").get_to(c.n_estimators);
  j.at("learning_rate").get_to(c.learning_rate);
  j.at("max_depth").get_to(c.max_depth);
  j.at("max_leaves").get_to(c.max_leaves);
  j.at("min_samples_leaf").get_to(c.min_samples_leaf);
  j.at("max_features").get_to(c.max_features);
  j.at("bootstrap").get_to(c.bootstrap);
  j.at("feature_subsample").get_to(c.feature_subsample);
  j.at("min_loss_reduction").get_to(c.min_loss_reduction);
  j.at("lambda").get_to(c.lambda);
  j.at("histogram_bins").get_to(c.histogram_bins);
  j.at("goss_top_fraction").get_to(c.goss_top_fraction);
  j.at("goss_other_fraction").get_to(c.goss_other_fraction);
  j.at("seed").get_to(c.seed);
}

std::string serialize(const FittedModel& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : m.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"value", n.leaf_value}, {"n", n.n_samples}});
      } else {
        nodes.push_back({{"feature", n.split_feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"value", n.leaf_value},
                         {"n", n.n_samples}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  const nlohmann::json doc{
      {"format", kModelFormat},
      {"version", kModelVersion},
      {"config", m.config},
      {"n_features", m.n_features},
      {"base_score", m.base_score},
      {"feature_importances", m.feature_importances},
      {"trees", std::move(trees)},
  };
  return doc.dump();
}

FittedModel deserialize(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("model document is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format") != kModelFormat) throw_data("not a flowsieve model document");
    if (doc.at("version") != kModelVersion) {
      throw_data("unsupported model version " + doc.at("version").dump());
    }
    FittedModel m;
    m.config = doc.at("config").get<ModelConfig>();
    m.n_features = doc.at("n_features").get<std::size_t>();
    m.base_score = doc.at("base_score").get<double>();
    m.feature_importances = doc.at("feature_importances").get<std::vector<double>>();
    for (const auto& jt : doc.at("trees")) {
      Tree t;
      for (const auto& jn : jt) {
        TreeNode n;
        n.n_samples = jn.at("n").get<double>();
        n.leaf_value = jn.at("value").get<double>();
        if (jn.contains("feature")) {
          n.split_feature = jn.at("feature").get<int>();
          n.threshold = jn.at("threshold").get<double>();
          n.left = jn.at("left").get<int>();
          n.right = jn.at("right").get<int>();
        }
        t.nodes.push_back(n);
      }
      const int size = static_cast<int>(t.nodes.size());
      if (size == 0) throw_data("model tree has no nodes");
      for (int i = 0; i < size; ++i) {
        const TreeNode& n = t.nodes[i];
        if (n.is_leaf()) continue;
        if (n.left <= i || n.left >= size || n.right <= i || n.right >= size ||
            n.split_feature >= static_cast<int>(m.n_features)) {
          throw_data("model tree references an invalid node or feature");
        }
      }
      m.trees.push_back(std::move(t));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace flowsieve::trees
