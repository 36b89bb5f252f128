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

// Second-order gradient boosting on the logistic loss. Both variants search
// thresholds over per-feature quantile bin edges computed once per fit:
//  - gbm_histogram grows level-wise to max_depth on every row;
//  - gbm_goss grows leaf-wise to max_leaves on a gradient-based one-side
//    sample (top a by |g|, plus b of the rest re-weighted by (1 - a) / b).

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "fit_common.hpp"
#include "flowsieve/error.hpp"
#include "flowsieve/random.hpp"
#include "flowsieve/trees.hpp"

namespace flowsieve::trees {

namespace {

struct BinnedColumns {
  // Bin b holds values in (edges[b-1], edges[b]]; the last bin is open.
  std::vector<std::vector<double>> edges;
  std::vector<std::vector<std::uint8_t>> codes;  // [feature][row]
};

BinnedColumns bin_columns(const FeatureMatrix& x, int max_bins) {
  BinnedColumns b;
  b.edges.resize(x.cols());
  b.codes.resize(x.cols());
  std::vector<double> sorted(x.rows);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::copy(x.columns[f].begin(), x.columns[f].end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct;
    std::unique_copy(sorted.begin(), sorted.end(), std::back_inserter(distinct));

    auto& edges = b.edges[f];
    if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
      for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        double mid = 0.5 * (distinct[i] + distinct[i + 1]);
        if (!(mid < distinct[i + 1])) mid = distinct[i];
        edges.push_back(mid);
      }
    } else {
      for (int i = 1; i < max_bins; ++i) {
        const double v = sorted[static_cast<std::size_t>(i) * x.rows / static_cast<std::size_t>(max_bins)];
        if (v < distinct.back() && (edges.empty() || v > edges.back())) edges.push_back(v);
      }
    }

    auto& codes = b.codes[f];
    codes.resize(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
      codes[r] = static_cast<std::uint8_t>(std::lower_bound(edges.begin(), edges.end(), x.columns[f][r]) -
                                           edges.begin());
    }
  }
  return b;
}

struct NodeStats {
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
};

struct Candidate {
  int node = 0;
  std::size_t begin = 0, end = 0;
  int depth = 0;
  NodeStats stats;
  // Best split, valid when gain > 0.
  double gain = 0.0;
  std::size_t feature = 0;
  std::size_t bin = 0;
  NodeStats left;
};

Candidate make_candidate(int node, std::size_t begin, std::size_t end, int depth, NodeStats stats) {
  Candidate c;
  c.node = node;
  c.begin = begin;
  c.end = end;
  c.depth = depth;
  c.stats = stats;
  return c;
}

class BoostedTreeBuilder {
 public:
  BoostedTreeBuilder(const BinnedColumns& bins, const ModelConfig& cfg, std::span<const double> grad,
                     std::span<const double> hess, std::vector<std::uint32_t> rows,
                     std::vector<std::size_t> features, std::vector<double>& importance,
                     std::uint64_t& evaluations)
      : bins_(bins),
        cfg_(cfg),
        grad_(grad),
        hess_(hess),
        rows_(std::move(rows)),
        features_(std::move(features)),
        importance_(importance),
        evaluations_(evaluations) {}

  Tree build(std::vector<std::size_t>& split_bin) {
    Tree tree;
    tree.nodes.assign(1, TreeNode{});
    split_bin.assign(1, 0);

    Candidate root = make_candidate(0, 0, rows_.size(), 0, {});
    for (const std::uint32_t r : rows_) {
      root.stats.g += grad_[r];
      root.stats.h += hess_[r];
    }
    root.stats.count = rows_.size();
    evaluate(root);

    const bool leaf_wise = cfg_.family == Family::kGbmGoss;
    std::deque<Candidate> open{root};
    std::size_t leaves = 1;
    while (!open.empty()) {
      auto pick = open.begin();
      if (leaf_wise) {
        // Highest gain; the earliest node wins ties.
        for (auto it = open.begin(); it != open.end(); ++it) {
          if (it->gain > pick->gain) pick = it;
        }
      }
      Candidate c = *pick;
      open.erase(pick);
      finish_leaf(tree, c);
      if (!(c.gain > 0.0)) continue;
      if (cfg_.max_leaves > 0 && leaves >= static_cast<std::size_t>(cfg_.max_leaves)) {
        if (leaf_wise) break;
        continue;
      }

      const auto& codes = bins_.codes[c.feature];
      const auto mid_it = std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(c.begin),
                                         rows_.begin() + static_cast<std::ptrdiff_t>(c.end),
                                         [&](std::uint32_t r) { return codes[r] <= c.bin; });
      const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());

      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      split_bin.push_back(0);
      split_bin.push_back(0);
      TreeNode& node = tree.nodes[c.node];
      node.split_feature = static_cast<int>(c.feature);
      node.threshold = bins_.edges[c.feature][c.bin];
      node.left = left;
      node.right = left + 1;
      split_bin[c.node] = c.bin;
      importance_[c.feature] += c.gain;
      ++leaves;

      Candidate l = make_candidate(left, c.begin, mid, c.depth + 1, c.left);
      Candidate r = make_candidate(left + 1, mid, c.end, c.depth + 1,
                                 {c.stats.g - c.left.g, c.stats.h - c.left.h, c.stats.count - c.left.count});
      evaluate(l);
      evaluate(r);
      open.push_back(l);
      open.push_back(r);
    }
    // Leaves still queued when the leaf budget ran out.
    for (const auto& c : open) finish_leaf(tree, c);
    return tree;
  }

 private:
  double score(const NodeStats& s) const { return s.g * s.g / (s.h + cfg_.lambda); }

  void finish_leaf(Tree& tree, const Candidate& c) const {
    TreeNode& node = tree.nodes[c.node];
    node.n_samples = static_cast<double>(c.stats.count);
    node.leaf_value = -c.stats.g / (c.stats.h + cfg_.lambda) * cfg_.learning_rate;
  }

  void evaluate(Candidate& c) {
    c.gain = 0.0;
    if (cfg_.max_depth > 0 && c.depth >= cfg_.max_depth) return;
    const std::size_t min_leaf = static_cast<std::size_t>(cfg_.min_samples_leaf);
    if (c.stats.count < 2 * min_leaf) return;
    const double parent = score(c.stats);

    for (const std::size_t f : features_) {
      const std::size_t n_bins = bins_.edges[f].size() + 1;
      if (n_bins < 2) continue;
      hist_.assign(n_bins, NodeStats{});
      const auto& codes = bins_.codes[f];
      for (std::size_t i = c.begin; i < c.end; ++i) {
        const std::uint32_t r = rows_[i];
        NodeStats& s = hist_[codes[r]];
        s.g += grad_[r];
        s.h += hess_[r];
        ++s.count;
      }
      NodeStats left;
      for (std::size_t b = 0; b + 1 < n_bins; ++b) {
        left.g += hist_[b].g;
        left.h += hist_[b].h;
        left.count += hist_[b].count;
        if (left.count < min_leaf) continue;
        if (c.stats.count - left.count < min_leaf) break;
        ++evaluations_;
        const NodeStats right{c.stats.g - left.g, c.stats.h - left.h, c.stats.count - left.count};
        const double gain = 0.5 * (score(left) + score(right) - parent) - cfg_.min_loss_reduction;
        if (gain > c.gain) {
          c.gain = gain;
          c.feature = f;
          c.bin = b;
          c.left = left;
        }
      }
    }
  }

  const BinnedColumns& bins_;
  const ModelConfig& cfg_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  std::vector<std::uint32_t> rows_;
  std::vector<std::size_t> features_;
  std::vector<double>& importance_;
  std::uint64_t& evaluations_;
  std::vector<NodeStats> hist_;
};

double apply_tree(const Tree& tree, const std::vector<std::size_t>& split_bin, const BinnedColumns& bins,
                  std::size_t row) {
  int i = 0;
  while (!tree.nodes[i].is_leaf()) {
    const TreeNode& n = tree.nodes[i];
    i = bins.codes[n.split_feature][row] <= split_bin[i] ? n.left : n.right;
  }
  return tree.nodes[i].leaf_value;
}

double mean_loss(std::span<const double> raw, std::span<const Label> y) {
  double total = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) total += logistic_loss(raw[i], y[i]);
  return total / static_cast<double>(raw.size());
}

FittedModel fit_boosted(const FeatureMatrix& x, std::span<const Label> y, const ModelConfig& cfg,
                        std::vector<double>* loss_trace) {
  if (cfg.family == Family::kRandomForest) throw_usage("fit_gbm needs a gbm_histogram or gbm_goss config");
  cfg.validate();
  detail::check_training_input(x, y);

  const std::size_t n = x.rows;
  const std::size_t n_features = x.cols();
  const BinnedColumns bins = bin_columns(x, cfg.histogram_bins);

  const double pos = static_cast<double>(std::count(y.begin(), y.end(), flowdata::kMalicious));
  const double neg = static_cast<double>(n) - pos;

  FittedModel m;
  m.config = cfg;
  m.n_features = n_features;
  m.base_score = std::log(pos / neg);
  m.feature_importances.assign(n_features, 0.0);

  std::vector<double> raw(n, m.base_score);
  std::vector<double> grad(n), hess(n);
  if (loss_trace != nullptr) {
    loss_trace->clear();
    loss_trace->push_back(mean_loss(raw, y));
  }

  const std::size_t cols_per_tree = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(cfg.feature_subsample * static_cast<double>(n_features))), 1,
      n_features);
  std::vector<std::size_t> feature_pool(n_features);
  std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});
  std::vector<std::uint32_t> order(n);
  std::vector<double> weighted_grad(n), weighted_hess(n);

  for (int round = 0; round < cfg.n_estimators; ++round) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(round)));
    for (std::size_t i = 0; i < n; ++i) {
      const GradHess gh = logistic_grad_hess(raw[i], y[i]);
      grad[i] = gh.grad;
      hess[i] = gh.hess;
    }

    for (std::size_t i = 0; i < cols_per_tree; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n_features - i));
      std::swap(feature_pool[i], feature_pool[j]);
    }
    std::vector<std::size_t> features(feature_pool.begin(),
                                      feature_pool.begin() + static_cast<std::ptrdiff_t>(cols_per_tree));
    std::sort(features.begin(), features.end());

    std::vector<std::uint32_t> rows;
    std::span<const double> g = grad, h = hess;
    if (cfg.family == Family::kGbmGoss) {
      std::iota(order.begin(), order.end(), 0u);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::uint32_t a, std::uint32_t b) { return std::abs(grad[a]) > std::abs(grad[b]); });
      const auto top = static_cast<std::size_t>(cfg.goss_top_fraction * static_cast<double>(n));
      const auto other = std::min(n - top, static_cast<std::size_t>(cfg.goss_other_fraction * static_cast<double>(n)));
      const double amplify = (1.0 - cfg.goss_top_fraction) / cfg.goss_other_fraction;
      for (std::size_t i = 0; i < other; ++i) {
        const std::size_t j = top + i + static_cast<std::size_t>(rng.below(n - top - i));
        std::swap(order[top + i], order[j]);
      }
      rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top + other));
      std::sort(rows.begin(), rows.end());
      std::copy(grad.begin(), grad.end(), weighted_grad.begin());
      std::copy(hess.begin(), hess.end(), weighted_hess.begin());
      for (std::size_t i = top; i < top + other; ++i) {
        weighted_grad[order[i]] *= amplify;
        weighted_hess[order[i]] *= amplify;
      }
      g = weighted_grad;
      h = weighted_hess;
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), 0u);
    }

    std::vector<std::size_t> split_bin;
    BoostedTreeBuilder builder(bins, cfg, g, h, std::move(rows), std::move(features), m.feature_importances,
                               m.split_evaluations);
    Tree tree = builder.build(split_bin);
    for (std::size_t i = 0; i < n; ++i) raw[i] += apply_tree(tree, split_bin, bins, i);
    m.trees.push_back(std::move(tree));
    if (loss_trace != nullptr) loss_trace->push_back(mean_loss(raw, y));
  }

  const double total = std::accumulate(m.feature_importances.begin(), m.feature_importances.end(), 0.0);
  if (total > 0.0) {
    for (double& v : m.feature_importances) v /= total;
  }
  return m;
}

}  // namespace

FittedModel fit_gbm(const FeatureMatrix& x, std::span<const Label> y, const ModelConfig& cfg) {
  return fit_boosted(x, y, cfg, nullptr);
}

FittedModel fit_gbm_traced(const FeatureMatrix& x, std::span<const Label> y, const ModelConfig& cfg,
                           std::vector<double>& loss_trace) {
  return fit_boosted(x, y, cfg, &loss_trace);
}

}  // namespace flowsieve::trees
