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

// Random forest of CART trees: bootstrap rows, floor(sqrt(F)) candidate
// features per split, exact Gini splits at midpoints between consecutive
// distinct values.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "fit_common.hpp"
#include "flowsieve/error.hpp"
#include "flowsieve/parallel.hpp"
#include "flowsieve/random.hpp"
#include "flowsieve/trees.hpp"

namespace flowsieve::trees {

namespace {

// Dense ranks let the splitter sort 64-bit keys instead of doubles.
struct RankedColumns {
  std::vector<std::vector<std::uint32_t>> rank;  // [feature][row]
  std::vector<std::vector<double>> values;       // [feature][rank], ascending distinct
  std::vector<std::vector<std::uint32_t>> order; // [feature][i], rows by ascending value
};

RankedColumns rank_columns(const FeatureMatrix& x) {
  RankedColumns rc;
  rc.rank.resize(x.cols());
  rc.values.resize(x.cols());
  rc.order.resize(x.cols());
  std::vector<std::pair<double, std::uint32_t>> order(x.rows);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    for (std::size_t r = 0; r < x.rows; ++r) order[r] = {x.columns[f][r], static_cast<std::uint32_t>(r)};
    std::sort(order.begin(), order.end());
    auto& rank = rc.rank[f];
    auto& values = rc.values[f];
    rank.resize(x.rows);
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i == 0 || order[i].first != order[i - 1].first) values.push_back(order[i].first);
      rank[order[i].second] = static_cast<std::uint32_t>(values.size() - 1);
    }
    rc.order[f].resize(x.rows);
    for (std::size_t i = 0; i < order.size(); ++i) rc.order[f][i] = order[i].second;
  }
  return rc;
}

struct TreeResult {
  Tree tree;
  std::vector<double> importance;
  std::uint64_t evaluations = 0;
};

class TreeBuilder {
 public:
  TreeBuilder(const RankedColumns& rc, std::span<const Label> y, const ModelConfig& cfg, std::size_t mtry,
              std::uint64_t seed)
      : rc_(rc), y_(y), cfg_(cfg), mtry_(mtry), rng_(seed) {}

  TreeResult build() {
    const std::size_t n = y_.size();
    const std::size_t n_features = rc_.rank.size();
    weight_.assign(n, 0.0);
    if (cfg_.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) weight_[rng_.below(n)] += 1.0;
    } else {
      std::fill(weight_.begin(), weight_.end(), 1.0);
    }
    // Every feature keeps the in-bag rows in ascending value order; a node
    // owns the same [begin, end) slice of each list.
    goes_left_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) goes_left_[i] = weight_[i] > 0.0;
    sorted_.resize(n_features);
    for (std::size_t f = 0; f < n_features; ++f) {
      sorted_[f].resize(n);
      std::uint32_t* out = sorted_[f].data();
      std::size_t k = 0;
      for (const std::uint32_t row : rc_.order[f]) {
        out[k] = row;
        k += goes_left_[row];
      }
      sorted_[f].resize(k);
    }
    scratch_.resize(n);
    pos_weight_.resize(n);
    for (std::size_t i = 0; i < n; ++i) pos_weight_[i] = y_[i] == flowdata::kMalicious ? weight_[i] : 0.0;
    features_.resize(n_features);
    std::iota(features_.begin(), features_.end(), std::size_t{0});
    result_.importance.assign(n_features, 0.0);
    result_.tree.nodes.assign(1, TreeNode{});

    struct Pending {
      int node;
      std::size_t begin, end;
      int depth;
    };
    std::vector<Pending> stack{{0, 0, sorted_.empty() ? 0 : sorted_[0].size(), 0}};
    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();
      const auto split = grow(p.node, p.begin, p.end, p.depth);
      if (!split) continue;
      const auto [mid, left, right] = *split;
      stack.push_back({right, mid, p.end, p.depth + 1});
      stack.push_back({left, p.begin, mid, p.depth + 1});
    }
    return std::move(result_);
  }

 private:
  struct Split {
    std::size_t mid;
    int left, right;
  };

  std::optional<Split> grow(int node_id, std::size_t begin, std::size_t end, int depth) {
    double c0 = 0.0, c1 = 0.0;
    const auto& rows = sorted_[0];
    for (std::size_t i = begin; i < end; ++i) {
      (y_[rows[i]] == flowdata::kMalicious ? c1 : c0) += weight_[rows[i]];
    }
    const double n = c0 + c1;
    {
      TreeNode& node = result_.tree.nodes[node_id];
      node.n_samples = n;
      node.leaf_value = c1 >= c0 ? 1.0 : 0.0;
    }
    const double min_leaf = cfg_.min_samples_leaf;
    if (c0 == 0.0 || c1 == 0.0) return std::nullopt;
    if (cfg_.max_depth > 0 && depth >= cfg_.max_depth) return std::nullopt;
    if (n < 2.0 * min_leaf) return std::nullopt;

    // Candidate features, visited in ascending index order so equal scores
    // resolve to the lowest feature and then the lowest threshold.
    candidates_.clear();
    if (mtry_ >= features_.size()) {
      candidates_.assign(features_.begin(), features_.end());
    } else {
      for (std::size_t i = 0; i < mtry_; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng_.below(features_.size() - i));
        std::swap(features_[i], features_[j]);
      }
      candidates_.assign(features_.begin(), features_.begin() + static_cast<std::ptrdiff_t>(mtry_));
      std::sort(candidates_.begin(), candidates_.end());
    }

    const double parent_term = (c0 * c0 + c1 * c1) / n;
    // A candidate must beat the incumbent by more than tol, so splits equal up
    // to rounding keep the first one seen.
    const double tol = 1e-12 * n;
    double best = 0.0;
    std::size_t best_feature = 0;
    std::uint32_t best_rank = 0, best_next_rank = 0;
    double best_nl = 0.0, best_l1 = 0.0;
    bool found = false;

    for (const std::size_t f : candidates_) {
      const auto& rank = rc_.rank[f];
      const std::uint32_t* seg = sorted_[f].data() + begin;
      const std::size_t len = end - begin;
      if (rank[seg[0]] == rank[seg[len - 1]]) continue;

      double nl = 0.0, l1 = 0.0;
      std::uint32_t r_next = rank[seg[0]];
      for (std::size_t i = 0; i + 1 < len; ++i) {
        const std::uint32_t row = seg[i];
        nl += weight_[row];
        l1 += pos_weight_[row];
        const std::uint32_t r = r_next;
        r_next = rank[seg[i + 1]];
        if (r == r_next) continue;
        const double nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        ++result_.evaluations;
        const double l0 = nl - l1;
        const double r0 = c0 - l0, r1 = c1 - l1;
        const double decrease = (l0 * l0 + l1 * l1) / nl + (r0 * r0 + r1 * r1) / nr - parent_term;
        if (decrease > best + tol) {
          best = decrease;
          best_feature = f;
          best_rank = r;
          best_next_rank = r_next;
          best_nl = nl;
          best_l1 = l1;
          found = true;
        }
      }
    }
    if (!found) return std::nullopt;

    const auto& values = rc_.values[best_feature];
    double threshold = 0.5 * (values[best_rank] + values[best_next_rank]);
    if (!(threshold < values[best_next_rank])) threshold = values[best_rank];

    const auto& rank = rc_.rank[best_feature];
    std::size_t n_left = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint32_t row = sorted_[0][i];
      goes_left_[row] = rank[row] <= best_rank;
      n_left += goes_left_[row];
    }
    const std::size_t mid = begin + n_left;
    // Rows of a child that cannot split again only need to be grouped in the
    // first list, which grow() reads for the class counts.
    const auto terminal = [&](double m, double m1) {
      return m1 == 0.0 || m1 == m || (cfg_.max_depth > 0 && depth + 1 >= cfg_.max_depth) || m < 2.0 * min_leaf;
    };
    const bool both_terminal = terminal(best_nl, best_l1) && terminal(n - best_nl, c1 - best_l1);
    const std::size_t lists = both_terminal ? 1 : sorted_.size();
    std::uint32_t* spill = scratch_.data();
    for (std::size_t li = 0; li < lists; ++li) {
      auto& list = sorted_[li];
      std::uint32_t* seg = list.data();
      std::size_t w = begin, s = 0;
      for (std::size_t i = begin; i < end; ++i) {
        const std::uint32_t row = seg[i];
        const std::size_t left = goes_left_[row];
        seg[w] = row;
        spill[s] = row;
        w += left;
        s += 1 - left;
      }
      std::copy(spill, spill + s, seg + w);
    }

    result_.importance[best_feature] += best;
    const int left = static_cast<int>(result_.tree.nodes.size());
    result_.tree.nodes.emplace_back();
    result_.tree.nodes.emplace_back();
    TreeNode& node = result_.tree.nodes[node_id];
    node.split_feature = static_cast<int>(best_feature);
    node.threshold = threshold;
    node.left = left;
    node.right = left + 1;
    return Split{mid, left, left + 1};
  }

  const RankedColumns& rc_;
  std::span<const Label> y_;
  const ModelConfig& cfg_;
  std::size_t mtry_;
  Rng rng_;

  std::vector<double> weight_;
  std::vector<double> pos_weight_;  // weight of malicious rows, 0 otherwise
  std::vector<std::vector<std::uint32_t>> sorted_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::size_t> features_;
  std::vector<std::size_t> candidates_;
  TreeResult result_;
};

}  // namespace

FittedModel fit_random_forest(const FeatureMatrix& x, std::span<const Label> y, const ModelConfig& cfg) {
  if (cfg.family != Family::kRandomForest) throw_usage("fit_random_forest needs a random_forest config");
  cfg.validate();
  detail::check_training_input(x, y);

  const std::size_t n_features = x.cols();
  const std::size_t mtry =
      cfg.max_features == 0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features)))))
          : std::min<std::size_t>(static_cast<std::size_t>(cfg.max_features), n_features);

  const RankedColumns rc = rank_columns(x);
  std::vector<TreeResult> results(static_cast<std::size_t>(cfg.n_estimators));
  parallel_for(results.size(), [&](std::size_t t) {
    TreeBuilder builder(rc, y, cfg, mtry, mix_seed(cfg.seed, t));
    results[t] = builder.build();
  });

  FittedModel m;
  m.config = cfg;
  m.n_features = n_features;
  m.feature_importances.assign(n_features, 0.0);
  for (auto& r : results) {
    for (std::size_t f = 0; f < n_features; ++f) m.feature_importances[f] += r.importance[f];
    m.split_evaluations += r.evaluations;
    m.trees.push_back(std::move(r.tree));
  }
  const double total = std::accumulate(m.feature_importances.begin(), m.feature_importances.end(), 0.0);
  if (total > 0.0) {
    for (double& v : m.feature_importances) v /= total;
  }
  return m;
}

}  // namespace flowsieve::trees
