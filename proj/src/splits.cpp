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
#include <cmath>

#include "flowsieve/dataset.hpp"
#include "flowsieve/error.hpp"
#include "flowsieve/random.hpp"

namespace flowsieve::flowdata {

namespace {

std::vector<std::size_t> rows_with_label(const Dataset& d, Label label) {
  std::vector<std::size_t> rows;
  const auto labels = d.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) rows.push_back(i);
  }
  return rows;
}

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

}  // namespace

std::vector<FoldSplit> stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw_usage("k-fold needs k >= 2");
  std::vector<std::vector<std::size_t>> test(k);
  Rng rng(seed);
  std::size_t next_fold = 0;
  for (const Label label : {kBenign, kMalicious}) {
    std::vector<std::size_t> rows = rows_with_label(d, label);
    if (rows.size() < k) {
      throw_data("class " + std::to_string(label) + " has " + std::to_string(rows.size()) +
                 " rows, fewer than k = " + std::to_string(k));
    }
    rng.shuffle(std::span(rows));
    for (const std::size_t r : rows) {
      test[next_fold].push_back(r);
      next_fold = (next_fold + 1) % k;
    }
  }

  std::vector<FoldSplit> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    folds[f].fold_index = f;
    std::sort(test[f].begin(), test[f].end());
    folds[f].test_rows = test[f];
    std::vector<bool> in_test(d.row_count(), false);
    for (const std::size_t r : test[f]) in_test[r] = true;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
      if (!in_test[r]) folds[f].train_rows.push_back(r);
    }
  }
  return folds;
}

HoldoutIndices holdout_indices(const Dataset& d, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw_usage("test fraction must lie in (0, 1)");
  HoldoutIndices out;
  Rng rng(seed);
  for (const Label label : {kBenign, kMalicious}) {
    std::vector<std::size_t> rows = rows_with_label(d, label);
    if (rows.size() < 2) {
      throw_data("holdout split needs at least 2 rows of class " + std::to_string(label));
    }
    const std::size_t n_test = round_half_up(static_cast<double>(rows.size()) * test_fraction);
    if (n_test == 0 || n_test == rows.size()) {
      throw_usage("test fraction " + std::to_string(test_fraction) + " leaves an empty side for class " +
                  std::to_string(label));
    }
    rng.shuffle(std::span(rows));
    out.test_rows.insert(out.test_rows.end(), rows.begin(), rows.begin() + n_test);
    out.train_rows.insert(out.train_rows.end(), rows.begin() + n_test, rows.end());
  }
  std::sort(out.train_rows.begin(), out.train_rows.end());
  std::sort(out.test_rows.begin(), out.test_rows.end());
  return out;
}

std::pair<Dataset, Dataset> holdout_split(const Dataset& d, double test_fraction, std::uint64_t seed) {
  const HoldoutIndices idx = holdout_indices(d, test_fraction, seed);
  return {d.select_rows(idx.train_rows), d.select_rows(idx.test_rows)};
}

}  // namespace flowsieve::flowdata
