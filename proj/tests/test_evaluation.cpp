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

#include <gtest/gtest.h>

#include <random>

#include "flowsieve/evaluation.hpp"
#include "test_util.hpp"

namespace fd = flowsieve::flowdata;
namespace ev = flowsieve::evaluation;
namespace tr = flowsieve::trees;
using flowsieve::ErrorKind;

namespace {

fd::Dataset planted(std::size_t rows, std::uint64_t seed, std::size_t informative = 4, std::size_t noise = 4) {
  fd::SyntheticSpec spec;
  spec.n_rows = rows;
  spec.n_informative = informative;
  spec.n_noise = noise;
  spec.seed = seed;
  return fd::generate_synthetic(spec);
}

ev::ConfusionMatrix cm(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn) {
  ev::ConfusionMatrix c;
  c.tp = tp;
  c.fp = fp;
  c.tn = tn;
  c.fn = fn;
  return c;
}

tr::ModelConfig small_forest() {
  auto c = tr::ModelConfig::random_forest();
  c.n_estimators = 10;
  return c;
}

}  // namespace

TEST(Confusion, CountsEachCell) {
  EXPECT_EQ(ev::confusion(std::vector<fd::Label>{1, 0, 1}, std::vector<fd::Label>{1, 0, 1}), cm(2, 0, 1, 0));
  EXPECT_EQ(ev::confusion(std::vector<fd::Label>{0, 0}, std::vector<fd::Label>{1, 1}), cm(0, 2, 0, 0));
  const std::vector<fd::Label> y_true = {1, 1, 1, 0, 0, 0, 0, 0, 1, 1};
  const std::vector<fd::Label> y_pred = {1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(ev::confusion(y_true, y_pred), cm(3, 1, 4, 2));
  EXPECT_ERROR_KIND(ev::confusion(std::vector<fd::Label>{1}, std::vector<fd::Label>{1, 0}), ErrorKind::kUsage);
  EXPECT_ERROR_KIND(ev::confusion(std::vector<fd::Label>{2}, std::vector<fd::Label>{1}), ErrorKind::kUsage);
}

TEST(Metrics, WorkedExample) {
  const auto m = ev::metrics(cm(3, 1, 4, 2));
  EXPECT_DOUBLE_EQ(m.prc, 75.0);
  EXPECT_DOUBLE_EQ(m.rcl, 60.0);
  EXPECT_NEAR(m.f1s, 66.667, 1e-3);
  EXPECT_DOUBLE_EQ(m.fpr, 20.0);
  EXPECT_DOUBLE_EQ(m.acc, 70.0);
  // Benign-positive F1: prc 4/6, rcl 4/5.
  const double benign_f1 = 2.0 * (4.0 / 6.0) * 0.8 / (4.0 / 6.0 + 0.8) * 100.0;
  EXPECT_NEAR(m.macro_f1, 0.5 * (m.f1s + benign_f1), 1e-12);
  EXPECT_NEAR(m.fpr_benign_positive, 100.0 * 2.0 / 5.0, 1e-12);
  EXPECT_EQ(m.undefined, 0u);
}

TEST(Metrics, PerfectAndDegenerate) {
  const auto perfect = ev::metrics(cm(5, 0, 7, 0));
  EXPECT_EQ(perfect.acc, 100.0);
  EXPECT_EQ(perfect.prc, 100.0);
  EXPECT_EQ(perfect.rcl, 100.0);
  EXPECT_EQ(perfect.f1s, 100.0);
  EXPECT_EQ(perfect.fpr, 0.0);
  EXPECT_EQ(perfect.macro_f1, 100.0);

  const auto none = ev::metrics(cm(0, 0, 4, 3));
  EXPECT_EQ(none.prc, 0.0);
  EXPECT_TRUE(none.undefined & ev::kPrcUndefined);
  EXPECT_TRUE(none.undefined & ev::kF1Undefined);
  EXPECT_FALSE(none.undefined & ev::kRclUndefined);

  const auto no_benign = ev::metrics(cm(4, 0, 0, 0));
  EXPECT_EQ(no_benign.fpr, 0.0);
  EXPECT_TRUE(no_benign.undefined & ev::kFprUndefined);
  EXPECT_TRUE(no_benign.undefined & ev::kMacroF1Undefined);

  EXPECT_ERROR_KIND(ev::metrics(ev::ConfusionMatrix{}), ErrorKind::kUsage);
}

TEST(Metrics, IdentitiesOnRandomMatrices) {
  std::mt19937_64 gen(12);
  for (int i = 0; i < 2000; ++i) {
    const auto c = cm(gen() % 50, gen() % 50, gen() % 50, gen() % 50);
    if (c.total() == 0) continue;
    const auto m = ev::metrics(c);
    EXPECT_NEAR(m.acc, 100.0 * static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total()), 1e-12);
    if (m.prc + m.rcl > 0) {
      EXPECT_NEAR(m.f1s, 2 * m.prc * m.rcl / (m.prc + m.rcl), 1e-12);
    }
    for (const double v : {m.acc, m.prc, m.rcl, m.f1s, m.fpr, m.macro_f1, m.fpr_benign_positive}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 100.0);
    }
    auto shifted = c;
    shifted.tp += gen() % 20;
    shifted.fn += gen() % 20;
    EXPECT_EQ(ev::metrics(shifted).fpr, m.fpr);
  }
}

TEST(CrossValidate, ShapeDeterminismAndPooling) {
  const auto d = planted(300, 1);
  const auto a = ev::cross_validate(d, small_forest(), 5, 4);
  ASSERT_EQ(a.fold_metrics.size(), 5u);
  EXPECT_DOUBLE_EQ(a.mean_macro_f1, 100.0);
  const auto b = ev::cross_validate(d, small_forest(), 5, 4);
  EXPECT_EQ(a.fold_confusions, b.fold_confusions);
  EXPECT_EQ(a.oof_predictions, b.oof_predictions);

  const auto noisy = planted(300, 2, 1, 3);
  auto shaky = small_forest();
  const auto cv = ev::cross_validate(noisy, shaky, 4, 9);
  ev::ConfusionMatrix pooled;
  for (const auto& c : cv.fold_confusions) pooled += c;
  EXPECT_EQ(pooled, ev::confusion(noisy.labels(), cv.oof_predictions));
  EXPECT_EQ(pooled.total(), noisy.row_count());
}

TEST(GridSearch, ExpansionAndTieBreaks) {
  const auto d = planted(200, 3);
  ev::GridSpec one;
  one.base = small_forest();
  one.n_estimators = {7};
  one.learning_rate = {0.2};
  one.feature_subsample = {1.0};
  const auto forced = ev::grid_search(d, one, 3, 1);
  EXPECT_EQ(forced.table.size(), 1u);
  EXPECT_EQ(forced.best.n_estimators, 7);

  // Every point scores 100 on separable data, so the tie-breaks decide.
  ev::GridSpec grid;
  grid.base = small_forest();
  grid.n_estimators = {100, 80, 90};
  grid.learning_rate = {0.2, 0.1};
  grid.feature_subsample = {1.0};
  const auto result = ev::grid_search(d, grid, 3, 1);
  ASSERT_EQ(result.table.size(), 6u);
  for (const auto& row : result.table) {
    EXPECT_EQ(row.mean_macro_f1, 100.0);
    EXPECT_EQ(row.fold_macro_f1.size(), 3u);
  }
  EXPECT_EQ(result.best.n_estimators, 80);
  EXPECT_DOUBLE_EQ(result.best.learning_rate, 0.1);

  ev::GridSpec empty = grid;
  empty.n_estimators.clear();
  EXPECT_ERROR_KIND(ev::grid_search(d, empty, 3, 1), ErrorKind::kUsage);
}

TEST(GridSearch, DefaultGridsCoverTheTunedRanges) {
  EXPECT_EQ(ev::GridSpec::defaults(tr::Family::kRandomForest).expand().size(), 1u);
  EXPECT_EQ(ev::GridSpec::defaults(tr::Family::kGbmHistogram).expand().size(), 6u);
  EXPECT_EQ(ev::GridSpec::defaults(tr::Family::kGbmGoss).expand().size(), 12u);
  const auto pts = ev::GridSpec::defaults(tr::Family::kGbmHistogram).expand();
  EXPECT_EQ(pts[0].n_estimators, 80);
  EXPECT_DOUBLE_EQ(pts[0].feature_subsample, 0.7);
  EXPECT_DOUBLE_EQ(pts[1].feature_subsample, 0.8);
}

TEST(Median, OddEvenAndSingle) {
  EXPECT_EQ(ev::median({3.0}), 3.0);
  EXPECT_EQ(ev::median({5.0, 1.0, 3.0}), 3.0);
  EXPECT_EQ(ev::median({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_ERROR_KIND(ev::median({}), ErrorKind::kUsage);
}

TEST(Benchmark, SixRowsOnSharedSplit) {
  const auto d = planted(600, 4);
  const std::vector<std::string> selected = {"informative_01", "informative_02"};
  std::vector<tr::ModelConfig> configs;
  for (const auto f : {tr::Family::kRandomForest, tr::Family::kGbmHistogram, tr::Family::kGbmGoss}) {
    auto c = tr::ModelConfig::defaults(f);
    c.n_estimators = 10;
    configs.push_back(c);
  }
  ev::BenchmarkOptions opts;
  opts.repeats = 1;
  opts.warmup = 0;
  opts.seed = 8;
  const auto rows = ev::benchmark(d, selected, configs, opts);
  ASSERT_EQ(rows.size(), 6u);
  const auto split = fd::holdout_indices(d, opts.test_fraction, opts.seed);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].family, configs[i / 2].family);
    EXPECT_EQ(rows[i].feature_selection, i % 2 == 1);
    EXPECT_EQ(rows[i].confusion.total(), split.test_rows.size());
    EXPECT_EQ(rows[i].repeats, 1);
    ASSERT_EQ(rows[i].time_samples_s.size(), 1u);
    EXPECT_EQ(rows[i].training_time_s, rows[i].time_samples_s[0]);
    EXPECT_GT(rows[i].training_time_s, 0.0);
  }
  // Both feature sets see the same test rows, so class totals agree.
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    EXPECT_EQ(rows[i].confusion.tp + rows[i].confusion.fn, rows[i + 1].confusion.tp + rows[i + 1].confusion.fn);
  }
  EXPECT_ERROR_KIND(ev::benchmark(d, std::vector<std::string>{"nope"}, configs, opts), ErrorKind::kUsage);
  opts.repeats = 0;
  EXPECT_ERROR_KIND(ev::benchmark(d, selected, configs, opts), ErrorKind::kUsage);
}
