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

#include "flowsieve/evaluation.hpp"

#include <algorithm>
#include <chrono>

#include "flowsieve/error.hpp"
#include "flowsieve/parallel.hpp"
#include "flowsieve/random.hpp"

namespace flowsieve::evaluation {

namespace {

// Ratio in percent; 0/0 yields 0 and raises `flag`.
double percent(double num, double den, unsigned flag, unsigned& undefined) {
  if (den == 0.0) {
    undefined |= flag;
    return 0.0;
  }
  return 100.0 * num / den;
}

double harmonic(double a, double b, unsigned flag, unsigned& undefined) {
  if (a + b == 0.0) {
    undefined |= flag;
    return 0.0;
  }
  return 2.0 * a * b / (a + b);
}

}  // namespace

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw_usage("confusion: " + std::to_string(y_true.size()) + " labels vs " + std::to_string(y_pred.size()) +
                " predictions");
  }
  ConfusionMatrix c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] > flowdata::kMalicious || y_pred[i] > flowdata::kMalicious) {
      throw_usage("confusion: labels must be 0 or 1");
    }
    const bool actual = y_true[i] == flowdata::kMalicious;
    const bool predicted = y_pred[i] == flowdata::kMalicious;
    if (actual && predicted) ++c.tp;
    else if (!actual && predicted) ++c.fp;
    else if (!actual && !predicted) ++c.tn;
    else ++c.fn;
  }
  return c;
}

Metrics metrics(const ConfusionMatrix& c) {
  if (c.total() == 0) throw_usage("metrics of an empty confusion matrix");
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
  Metrics m;
  m.acc = 100.0 * (tp + tn) / static_cast<double>(c.total());
  m.prc = percent(tp, tp + fp, kPrcUndefined, m.undefined);
  m.rcl = percent(tp, tp + fn, kRclUndefined, m.undefined);
  m.f1s = harmonic(m.prc, m.rcl, kF1Undefined, m.undefined);
  m.fpr = percent(fp, fp + tn, kFprUndefined, m.undefined);
  m.fpr_benign_positive = percent(fn, fn + tp, 0, m.undefined);

  // Benign as the positive class swaps tp<->tn and fp<->fn.
  unsigned benign_flags = 0;
  const double prc0 = percent(tn, tn + fn, kMacroF1Undefined, benign_flags);
  const double rcl0 = percent(tn, tn + fp, kMacroF1Undefined, benign_flags);
  const double f1_benign = harmonic(prc0, rcl0, kMacroF1Undefined, benign_flags);
  m.macro_f1 = 0.5 * (m.f1s + f1_benign);
  if (benign_flags != 0 || (m.undefined & kF1Undefined) != 0) m.undefined |= kMacroF1Undefined;
  return m;
}

CvResult cross_validate(const Dataset& d, const ModelConfig& cfg, std::size_t k, std::uint64_t seed) {
  cfg.validate();
  CvResult out;
  out.folds = flowdata::stratified_kfold(d, k, seed);
  out.fold_confusions.resize(k);
  out.fold_metrics.resize(k);
  out.oof_predictions.assign(d.row_count(), flowdata::kBenign);

  parallel_for(k, [&](std::size_t f) {
    const auto& fold = out.folds[f];
    const Dataset train = d.select_rows(fold.train_rows);
    const Dataset test = d.select_rows(fold.test_rows);
    ModelConfig fold_cfg = cfg;
    fold_cfg.seed = mix_seed(seed, 1000 + f);
    const trees::FittedModel model = trees::fit(train.matrix(), train.labels(), fold_cfg);
    const trees::Prediction pred = trees::predict(model, test.matrix());
    for (std::size_t i = 0; i < fold.test_rows.size(); ++i) out.oof_predictions[fold.test_rows[i]] = pred.labels[i];
    out.fold_confusions[f] = confusion(test.labels(), pred.labels);
    out.fold_metrics[f] = metrics(out.fold_confusions[f]);
  });

  double total = 0.0;
  for (const auto& m : out.fold_metrics) total += m.macro_f1;
  out.mean_macro_f1 = total / static_cast<double>(k);
  return out;
}

GridSpec GridSpec::defaults(trees::Family f) {
  GridSpec g;
  g.base = ModelConfig::defaults(f);
  switch (f) {
    case trees::Family::kRandomForest:
      g.n_estimators = {100};
      g.learning_rate = {g.base.learning_rate};
      g.feature_subsample = {g.base.feature_subsample};
      break;
    case trees::Family::kGbmHistogram:
      g.n_estimators = {80, 90, 100};
      g.learning_rate = {0.2};
      g.feature_subsample = {0.7, 0.8};
      break;
    case trees::Family::kGbmGoss:
      g.n_estimators = {100, 110, 120};
      g.learning_rate = {0.01, 0.05, 0.1, 0.2};
      g.feature_subsample = {0.7};
      break;
  }
  return g;
}

std::vector<ModelConfig> GridSpec::expand() const {
  std::vector<ModelConfig> out;
  for (const int n : n_estimators) {
    for (const double lr : learning_rate) {
      for (const double sub : feature_subsample) {
        ModelConfig c = base;
        c.n_estimators = n;
        c.learning_rate = lr;
        c.feature_subsample = sub;
        out.push_back(c);
      }
    }
  }
  return out;
}

GridResult grid_search(const Dataset& d, const GridSpec& grid, std::size_t k, std::uint64_t seed) {
  const std::vector<ModelConfig> points = grid.expand();
  if (points.empty()) throw_usage("grid search over an empty grid");
  for (const auto& p : points) p.validate();

  GridResult out;
  out.table.resize(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const CvResult cv = cross_validate(d, points[i], k, seed);
    GridRow& row = out.table[i];
    row.config = points[i];
    row.mean_macro_f1 = cv.mean_macro_f1;
    for (const auto& m : cv.fold_metrics) row.fold_macro_f1.push_back(m.macro_f1);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.table.size(); ++i) {
    const GridRow& a = out.table[i];
    const GridRow& b = out.table[best];
    if (a.mean_macro_f1 != b.mean_macro_f1) {
      if (a.mean_macro_f1 > b.mean_macro_f1) best = i;
    } else if (a.config.n_estimators != b.config.n_estimators) {
      if (a.config.n_estimators < b.config.n_estimators) best = i;
    } else if (a.config.learning_rate < b.config.learning_rate) {
      best = i;
    }
  }
  out.best = out.table[best].config;
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw_usage("median of no values");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<BenchmarkRow> benchmark(const Dataset& d, std::span<const std::string> selected,
                                    std::span<const ModelConfig> configs, const BenchmarkOptions& opts) {
  if (opts.repeats < 1) throw_usage("benchmark needs at least one timed repeat");
  if (opts.warmup < 0) throw_usage("warm-up count must be nonnegative");
  if (selected.empty()) throw_usage("benchmark needs a nonempty selected feature set");
  for (const auto& name : selected) d.feature_index(name);

  const flowdata::HoldoutIndices split = flowdata::holdout_indices(d, opts.test_fraction, opts.seed);
  const Dataset train_full = d.select_rows(split.train_rows);
  const Dataset test_full = d.select_rows(split.test_rows);
  const Dataset train_sel = train_full.select_features(selected);
  const Dataset test_sel = test_full.select_features(selected);

  SerialScope serial;
  std::vector<BenchmarkRow> rows;
  for (const ModelConfig& cfg : configs) {
    cfg.validate();
    for (const bool use_selection : {false, true}) {
      const Dataset& train = use_selection ? train_sel : train_full;
      const Dataset& test = use_selection ? test_sel : test_full;
      const flowdata::FeatureMatrix x = train.matrix();

      BenchmarkRow row;
      row.family = cfg.family;
      row.feature_selection = use_selection;
      row.config = cfg;
      row.repeats = opts.repeats;

      trees::FittedModel model;
      for (int w = 0; w < opts.warmup; ++w) model = trees::fit(x, train.labels(), cfg);
      for (int r = 0; r < opts.repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        model = trees::fit(x, train.labels(), cfg);
        const auto stop = std::chrono::steady_clock::now();
        const double seconds = std::chrono::duration<double>(stop - start).count();
        row.time_samples_s.push_back(std::max(seconds, 1e-9));
      }
      row.training_time_s = median(row.time_samples_s);

      const trees::Prediction pred = trees::predict(model, test.matrix());
      row.confusion = confusion(test.labels(), pred.labels);
      row.metrics = metrics(row.confusion);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace flowsieve::evaluation
