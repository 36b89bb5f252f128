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
#include <numeric>

#include "flowsieve/error.hpp"
#include "flowsieve/parallel.hpp"
#include "flowsieve/random.hpp"
#include "flowsieve/selectors.hpp"

namespace flowsieve::selectors {

namespace {

void require_both_classes(const Dataset& d) {
  if (!d.has_both_classes()) throw_data("feature scoring needs both classes in the labels");
}

bool is_constant(std::span<const double> column) {
  return std::adjacent_find(column.begin(), column.end(), std::not_equal_to<>()) == column.end();
}

// Renumbers codes densely in order of their first (smallest) value.
std::vector<std::uint32_t> compact(std::vector<std::uint32_t> codes) {
  if (codes.empty()) return codes;
  const std::uint32_t max_code = *std::max_element(codes.begin(), codes.end());
  std::vector<std::uint32_t> remap(static_cast<std::size_t>(max_code) + 1, 0);
  std::vector<bool> used(remap.size(), false);
  for (const auto c : codes) used[c] = true;
  std::uint32_t next = 0;
  for (std::size_t c = 0; c < remap.size(); ++c) {
    if (used[c]) remap[c] = next++;
  }
  for (auto& c : codes) c = remap[c];
  return codes;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kInfoGain: return "info_gain";
    case Method::kChiSquared: return "chi_squared";
    case Method::kRfe: return "rfe";
    case Method::kMad: return "mad";
    case Method::kDispersionRatio: return "dispersion_ratio";
  }
  return "info_gain";
}

Method parse_method(std::string_view name) {
  for (const Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw_usage("unknown selection method '" + std::string(name) + "'");
}

std::string_view disc_strategy_name(DiscStrategy s) {
  return s == DiscStrategy::kEqualFrequency ? "equal_frequency" : "equal_width";
}

DiscStrategy parse_disc_strategy(std::string_view name) {
  if (name == "equal_frequency") return DiscStrategy::kEqualFrequency;
  if (name == "equal_width") return DiscStrategy::kEqualWidth;
  throw_usage("unknown discretization strategy '" + std::string(name) + "'");
}

void DiscretizationConfig::validate() const {
  if (bins < 2) throw_usage("discretization needs at least 2 bins");
  if (distinct_threshold < 1) throw_usage("distinct-value threshold must be positive");
}

std::vector<std::uint32_t> discretize(std::span<const double> column, const DiscretizationConfig& cfg) {
  cfg.validate();
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct;
  std::unique_copy(sorted.begin(), sorted.end(), std::back_inserter(distinct));

  std::vector<std::uint32_t> codes(column.size());
  if (distinct.size() <= static_cast<std::size_t>(cfg.distinct_threshold)) {
    for (std::size_t i = 0; i < column.size(); ++i) {
      codes[i] = static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), column[i]) -
                                            distinct.begin());
    }
    return codes;
  }

  const auto bins = static_cast<std::size_t>(cfg.bins);
  if (cfg.strategy == DiscStrategy::kEqualFrequency) {
    std::vector<double> cuts;
    for (std::size_t i = 1; i < bins; ++i) {
      const double v = sorted[i * sorted.size() / bins];
      if (cuts.empty() || v > cuts.back()) cuts.push_back(v);
    }
    for (std::size_t i = 0; i < column.size(); ++i) {
      codes[i] = static_cast<std::uint32_t>(std::upper_bound(cuts.begin(), cuts.end(), column[i]) - cuts.begin());
    }
  } else {
    const double lo = distinct.front();
    const double width = (distinct.back() - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i < column.size(); ++i) {
      const auto b = static_cast<std::size_t>(std::floor((column[i] - lo) / width));
      codes[i] = static_cast<std::uint32_t>(std::min(b, bins - 1));
    }
  }
  return compact(std::move(codes));
}

ContingencyTable contingency(std::span<const std::uint32_t> codes, std::span<const Label> labels) {
  if (codes.size() != labels.size()) throw_usage("codes and labels differ in length");
  ContingencyTable table;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] >= table.size()) table.resize(static_cast<std::size_t>(codes[i]) + 1, {0.0, 0.0});
    table[codes[i]][labels[i] == flowdata::kMalicious ? 1 : 0] += 1.0;
  }
  return table;
}

double entropy_of_counts(std::span<const double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (const double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

double entropy(std::span<const Label> labels) {
  if (labels.empty()) throw_usage("entropy of an empty label vector");
  std::array<double, 2> counts{0.0, 0.0};
  for (const Label y : labels) counts[y == flowdata::kMalicious ? 1 : 0] += 1.0;
  return entropy_of_counts(counts);
}

double information_gain(const ContingencyTable& table) {
  std::array<double, 2> totals{0.0, 0.0};
  for (const auto& row : table) {
    totals[0] += row[0];
    totals[1] += row[1];
  }
  const double n = totals[0] + totals[1];
  if (n <= 0.0) throw_usage("information gain of an empty table");
  const double h_y = entropy_of_counts(totals);
  double conditional = 0.0;
  for (const auto& row : table) {
    const double n_v = row[0] + row[1];
    if (n_v > 0.0) conditional += (n_v / n) * entropy_of_counts(row);
  }
  return std::clamp(h_y - conditional, 0.0, h_y);
}

double chi_squared(const ContingencyTable& table) {
  std::array<double, 2> col_totals{0.0, 0.0};
  for (const auto& row : table) {
    col_totals[0] += row[0];
    col_totals[1] += row[1];
  }
  const double n = col_totals[0] + col_totals[1];
  if (n <= 0.0) throw_usage("chi-squared of an empty table");
  double stat = 0.0;
  for (const auto& row : table) {
    const double row_total = row[0] + row[1];
    for (std::size_t c = 0; c < 2; ++c) {
      const double expected = row_total * col_totals[c] / n;
      if (expected <= 0.0) continue;
      const double diff = row[c] - expected;
      stat += diff * diff / expected;
    }
  }
  return stat;
}

double information_gain(const Dataset& d, std::string_view feature, const DiscretizationConfig& cfg) {
  const std::size_t j = d.feature_index(feature);
  require_both_classes(d);
  return information_gain(contingency(discretize(d.column(j), cfg), d.labels()));
}

double chi_squared(const Dataset& d, std::string_view feature, const DiscretizationConfig& cfg) {
  const std::size_t j = d.feature_index(feature);
  require_both_classes(d);
  return chi_squared(contingency(discretize(d.column(j), cfg), d.labels()));
}

double mean_abs_deviation(std::span<const double> column) {
  if (column.empty()) throw_usage("mean absolute deviation of an empty column");
  if (is_constant(column)) return 0.0;
  const double n = static_cast<double>(column.size());
  const double mean = std::accumulate(column.begin(), column.end(), 0.0) / n;
  double total = 0.0;
  for (const double x : column) total += std::abs(x - mean);
  return total / n;
}

double mean_abs_deviation(const Dataset& d, std::string_view feature) {
  return mean_abs_deviation(d.column(d.feature_index(feature)));
}

double dispersion_ratio(std::span<const double> column, std::span<const Label> labels) {
  if (column.size() != labels.size()) throw_usage("column and labels differ in length");
  if (column.empty()) throw_usage("dispersion ratio of an empty column");
  if (is_constant(column)) return 0.0;
  const double n = static_cast<double>(column.size());
  double sum[2] = {0.0, 0.0};
  double count[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < column.size(); ++i) {
    const int c = labels[i] == flowdata::kMalicious ? 1 : 0;
    sum[c] += column[i];
    count[c] += 1.0;
  }
  const double mean = (sum[0] + sum[1]) / n;
  double between = 0.0;
  for (int c = 0; c < 2; ++c) {
    if (count[c] == 0.0) continue;
    const double mc = sum[c] / count[c];
    between += (count[c] / n) * (mc - mean) * (mc - mean);
  }
  double total = 0.0;
  for (const double x : column) total += (x - mean) * (x - mean);
  total /= n;
  if (total <= 0.0) return 0.0;
  return std::sqrt(std::clamp(between / total, 0.0, 1.0));
}

double dispersion_ratio(const Dataset& d, std::string_view feature) {
  const std::size_t j = d.feature_index(feature);
  require_both_classes(d);
  return dispersion_ratio(d.column(j), d.labels());
}

trees::ModelConfig default_rfe_model(int n_estimators) {
  trees::ModelConfig cfg = trees::ModelConfig::random_forest();
  cfg.n_estimators = n_estimators;
  return cfg;
}

MethodScores rfe_rank(const Dataset& d, const trees::ModelConfig& base_model, std::uint64_t seed) {
  const std::size_t n_features = d.feature_count();
  if (n_features < 2) throw_usage("recursive feature elimination needs at least 2 features");
  require_both_classes(d);

  const flowdata::FeatureMatrix full = d.matrix();
  const auto& names = d.feature_names();
  std::vector<std::size_t> survivors(n_features);
  std::iota(survivors.begin(), survivors.end(), std::size_t{0});
  std::vector<double> order(n_features, 0.0);

  for (std::size_t step = 1; step < n_features; ++step) {
    flowdata::FeatureMatrix sub;
    sub.rows = full.rows;
    for (const std::size_t f : survivors) sub.columns.push_back(full.columns[f]);

    trees::ModelConfig cfg = base_model;
    cfg.seed = mix_seed(seed, step);
    const trees::FittedModel model = trees::fit(sub, d.labels(), cfg);

    std::size_t weakest = 0;
    for (std::size_t i = 1; i < survivors.size(); ++i) {
      const double a = model.feature_importances[i];
      const double b = model.feature_importances[weakest];
      if (a < b || (a == b && names[survivors[i]] < names[survivors[weakest]])) weakest = i;
    }
    order[survivors[weakest]] = static_cast<double>(step);
    survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(weakest));
  }
  order[survivors.front()] = static_cast<double>(n_features);

  MethodScores out{Method::kRfe, names, {}};
  out.scores.resize(n_features);
  for (std::size_t f = 0; f < n_features; ++f) out.scores[f] = order[f] / static_cast<double>(n_features);
  return out;
}

MethodScores score_filter(const Dataset& d, Method method, const DiscretizationConfig& cfg) {
  if (method == Method::kRfe) throw_usage("rfe is not a filter method");
  cfg.validate();
  if (method != Method::kMad) require_both_classes(d);
  MethodScores out{method, d.feature_names(), std::vector<double>(d.feature_count(), 0.0)};
  parallel_for(d.feature_count(), [&](std::size_t j) {
    const auto column = d.column(j);
    switch (method) {
      case Method::kInfoGain:
        out.scores[j] = information_gain(contingency(discretize(column, cfg), d.labels()));
        break;
      case Method::kChiSquared:
        out.scores[j] = chi_squared(contingency(discretize(column, cfg), d.labels()));
        break;
      case Method::kMad:
        out.scores[j] = mean_abs_deviation(column);
        break;
      case Method::kDispersionRatio:
        out.scores[j] = dispersion_ratio(column, d.labels());
        break;
      case Method::kRfe:
        break;
    }
  });
  return out;
}

std::vector<MethodScores> score_all(const Dataset& d, const DiscretizationConfig& cfg,
                                    const trees::ModelConfig& rfe_model, std::uint64_t seed) {
  std::vector<MethodScores> out;
  out.reserve(kAllMethods.size());
  for (const Method m : kAllMethods) {
    out.push_back(m == Method::kRfe ? rfe_rank(d, rfe_model, seed) : score_filter(d, m, cfg));
  }
  return out;
}

}  // namespace flowsieve::selectors
