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

#ifndef FLOWSIEVE_SELECTORS_HPP_
#define FLOWSIEVE_SELECTORS_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowsieve/dataset.hpp"
#include "flowsieve/trees.hpp"

namespace flowsieve::selectors {

using flowdata::Dataset;
using flowdata::Label;

enum class Method { kInfoGain, kChiSquared, kRfe, kMad, kDispersionRatio };

inline constexpr std::array<Method, 5> kAllMethods = {Method::kInfoGain, Method::kChiSquared, Method::kRfe,
                                                      Method::kMad, Method::kDispersionRatio};

std::string_view method_name(Method m);  // info_gain, chi_squared, rfe, mad, dispersion_ratio
Method parse_method(std::string_view name);

// One selector's per-feature scores, aligned with feature_names.
struct MethodScores {
  Method method = Method::kInfoGain;
  std::vector<std::string> feature_names;
  std::vector<double> scores;

  bool operator==(const MethodScores&) const = default;
};

enum class DiscStrategy { kEqualFrequency, kEqualWidth };

std::string_view disc_strategy_name(DiscStrategy s);
DiscStrategy parse_disc_strategy(std::string_view name);

// Binning for the contingency-based scores. Columns with at most
// `distinct_threshold` distinct values keep one category per value.
struct DiscretizationConfig {
  DiscStrategy strategy = DiscStrategy::kEqualFrequency;
  int bins = 10;
  int distinct_threshold = 20;

  void validate() const;
};

// Dense category codes starting at 0.
std::vector<std::uint32_t> discretize(std::span<const double> column, const DiscretizationConfig& cfg);

// Rows are feature categories, columns are classes (benign, malicious).
using ContingencyTable = std::vector<std::array<double, 2>>;

ContingencyTable contingency(std::span<const std::uint32_t> codes, std::span<const Label> labels);

// Shannon entropy in bits; 0 log 0 = 0.
double entropy(std::span<const Label> labels);
double entropy_of_counts(std::span<const double> counts);

// H(Y) - sum_v (n_v / n) H(Y | X = v), clamped into [0, H(Y)].
double information_gain(const ContingencyTable& table);
double information_gain(const Dataset& d, std::string_view feature, const DiscretizationConfig& cfg);

// Pearson statistic sum (O - E)^2 / E with E = row_total * col_total / N;
// cells with E = 0 contribute nothing.
double chi_squared(const ContingencyTable& table);
double chi_squared(const Dataset& d, std::string_view feature, const DiscretizationConfig& cfg);

// Mean absolute deviation around the arithmetic mean.
double mean_abs_deviation(std::span<const double> column);
double mean_abs_deviation(const Dataset& d, std::string_view feature);

// sqrt(between-class variance / total variance), i.e. the correlation ratio;
// 0 for a constant column.
double dispersion_ratio(std::span<const double> column, std::span<const Label> labels);
double dispersion_ratio(const Dataset& d, std::string_view feature);

// Recursive feature elimination: refit on the survivors, drop the single
// least important feature (ties: lexically smallest name), repeat. A
// feature removed r-th of F scores r / F, so the last survivor scores 1.
MethodScores rfe_rank(const Dataset& d, const trees::ModelConfig& base_model, std::uint64_t seed);

// The four filter scores for every feature (no RFE).
MethodScores score_filter(const Dataset& d, Method method, const DiscretizationConfig& cfg);

// All five methods in kAllMethods order. Only RFE consumes the seed.
std::vector<MethodScores> score_all(const Dataset& d, const DiscretizationConfig& cfg,
                                    const trees::ModelConfig& rfe_model, std::uint64_t seed);

// Default forest with fewer trees, used as the RFE estimator.
trees::ModelConfig default_rfe_model(int n_estimators = 20);

}  // namespace flowsieve::selectors

#endif  // FLOWSIEVE_SELECTORS_HPP_
