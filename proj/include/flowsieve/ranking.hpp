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

#ifndef FLOWSIEVE_RANKING_HPP_
#define FLOWSIEVE_RANKING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "flowsieve/selectors.hpp"

namespace flowsieve::ranking {

using selectors::MethodScores;

struct RankEntry {
  std::string feature;
  double percent = 0.0;

  bool operator==(const RankEntry&) const = default;
};

// Sorted by percent descending, then feature name ascending.
struct CombinedRanking {
  std::vector<RankEntry> entries;

  bool operator==(const CombinedRanking&) const = default;
};

struct FeatureSet {
  std::vector<std::string> names;  // ranking order
  double coverage = 0.0;           // sum of the selected percentages

  bool operator==(const FeatureSet&) const = default;
};

// Rescales scores to percentages of their sum. An all-zero vector becomes
// uniform 100 / F. Negative or non-finite scores are rejected.
MethodScores normalize(const MethodScores& m);

// True when every score is zero, i.e. normalize() will fall back to uniform.
bool is_degenerate(const MethodScores& m);

// Unweighted mean of percent-normalized vectors over the same features.
CombinedRanking aggregate(std::span<const MethodScores> normalized);

FeatureSet top_k(const CombinedRanking& r, std::size_t k);

// `feature,percent` with two decimals.
std::string to_csv(const CombinedRanking& r);

}  // namespace flowsieve::ranking

#endif  // FLOWSIEVE_RANKING_HPP_
