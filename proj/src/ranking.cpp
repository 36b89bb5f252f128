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

#include "flowsieve/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "flowsieve/error.hpp"

namespace flowsieve::ranking {

bool is_degenerate(const MethodScores& m) {
  return std::all_of(m.scores.begin(), m.scores.end(), [](double s) { return s == 0.0; });
}

MethodScores normalize(const MethodScores& m) {
  if (m.scores.size() != m.feature_names.size()) throw_usage("score vector and feature names differ in length");
  if (m.scores.empty()) throw_usage("cannot normalize an empty score vector");
  double sum = 0.0;
  for (const double s : m.scores) {
    if (!std::isfinite(s) || s < 0.0) {
      throw_usage("score vector for " + std::string(selectors::method_name(m.method)) +
                  " has a negative or non-finite entry");
    }
    sum += s;
  }
  MethodScores out = m;
  const double n = static_cast<double>(m.scores.size());
  for (double& s : out.scores) s = sum > 0.0 ? s / sum * 100.0 : 100.0 / n;
  return out;
}

CombinedRanking aggregate(std::span<const MethodScores> normalized) {
  if (normalized.empty()) throw_usage("aggregate needs at least one score vector");
  const auto& names = normalized.front().feature_names;
  std::vector<double> mean(names.size(), 0.0);
  for (const auto& m : normalized) {
    if (m.feature_names != names || m.scores.size() != names.size()) {
      throw_usage("score vectors cover different feature lists");
    }
    for (std::size_t j = 0; j < names.size(); ++j) mean[j] += m.scores[j];
  }
  CombinedRanking r;
  r.entries.reserve(names.size());
  const double count = static_cast<double>(normalized.size());
  for (std::size_t j = 0; j < names.size(); ++j) r.entries.push_back({names[j], mean[j] / count});
  std::sort(r.entries.begin(), r.entries.end(), [](const RankEntry& a, const RankEntry& b) {
    return a.percent != b.percent ? a.percent > b.percent : a.feature < b.feature;
  });
  return r;
}

FeatureSet top_k(const CombinedRanking& r, std::size_t k) {
  if (k < 1) throw_usage("k must be at least 1");
  if (k > r.entries.size()) {
    throw_usage("k = " + std::to_string(k) + " exceeds the feature count " + std::to_string(r.entries.size()));
  }
  FeatureSet fs;
  for (std::size_t i = 0; i < k; ++i) {
    fs.names.push_back(r.entries[i].feature);
    fs.coverage += r.entries[i].percent;
  }
  fs.coverage = std::clamp(fs.coverage, 0.0, 100.0);
  return fs;
}

std::string to_csv(const CombinedRanking& r) {
  std::string out = "feature,percent\n";
  char buf[32];
  for (const auto& e : r.entries) {
    std::snprintf(buf, sizeof(buf), "%.2f", e.percent);
    if (e.feature.find_first_of(",\"\n") == std::string::npos) {
      out += e.feature;
    } else {
      out += '"';
      for (const char c : e.feature) out += c == '"' ? std::string("\"\"") : std::string(1, c);
      out += '"';
    }
    out += ',';
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace flowsieve::ranking
