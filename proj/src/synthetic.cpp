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
#include <cstdio>

#include "flowsieve/dataset.hpp"
#include "flowsieve/error.hpp"
#include "flowsieve/random.hpp"

namespace flowsieve::flowdata {

void SyntheticSpec::validate() const {
  if (n_rows < 2) throw_usage("synthetic spec needs at least 2 rows");
  if (!(class_balance > 0.0 && class_balance < 1.0)) throw_usage("class balance must lie in (0, 1)");
  if (n_informative < 1) throw_usage("synthetic spec needs at least 1 informative feature");
  if (!(shift >= 2.0) || !std::isfinite(shift)) throw_usage("informative shift must be at least 2");
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_rows;
  std::size_t n_malicious = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.class_balance + 0.5));
  n_malicious = std::clamp<std::size_t>(n_malicious, 1, n - 1);

  Rng rng(spec.seed);
  std::vector<Label> labels(n, kBenign);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n_malicious), kMalicious);
  rng.shuffle(std::span(labels));

  const std::size_t width =
      std::max<std::size_t>(2, std::to_string(std::max(spec.n_informative, spec.n_noise)).size());
  const auto numbered = [width](const char* stem, std::size_t i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%0*zu", stem, static_cast<int>(width), i + 1);
    return std::string(buf);
  };

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (std::size_t j = 0; j < spec.n_informative; ++j) {
    names.push_back(numbered("informative", j));
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = rng.normal() + spec.shift * labels[i];
    columns.push_back(std::move(col));
  }
  for (std::size_t j = 0; j < spec.n_noise; ++j) {
    names.push_back(numbered("noise", j));
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = rng.normal();
    columns.push_back(std::move(col));
  }
  return Dataset(std::move(names), std::move(columns), std::move(labels));
}

}  // namespace flowsieve::flowdata
