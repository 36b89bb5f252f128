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

#ifndef FLOWSIEVE_DATASET_HPP_
#define FLOWSIEVE_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flowsieve::flowdata {

using Label = std::uint8_t;  // 0 = benign, 1 = malicious
inline constexpr Label kBenign = 0;
inline constexpr Label kMalicious = 1;

// Feature names shared by the shipped adapters so rankings line up across
// Bot-IoT, IoT-23 and Ton-IoT.
std::span<const std::string_view> canonical_vocabulary();

// Integer codes assigned to a non-numeric column; code i is categories[i].
struct ColumnEncoding {
  std::string feature;
  std::vector<std::string> categories;

  bool operator==(const ColumnEncoding&) const = default;
};

struct MissingCount {
  std::string feature;
  std::size_t count = 0;

  bool operator==(const MissingCount&) const = default;
};

// What happened while turning a raw table into a Dataset.
struct LoadReport {
  std::size_t dropped_rows = 0;
  std::vector<MissingCount> missing;  // only columns with at least one imputed cell
  std::vector<ColumnEncoding> encodings;
};

// Non-owning column-major view handed to the learners.
struct FeatureMatrix {
  std::vector<std::span<const double>> columns;
  std::size_t rows = 0;

  std::size_t cols() const { return columns.size(); }
  double at(std::size_t row, std::size_t col) const { return columns[col][row]; }
};

// Immutable labeled table. Construction validates shape, name uniqueness and
// labels; all accessors are const so a Dataset can be shared across threads.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> feature_names, std::vector<std::vector<double>> columns,
          std::vector<Label> labels, LoadReport report = {});

  std::size_t row_count() const { return labels_.size(); }
  std::size_t feature_count() const { return names_.size(); }
  const std::vector<std::string>& feature_names() const { return names_; }
  std::span<const double> column(std::size_t j) const { return columns_[j]; }
  std::span<const Label> labels() const { return labels_; }
  const LoadReport& load_report() const { return report_; }

  // Throws a usage error naming the feature when absent.
  std::size_t feature_index(std::string_view name) const;
  bool has_feature(std::string_view name) const;

  std::size_t count_label(Label label) const;
  bool has_both_classes() const { return count_label(kBenign) > 0 && count_label(kMalicious) > 0; }

  FeatureMatrix matrix() const;

  Dataset select_rows(std::span<const std::size_t> rows) const;
  Dataset select_features(std::span<const std::string> names) const;

  // Names, columns and labels; the load report is provenance, not content.
  bool operator==(const Dataset& other) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::vector<Label> labels_;
  LoadReport report_;
};

enum class DatasetId { kBotIot, kIot23, kTonIot, kCustom };

std::string_view dataset_id_name(DatasetId id);
DatasetId parse_dataset_id(std::string_view name);

// Maps a source schema onto the canonical vocabulary.
struct SchemaAdapter {
  DatasetId dataset_id = DatasetId::kCustom;
  std::vector<std::pair<std::string, std::string>> column_map;  // source -> canonical
  std::string label_column = "label";
  // Raw label strings meaning benign. When empty, labels must already be 0/1.
  std::vector<std::string> benign_values;
  // Consulted only when exhaustive_labels is set: any raw label outside
  // benign_values and malicious_values is then an error instead of malicious.
  std::vector<std::string> malicious_values;
  bool exhaustive_labels = false;
  std::vector<std::string> drop_columns;

  // Identity schema for canonical files: numeric 0/1 `label` column.
  static SchemaAdapter custom();
  static SchemaAdapter parse(std::string_view text, std::string_view source_name = "<adapter>");
  static SchemaAdapter from_file(const std::filesystem::path& path);

  void validate() const;
};

// Resolves an adapter given either a file path or an id looked up as
// `<adapter_dir>/<id>.conf`. "custom" resolves without a file.
SchemaAdapter resolve_adapter(std::string_view id_or_path, const std::filesystem::path& adapter_dir);

std::filesystem::path default_adapter_dir();

// Reads delimited text (comma or tab, picked from the header line).
//  - cells "", "-", "?", "NA", "NaN", "nan", "null" count as missing; in
//    numeric columns they are imputed as 0 and counted per column
//  - a column is numeric when more than half of its non-missing cells parse
//    as finite numbers (decimal, or 0x-prefixed hex); other cells in such a
//    column are corrupt and their rows are dropped and counted
//  - remaining columns are categorical and get first-appearance codes
Dataset load_table(const std::filesystem::path& path, const SchemaAdapter& adapter);
Dataset load_table_text(std::string_view text, const SchemaAdapter& adapter,
                        std::string_view source_name = "<text>");

// Canonical form: comma-separated, canonical names, `label` column last,
// values in shortest round-trip notation. Reloads equal via custom().
std::string to_canonical_csv(const Dataset& d);
void write_canonical(const Dataset& d, const std::filesystem::path& path);

struct SyntheticSpec {
  std::size_t n_rows = 5000;
  std::size_t n_informative = 4;
  std::size_t n_noise = 28;
  double class_balance = 0.3;  // fraction malicious
  std::uint64_t seed = 0;
  // Class-conditional mean shift of informative columns, in noise standard deviations.
  double shift = 4.0;

  void validate() const;
};

// Informative columns are N(shift * label, 1); noise columns are N(0, 1)
// for both classes. Names are informative_NN then noise_NN. Malicious row
// count is round-half-up(n_rows * class_balance).
Dataset generate_synthetic(const SyntheticSpec& spec);

struct FoldSplit {
  std::size_t fold_index = 0;
  std::vector<std::size_t> train_rows;  // ascending
  std::vector<std::size_t> test_rows;   // ascending

  bool operator==(const FoldSplit&) const = default;
};

// Stratified k-fold. Each class is shuffled with the seed and dealt
// round-robin over the folds, continuing where the previous class stopped,
// so every fold gets floor or ceil of each class's share.
std::vector<FoldSplit> stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed);

struct HoldoutIndices {
  std::vector<std::size_t> train_rows;  // ascending
  std::vector<std::size_t> test_rows;   // ascending
};

// Per class, round-half-up(n_class * test_fraction) rows go to test. A class
// that would end up with an empty train or test side is an error.
HoldoutIndices holdout_indices(const Dataset& d, double test_fraction, std::uint64_t seed);
std::pair<Dataset, Dataset> holdout_split(const Dataset& d, double test_fraction, std::uint64_t seed);

}  // namespace flowsieve::flowdata

#endif  // FLOWSIEVE_DATASET_HPP_
