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
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "flowsieve/dataset.hpp"
#include "flowsieve/error.hpp"
#include "flowsieve/keyvalue.hpp"

namespace flowsieve::flowdata {

namespace {

constexpr std::string_view kVocabulary[] = {
    "Fwd. Bytes",
    "Bwd. Bytes",
    "Fwd. Bytes w/ Header",
    "Bwd. Bytes w/ Header",
    "Total Bytes",
    "Packets Per Second",
    "Fwd. Packets per second",
    "Flags",
    "Communication Protocol",
    "Application protocol",
    "Destination Port",
    "Missed Bytes",
};

constexpr std::string_view kMissingTokens[] = {"", "-", "?", "NA", "NaN", "nan", "null"};

bool is_missing(std::string_view cell) {
  return std::find(std::begin(kMissingTokens), std::end(kMissingTokens), cell) !=
         std::end(kMissingTokens);
}

// Parses a finite number; accepts 0x-prefixed hex integers (Argus writes
// some ports that way).
bool parse_number(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.size() > 2 && cell[0] == '0' && (cell[1] == 'x' || cell[1] == 'X')) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data() + 2, cell.data() + cell.size(), v, 16);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) return false;
    out = static_cast<double>(v);
    return true;
  }
  const char* first = cell.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), out);
  return ec == std::errc{} && ptr == cell.data() + cell.size() && std::isfinite(out);
}

std::vector<std::string> split_fields(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty()) {
      cur.clear();
      quoted = true;
    } else if (c == delim) {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.emplace_back(trim(cur));
  return fields;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw_internal("number formatting failed");
  return std::string(buf, ptr);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty()) lines.push_back(line);
    if (eol == std::string_view::npos) break;
    text.remove_prefix(eol + 1);
  }
  return lines;
}

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::span<const std::string_view> canonical_vocabulary() { return kVocabulary; }

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::vector<std::string> feature_names, std::vector<std::vector<double>> columns,
                 std::vector<Label> labels, LoadReport report)
    : names_(std::move(feature_names)),
      columns_(std::move(columns)),
      labels_(std::move(labels)),
      report_(std::move(report)) {
  if (names_.size() != columns_.size()) {
    throw_data("feature name count " + std::to_string(names_.size()) + " does not match column count " +
               std::to_string(columns_.size()));
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) throw_data("duplicate feature name '" + name + "'");
  }
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].size() != labels_.size()) {
      throw_data("column '" + names_[j] + "' has " + std::to_string(columns_[j].size()) +
                 " values, expected " + std::to_string(labels_.size()));
    }
  }
  for (const Label y : labels_) {
    if (y != kBenign && y != kMalicious) throw_data("labels must be 0 or 1");
  }
}

std::size_t Dataset::feature_index(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw_usage("unknown feature '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

bool Dataset::has_feature(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t Dataset::count_label(Label label) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

FeatureMatrix Dataset::matrix() const {
  FeatureMatrix m;
  m.rows = row_count();
  m.columns.reserve(columns_.size());
  for (const auto& c : columns_) m.columns.emplace_back(c);
  return m;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    cols[j].reserve(rows.size());
    for (const std::size_t r : rows) cols[j].push_back(columns_[j].at(r));
  }
  std::vector<Label> labels;
  labels.reserve(rows.size());
  for (const std::size_t r : rows) labels.push_back(labels_.at(r));
  return Dataset(names_, std::move(cols), std::move(labels), report_);
}

Dataset Dataset::select_features(std::span<const std::string> names) const {
  std::vector<std::vector<double>> cols;
  cols.reserve(names.size());
  for (const auto& name : names) cols.push_back(columns_[feature_index(name)]);
  return Dataset(std::vector<std::string>(names.begin(), names.end()), std::move(cols), labels_,
                 report_);
}

bool Dataset::operator==(const Dataset& other) const {
  return names_ == other.names_ && columns_ == other.columns_ && labels_ == other.labels_;
}

// ---------------------------------------------------------------------------
// Adapters

std::string_view dataset_id_name(DatasetId id) {
  switch (id) {
    case DatasetId::kBotIot: return "bot-iot";
    case DatasetId::kIot23: return "iot-23";
    case DatasetId::kTonIot: return "ton-iot";
    case DatasetId::kCustom: return "custom";
  }
  return "custom";
}

DatasetId parse_dataset_id(std::string_view name) {
  for (const DatasetId id : {DatasetId::kBotIot, DatasetId::kIot23, DatasetId::kTonIot, DatasetId::kCustom}) {
    if (dataset_id_name(id) == name) return id;
  }
  throw_usage("unknown dataset id '" + std::string(name) + "'");
}

SchemaAdapter SchemaAdapter::custom() { return SchemaAdapter{}; }

SchemaAdapter SchemaAdapter::parse(std::string_view text, std::string_view source_name) {
  const KeyValueDocument doc = parse_key_values(text, source_name);
  SchemaAdapter a;
  for (const auto& [key, value] : doc.entries) {
    if (key == "dataset") {
      a.dataset_id = parse_dataset_id(value);
    } else if (key == "label_column") {
      a.label_column = value;
    } else if (key == "benign_values") {
      a.benign_values = split_list(value);
    } else if (key == "malicious_values") {
      a.malicious_values = split_list(value);
    } else if (key == "exhaustive_labels") {
      if (value != "true" && value != "false") throw_data("exhaustive_labels must be true or false");
      a.exhaustive_labels = value == "true";
    } else if (key == "drop") {
      a.drop_columns = split_list(value);
    } else if (key.starts_with("map.")) {
      a.column_map.emplace_back(key.substr(4), value);
    } else {
      throw_data(std::string(source_name) + ": unknown adapter key '" + key + "'");
    }
  }
  a.validate();
  return a;
}

SchemaAdapter SchemaAdapter::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_usage("cannot open adapter file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void SchemaAdapter::validate() const {
  if (label_column.empty()) throw_data("adapter label_column is empty");
  std::unordered_set<std::string_view> targets;
  for (const auto& [source, target] : column_map) {
    if (source == label_column) throw_data("adapter maps the label column '" + source + "' as a feature");
    if (target.empty()) throw_data("adapter maps '" + source + "' to an empty name");
    if (!targets.insert(target).second) throw_data("adapter maps two columns onto '" + target + "'");
  }
  if (contains(drop_columns, label_column)) throw_data("adapter drops its own label column");
  if (exhaustive_labels && benign_values.empty()) {
    throw_data("exhaustive_labels requires benign_values");
  }
}

std::filesystem::path default_adapter_dir() {
#ifdef FLOWSIEVE_ADAPTER_DIR
  return FLOWSIEVE_ADAPTER_DIR;
#else
  return "adapters";
#endif
}

SchemaAdapter resolve_adapter(std::string_view id_or_path, const std::filesystem::path& adapter_dir) {
  const std::filesystem::path as_path(id_or_path);
  if (std::filesystem::is_regular_file(as_path)) return SchemaAdapter::from_file(as_path);
  const std::filesystem::path in_dir = adapter_dir / (std::string(id_or_path) + ".conf");
  if (std::filesystem::is_regular_file(in_dir)) return SchemaAdapter::from_file(in_dir);
  if (id_or_path == "custom") return SchemaAdapter::custom();
  throw_usage("unknown adapter '" + std::string(id_or_path) + "' (looked in " + adapter_dir.string() + ")");
}

// ---------------------------------------------------------------------------
// Loading

Dataset load_table_text(std::string_view text, const SchemaAdapter& adapter, std::string_view source_name) {
  adapter.validate();
  const std::string src(source_name);
  const std::vector<std::string_view> lines = split_lines(text);
  if (lines.empty()) throw_data(src + ": empty file");

  const char delim = lines[0].find('\t') != std::string_view::npos ? '\t' : ',';
  const std::vector<std::string> header = split_fields(lines[0], delim);

  const auto col_of = [&](std::string_view name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const std::ptrdiff_t label_col = col_of(adapter.label_column);
  if (label_col < 0) throw_data(src + ": missing label column '" + adapter.label_column + "'");
  for (const auto& [source, target] : adapter.column_map) {
    if (col_of(source) < 0) throw_data(src + ": mapped column '" + source + "' not found");
  }

  // Feature columns in file order, renamed.
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<std::ptrdiff_t>(c) == label_col || contains(adapter.drop_columns, header[c])) continue;
    std::string name = header[c];
    for (const auto& [source, target] : adapter.column_map) {
      if (source == header[c]) name = target;
    }
    feature_cols.push_back(c);
    names.push_back(std::move(name));
  }

  std::vector<std::vector<std::string>> rows;
  rows.reserve(lines.size() - 1);
  std::size_t malformed = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split_fields(lines[i], delim);
    if (fields.size() != header.size()) {
      ++malformed;
      continue;
    }
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw_data(src + ": no data rows");

  // Labels.
  std::vector<Label> labels(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string& raw = rows[r][label_col];
    if (adapter.benign_values.empty()) {
      double v = 0.0;
      if (!parse_number(raw, v) || (v != 0.0 && v != 1.0)) {
        throw_data(src + ": label '" + raw + "' is not 0/1 and the adapter lists no benign values");
      }
      labels[r] = v == 1.0 ? kMalicious : kBenign;
    } else if (contains(adapter.benign_values, raw)) {
      labels[r] = kBenign;
    } else if (adapter.exhaustive_labels && !contains(adapter.malicious_values, raw)) {
      throw_data(src + ": unmappable label value '" + raw + "'");
    } else {
      labels[r] = kMalicious;
    }
  }

  // Column typing.
  std::vector<bool> numeric(feature_cols.size());
  for (std::size_t j = 0; j < feature_cols.size(); ++j) {
    std::size_t present = 0;
    std::size_t parsed = 0;
    double v = 0.0;
    for (const auto& row : rows) {
      const std::string& cell = row[feature_cols[j]];
      if (is_missing(cell)) continue;
      ++present;
      if (parse_number(cell, v)) ++parsed;
    }
    numeric[j] = 2 * parsed > present || present == 0;
  }

  // Rows with corrupt numeric cells are dropped.
  std::vector<std::size_t> keep;
  keep.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    bool ok = true;
    double v = 0.0;
    for (std::size_t j = 0; j < feature_cols.size() && ok; ++j) {
      const std::string& cell = rows[r][feature_cols[j]];
      if (numeric[j] && !is_missing(cell) && !parse_number(cell, v)) ok = false;
    }
    if (ok) keep.push_back(r);
  }

  LoadReport report;
  report.dropped_rows = malformed + (rows.size() - keep.size());
  if (keep.empty()) throw_data(src + ": every row was dropped as corrupt");

  std::vector<std::vector<double>> columns(feature_cols.size(), std::vector<double>(keep.size()));
  std::vector<Label> kept_labels(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) kept_labels[i] = labels[keep[i]];

  for (std::size_t j = 0; j < feature_cols.size(); ++j) {
    auto& col = columns[j];
    if (numeric[j]) {
      std::size_t missing = 0;
      for (std::size_t i = 0; i < keep.size(); ++i) {
        const std::string& cell = rows[keep[i]][feature_cols[j]];
        if (is_missing(cell)) {
          ++missing;
          col[i] = 0.0;
        } else {
          parse_number(cell, col[i]);
        }
      }
      if (missing > 0) report.missing.push_back({names[j], missing});
    } else {
      ColumnEncoding enc{names[j], {}};
      std::unordered_map<std::string, std::size_t> codes;
      for (std::size_t i = 0; i < keep.size(); ++i) {
        const std::string& cell = rows[keep[i]][feature_cols[j]];
        auto [it, inserted] = codes.try_emplace(cell, enc.categories.size());
        if (inserted) enc.categories.push_back(cell);
        col[i] = static_cast<double>(it->second);
      }
      report.encodings.push_back(std::move(enc));
    }
  }

  return Dataset(std::move(names), std::move(columns), std::move(kept_labels), std::move(report));
}

Dataset load_table(const std::filesystem::path& path, const SchemaAdapter& adapter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_table_text(buf.str(), adapter, path.string());
}

std::string to_canonical_csv(const Dataset& d) {
  std::string out;
  for (const auto& name : d.feature_names()) {
    if (name == "label") throw_data("feature named 'label' collides with the canonical label column");
    if (name.find_first_of(",\n\r\"") != std::string::npos) {
      throw_data("feature name '" + name + "' cannot be written to the canonical form");
    }
    out += name;
    out += ',';
  }
  out += "label\n";
  for (std::size_t r = 0; r < d.row_count(); ++r) {
    for (std::size_t j = 0; j < d.feature_count(); ++j) {
      out += format_double(d.column(j)[r]);
      out += ',';
    }
    out += d.labels()[r] == kMalicious ? "1\n" : "0\n";
  }
  return out;
}

void write_canonical(const Dataset& d, const std::filesystem::path& path) {
  const std::string text = to_canonical_csv(d);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data("cannot write " + path.string());
  out << text;
  if (!out) throw_data("write failed for " + path.string());
}

}  // namespace flowsieve::flowdata
