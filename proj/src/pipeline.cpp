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

#include "flowsieve/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <thread>

#include "flowsieve/error.hpp"
#include "flowsieve/evaluation.hpp"
#include "flowsieve/json_io.hpp"
#include "flowsieve/keyvalue.hpp"
#include "flowsieve/ranking.hpp"

namespace flowsieve::pipeline {

namespace {

using nlohmann::json;

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw_usage("invalid integer for '" + std::string(key) + "': '" + std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw_usage("invalid number for '" + std::string(key) + "': '" + std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw_usage("invalid boolean for '" + std::string(key) + "': '" + std::string(value) + "'");
}

std::filesystem::path adapter_dir_of(const RunConfig& cfg) {
  return cfg.adapter_dir.empty() ? flowdata::default_adapter_dir() : std::filesystem::path(cfg.adapter_dir);
}

flowdata::Dataset load_dataset(const RunConfig& cfg) {
  if (cfg.data.empty()) throw_usage("no dataset given (set 'data')");
  const flowdata::SchemaAdapter adapter = flowdata::resolve_adapter(cfg.adapter, adapter_dir_of(cfg));
  return flowdata::load_table(cfg.data, adapter);
}

json dataset_summary(const flowdata::Dataset& d) {
  const auto& rep = d.load_report();
  json missing = json::array();
  for (const auto& m : rep.missing) missing.push_back({{"feature", m.feature}, {"count", m.count}});
  json encodings = json::array();
  for (const auto& e : rep.encodings) encodings.push_back({{"feature", e.feature}, {"categories", e.categories}});
  return {
      {"rows", d.row_count()},
      {"features", d.feature_count()},
      {"benign_rows", d.count_label(flowdata::kBenign)},
      {"malicious_rows", d.count_label(flowdata::kMalicious)},
      {"dropped_rows", rep.dropped_rows},
      {"missing_imputed", missing},
      {"encodings", encodings},
  };
}

json metrics_json(const evaluation::Metrics& m) {
  return {
      {"acc", m.acc},
      {"prc", m.prc},
      {"rcl", m.rcl},
      {"f1s", m.f1s},
      {"fpr", m.fpr},
      {"macro_f1", m.macro_f1},
      {"fpr_benign_positive", m.fpr_benign_positive},
      {"undefined_flags", m.undefined},
  };
}

json confusion_json(const evaluation::ConfusionMatrix& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

std::vector<std::string> dataset_warnings(const flowdata::Dataset& d) {
  std::vector<std::string> out;
  const auto& rep = d.load_report();
  if (rep.dropped_rows > 0) {
    out.push_back("dropped " + std::to_string(rep.dropped_rows) + " rows with malformed or unparseable cells");
  }
  for (const auto& m : rep.missing) {
    out.push_back("imputed " + std::to_string(m.count) + " missing values in '" + m.feature + "' as 0");
  }
  return out;
}

}  // namespace

std::string_view tool_version() {
#ifdef FLOWSIEVE_VERSION
  return FLOWSIEVE_VERSION;
#else
  return "0.0.0";
#endif
}

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::set(std::string_view raw_key, std::string_view value) {
  std::string key(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "data") {
    data = value;
  } else if (key == "adapter") {
    adapter = value;
  } else if (key == "adapter_dir") {
    adapter_dir = value;
  } else if (key == "seed") {
    seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "k") {
    k = parse_integer<std::size_t>(key, value);
  } else if (key == "bins") {
    disc.bins = parse_integer<int>(key, value);
  } else if (key == "disc_strategy") {
    disc.strategy = selectors::parse_disc_strategy(value);
  } else if (key == "disc_threshold") {
    disc.distinct_threshold = parse_integer<int>(key, value);
  } else if (key == "rfe_estimators") {
    rfe_estimators = parse_integer<int>(key, value);
  } else if (key == "grid") {
    grid = parse_bool(key, value);
  } else if (key == "no_grid") {
    grid = !parse_bool(key, value);
  } else if (key == "folds") {
    folds = parse_integer<std::size_t>(key, value);
  } else if (key == "test_fraction") {
    test_fraction = parse_real(key, value);
  } else if (key == "repeats") {
    repeats = parse_integer<int>(key, value);
  } else if (key == "warmup") {
    warmup = parse_integer<int>(key, value);
  } else if (key == "families") {
    families.clear();
    for (const auto& name : split_list(value)) families.push_back(trees::parse_family(name));
  } else if (key == "out") {
    out = value;
  } else if (key == "rows") {
    synth.n_rows = parse_integer<std::size_t>(key, value);
  } else if (key == "informative") {
    synth.n_informative = parse_integer<std::size_t>(key, value);
  } else if (key == "noise") {
    synth.n_noise = parse_integer<std::size_t>(key, value);
  } else if (key == "balance") {
    synth.class_balance = parse_real(key, value);
  } else if (key == "shift") {
    synth.shift = parse_real(key, value);
  } else {
    throw_usage("unknown config key '" + std::string(raw_key) + "'");
  }
}

void RunConfig::apply_file(const std::filesystem::path& path) {
  const KeyValueDocument doc = read_key_values(path);
  for (const auto& [key, value] : doc.entries) set(key, value);
}

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw_usage("a seed is required (set 'seed')");
  return *seed;
}

void RunConfig::validate() const {
  require_seed();
  if (k < 1) throw_usage("k must be at least 1");
  disc.validate();
  if (rfe_estimators < 1) throw_usage("rfe_estimators must be at least 1");
  if (folds < 2) throw_usage("folds must be at least 2");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw_usage("test_fraction must lie in (0, 1)");
  if (repeats < 1) throw_usage("repeats must be at least 1");
  if (warmup < 0) throw_usage("warmup must be nonnegative");
  if (families.empty()) throw_usage("no model families selected");
  for (std::size_t i = 0; i < families.size(); ++i) {
    for (std::size_t j = i + 1; j < families.size(); ++j) {
      if (families[i] == families[j]) throw_usage("model family listed twice");
    }
  }
}

json RunConfig::echo() const {
  json fams = json::array();
  for (const auto f : families) fams.push_back(trees::family_name(f));
  json j{
      {"data", data},
      {"adapter", adapter},
      {"adapter_dir", adapter_dir},
      {"k", k},
      {"bins", disc.bins},
      {"disc_strategy", selectors::disc_strategy_name(disc.strategy)},
      {"disc_threshold", disc.distinct_threshold},
      {"rfe_estimators", rfe_estimators},
      {"grid", grid},
      {"folds", folds},
      {"test_fraction", test_fraction},
      {"repeats", repeats},
      {"warmup", warmup},
      {"families", fams},
  };
  j["seed"] = seed ? json(*seed) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Commands

RunReport select_report(const flowdata::Dataset& d, const RunConfig& cfg) {
  cfg.validate();
  const std::uint64_t seed = cfg.require_seed();
  if (cfg.k > d.feature_count()) {
    throw_usage("k = " + std::to_string(cfg.k) + " exceeds the dataset's " + std::to_string(d.feature_count()) +
                " features");
  }

  std::vector<std::string> warnings = dataset_warnings(d);
  const trees::ModelConfig rfe_model = selectors::default_rfe_model(cfg.rfe_estimators);
  const std::vector<selectors::MethodScores> raw = selectors::score_all(d, cfg.disc, rfe_model, seed);

  std::vector<selectors::MethodScores> normalized;
  json methods = json::array();
  for (const auto& m : raw) {
    if (ranking::is_degenerate(m)) {
      warnings.push_back("method " + std::string(selectors::method_name(m.method)) +
                         " scored every feature 0; normalized to a uniform vector");
    }
    normalized.push_back(ranking::normalize(m));
    methods.push_back({{"method", selectors::method_name(m.method)},
                       {"raw", m.scores},
                       {"normalized", normalized.back().scores}});
  }
  const ranking::CombinedRanking combined = ranking::aggregate(normalized);
  const ranking::FeatureSet fs = ranking::top_k(combined, cfg.k);

  json entries = json::array();
  for (const auto& e : combined.entries) entries.push_back({{"feature", e.feature}, {"percent", e.percent}});

  json doc;
  doc["tool"] = {{"name", "flowsieve"}, {"version", tool_version()}};
  doc["command"] = "select";
  doc["config"] = cfg.echo();
  doc["dataset"] = dataset_summary(d);
  doc["selection"] = {
      {"features", d.feature_names()},
      {"methods", methods},
      {"aggregation", "unweighted mean of per-method percentages"},
      {"rfe_model", rfe_model},
      {"ranking", entries},
      {"feature_set", {{"k", cfg.k}, {"names", fs.names}, {"coverage", fs.coverage}}},
  };
  doc["warnings"] = warnings;
  return RunReport(std::move(doc));
}

RunReport benchmark_report(const flowdata::Dataset& d, const RunConfig& cfg) {
  json doc = select_report(d, cfg).json();
  doc["command"] = "benchmark";
  const std::uint64_t seed = cfg.require_seed();
  const std::vector<std::string> selected = doc["selection"]["feature_set"]["names"].get<std::vector<std::string>>();

  const flowdata::HoldoutIndices split = flowdata::holdout_indices(d, cfg.test_fraction, seed);

  std::vector<trees::ModelConfig> configs;
  for (const auto family : cfg.families) {
    trees::ModelConfig c = trees::ModelConfig::defaults(family);
    c.seed = seed;
    configs.push_back(c);
  }

  if (cfg.grid) {
    const flowdata::Dataset train = d.select_rows(split.train_rows);
    json grids = json::array();
    for (auto& c : configs) {
      evaluation::GridSpec spec = evaluation::GridSpec::defaults(c.family);
      spec.base.seed = seed;
      const evaluation::GridResult result = evaluation::grid_search(train, spec, cfg.folds, seed);
      json table = json::array();
      for (const auto& row : result.table) {
        table.push_back({{"config", row.config},
                         {"fold_macro_f1", row.fold_macro_f1},
                         {"mean_macro_f1", row.mean_macro_f1}});
      }
      grids.push_back({{"family", trees::family_name(c.family)}, {"best", result.best}, {"table", table}});
      c = result.best;
    }
    doc["grid_search"] = {{"folds", cfg.folds}, {"selection_metric", "macro_f1"}, {"families", grids}};
  }

  evaluation::BenchmarkOptions opts;
  opts.repeats = cfg.repeats;
  opts.warmup = cfg.warmup;
  opts.test_fraction = cfg.test_fraction;
  opts.seed = seed;
  const auto rows = evaluation::benchmark(d, selected, configs, opts);

  json bench_rows = json::array();
  json timing_rows = json::array();
  for (const auto& r : rows) {
    const std::string model(trees::family_display_name(r.family));
    bench_rows.push_back({{"model", model},
                          {"family", trees::family_name(r.family)},
                          {"feature_selection", r.feature_selection},
                          {"features", r.feature_selection ? selected.size() : d.feature_count()},
                          {"config", r.config},
                          {"confusion", confusion_json(r.confusion)},
                          {"metrics", metrics_json(r.metrics)},
                          {"repeats", r.repeats}});
    timing_rows.push_back({{"model", model},
                           {"feature_selection", r.feature_selection},
                           {"training_time_s", r.training_time_s},
                           {"samples_s", r.time_samples_s}});
  }
  doc["benchmark"] = {
      {"split",
       {{"protocol", "stratified holdout"},
        {"test_fraction", cfg.test_fraction},
        {"train_rows", split.train_rows.size()},
        {"test_rows", split.test_rows.size()}}},
      {"positive_class", "malicious"},
      {"timing_protocol", {{"clock", "steady_clock"}, {"statistic", "median"}, {"warmup", cfg.warmup}}},
      {"rows", bench_rows},
  };
  doc["timing"] = {
      {"environment",
       {{"hardware_concurrency", std::thread::hardware_concurrency()},
        {"threads_during_timing", 1},
        {"note", "fits timed serially; wall-clock seconds of fit() only"}}},
      {"benchmark", timing_rows},
  };
  return RunReport(std::move(doc));
}

RunReport cmd_select(const RunConfig& cfg) {
  cfg.validate();
  return select_report(load_dataset(cfg), cfg);
}

RunReport cmd_benchmark(const RunConfig& cfg) {
  cfg.validate();
  return benchmark_report(load_dataset(cfg), cfg);
}

void cmd_synth(const RunConfig& cfg, const std::filesystem::path& path) {
  flowdata::SyntheticSpec spec = cfg.synth;
  spec.seed = cfg.require_seed();
  flowdata::write_canonical(flowdata::generate_synthetic(spec), path);
}

}  // namespace flowsieve::pipeline
