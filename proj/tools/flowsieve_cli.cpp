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

// flowsieve command-line tool: select | synth | benchmark | report.

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "flowsieve/flowsieve.h"

namespace {

struct Outcome {
  int code = 0;
};

// Option values keyed by config key, in the order they were declared.
struct FlagSet {
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> switches;  // key, flag setting "true"/"false"
  std::map<std::string, std::string> switch_values;
  std::string config_file;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    for (auto& c : flag) {
      if (c == '_') c = '-';
    }
    options.emplace_back(key, app->add_option(flag, values[key], help));
  }

  void add_switch(CLI::App* app, const std::string& flag, const std::string& key, const std::string& value,
                  const std::string& help) {
    switch_values[flag] = value;
    switches.emplace_back(key + "=" + flag, app->add_flag(flag, help));
  }
};

int report_failure(fs_status s) {
  std::cerr << "flowsieve: " << fs_last_error() << "\n";
  return static_cast<int>(s);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  fs_string_free(s);
  return out;
}

using ConfigPtr = std::unique_ptr<fs_config, decltype(&fs_config_destroy)>;
using ReportPtr = std::unique_ptr<fs_report, decltype(&fs_report_destroy)>;

// Defaults, then the config file, then only the flags actually given.
fs_status build_config(const FlagSet& flags, fs_config* cfg) {
  if (!flags.config_file.empty()) {
    if (fs_status s = fs_config_load_file(cfg, flags.config_file.c_str()); s != FS_OK) return s;
  }
  for (const auto& [key, opt] : flags.options) {
    if (opt->count() == 0) continue;
    if (fs_status s = fs_config_set(cfg, key.c_str(), flags.values.at(key).c_str()); s != FS_OK) return s;
  }
  for (const auto& [spec, opt] : flags.switches) {
    if (opt->count() == 0) continue;
    const auto eq = spec.find('=');
    const std::string key = spec.substr(0, eq);
    const std::string flag = spec.substr(eq + 1);
    if (fs_status s = fs_config_set(cfg, key.c_str(), flags.switch_values.at(flag).c_str()); s != FS_OK) return s;
  }
  return FS_OK;
}

void print_ranking(const fs_report* r) {
  char* csv = nullptr;
  if (fs_report_ranking_csv(r, &csv) == FS_OK) std::cout << take(csv);
  std::cout << "selected:";
  for (size_t i = 0; i < fs_report_feature_count(r); ++i) std::cout << (i ? "," : " ") << fs_report_feature(r, i);
  std::cout << "\n";
}

int run_select_or_benchmark(const FlagSet& flags, bool benchmark) {
  fs_config* raw = nullptr;
  if (fs_status s = fs_config_create(&raw); s != FS_OK) return report_failure(s);
  ConfigPtr cfg(raw, fs_config_destroy);
  if (fs_status s = build_config(flags, cfg.get()); s != FS_OK) return report_failure(s);

  fs_report* rep = nullptr;
  const fs_status s = benchmark ? fs_run_benchmark(cfg.get(), &rep) : fs_run_select(cfg.get(), &rep);
  if (s != FS_OK) return report_failure(s);
  ReportPtr report(rep, fs_report_destroy);

  if (const char* out = fs_config_out(cfg.get())) {
    if (fs_status w = fs_report_write(report.get(), out); w != FS_OK) return report_failure(w);
  }
  if (benchmark) {
    char* table = nullptr;
    if (fs_status t = fs_report_render_table(report.get(), &table); t != FS_OK) return report_failure(t);
    std::cout << take(table);
  } else {
    print_ranking(report.get());
  }
  return 0;
}

int run_synth(const FlagSet& flags) {
  fs_config* raw = nullptr;
  if (fs_status s = fs_config_create(&raw); s != FS_OK) return report_failure(s);
  ConfigPtr cfg(raw, fs_config_destroy);
  if (fs_status s = build_config(flags, cfg.get()); s != FS_OK) return report_failure(s);
  const char* out = fs_config_out(cfg.get());
  if (out == nullptr) {
    std::cerr << "flowsieve: synth needs --out FILE\n";
    return FS_ERR_USAGE;
  }
  if (fs_status s = fs_run_synth(cfg.get(), out); s != FS_OK) return report_failure(s);
  return 0;
}

int run_report(const std::string& path, const std::string& what, const std::string& out_dir) {
  fs_report* raw = nullptr;
  if (fs_status s = fs_report_load(path.c_str(), &raw); s != FS_OK) return report_failure(s);
  ReportPtr report(raw, fs_report_destroy);
  if (!out_dir.empty()) {
    if (fs_status s = fs_report_write(report.get(), out_dir.c_str()); s != FS_OK) return report_failure(s);
  }
  char* text = nullptr;
  fs_status s = FS_OK;
  if (what == "json") {
    s = fs_report_json(report.get(), &text);
  } else if (what == "ranking") {
    s = fs_report_ranking_csv(report.get(), &text);
  } else if (what == "features") {
    for (size_t i = 0; i < fs_report_feature_count(report.get()); ++i) {
      std::cout << fs_report_feature(report.get(), i) << "\n";
    }
    return 0;
  } else if (fs_report_has_benchmark(report.get())) {
    s = fs_report_render_table(report.get(), &text);
  } else {
    s = fs_report_ranking_csv(report.get(), &text);
  }
  if (s != FS_OK) return report_failure(s);
  std::cout << take(text);
  return 0;
}

void add_data_flags(CLI::App* app, FlagSet& f) {
  app->add_option("--config", f.config_file, "Key-value config file; flags override its entries");
  f.add(app, "data", "Flow table (CSV or TSV)");
  f.add(app, "adapter", "Schema adapter id or adapter file (default custom)");
  f.add(app, "adapter_dir", "Directory holding <id>.conf adapters");
  f.add(app, "seed", "Random seed (required)");
  f.add(app, "k", "Number of features to keep (default 8)");
  f.add(app, "bins", "Discretization bins for info_gain and chi_squared (default 10)");
  f.add(app, "disc_strategy", "equal_frequency or equal_width");
  f.add(app, "disc_threshold", "Discretize only columns with more distinct values than this (default 20)");
  f.add(app, "rfe_estimators", "Trees in the RFE forest (default 20)");
  f.add(app, "out", "Output directory for report.json, ranking.csv, features.txt, benchmark.txt");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowsieve: feature ranking and tree-ensemble benchmarking for labeled network flows"};
  app.set_version_flag("--version", std::string(fs_version()));
  app.require_subcommand(1);

  FlagSet select_flags;
  CLI::App* select = app.add_subcommand("select", "Score, aggregate and rank features; keep the top k");
  add_data_flags(select, select_flags);

  FlagSet bench_flags;
  CLI::App* bench = app.add_subcommand("benchmark", "Select features, tune, and compare full vs selected models");
  add_data_flags(bench, bench_flags);
  bench_flags.add_switch(bench, "--no-grid", "grid", "false", "Skip grid search; use family defaults");
  bench_flags.add(bench, "folds", "Cross-validation folds for grid search (default 5)");
  bench_flags.add(bench, "test_fraction", "Holdout test fraction (default 0.2)");
  bench_flags.add(bench, "repeats", "Timed fits per benchmark row (default 5)");
  bench_flags.add(bench, "warmup", "Untimed warm-up fits per row (default 1)");
  bench_flags.add(bench, "families", "Comma list of random_forest,gbm_histogram,gbm_goss");

  FlagSet synth_flags;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic planted-feature dataset");
  synth->add_option("--config", synth_flags.config_file, "Key-value config file; flags override its entries");
  synth_flags.add(synth, "rows", "Row count (default 5000)");
  synth_flags.add(synth, "informative", "Informative feature count (default 4)");
  synth_flags.add(synth, "noise", "Noise feature count (default 28)");
  synth_flags.add(synth, "balance", "Malicious fraction in (0, 1) (default 0.3)");
  synth_flags.add(synth, "shift", "Class mean shift of informative features (default 4)");
  synth_flags.add(synth, "seed", "Random seed (required)");
  synth_flags.add(synth, "out", "Output file");

  std::string report_path;
  std::string report_what = "table";
  std::string report_out;
  CLI::App* report = app.add_subcommand("report", "Re-render a saved report.json");
  report->add_option("report", report_path, "Path to report.json")->required();
  report->add_option("--show", report_what, "table, ranking, features or json")
      ->check(CLI::IsMember({"table", "ranking", "features", "json"}));
  report->add_option("--out", report_out, "Rewrite all output files into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : FS_ERR_USAGE;
  }

  if (select->parsed()) return run_select_or_benchmark(select_flags, false);
  if (bench->parsed()) return run_select_or_benchmark(bench_flags, true);
  if (synth->parsed()) return run_synth(synth_flags);
  return run_report(report_path, report_what, report_out);
}
