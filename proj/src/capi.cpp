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

#include "flowsieve/flowsieve.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowsieve/dataset.hpp"
#include "flowsieve/error.hpp"
#include "flowsieve/pipeline.hpp"
#include "flowsieve/trees.hpp"

struct fs_config {
  flowsieve::pipeline::RunConfig cfg;
};

struct fs_dataset {
  flowsieve::flowdata::Dataset data;
};

struct fs_report {
  flowsieve::pipeline::RunReport report;
  std::vector<std::string> features;
};

struct fs_model {
  flowsieve::trees::FittedModel model;
  std::vector<std::string> features;
};

namespace {

using flowsieve::Error;
using flowsieve::ErrorKind;

thread_local std::string g_last_error;

fs_status fail(fs_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs fn, mapping exceptions to status codes.
template <typename F>
fs_status guarded(F&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FS_OK;
  } catch (const Error& e) {
    return fail(static_cast<fs_status>(static_cast<int>(e.kind())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(FS_ERR_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FS_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) flowsieve::throw_usage(std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

fs_report* wrap(flowsieve::pipeline::RunReport r) {
  auto* out = new fs_report{std::move(r), {}};
  if (out->report.has_ranking()) out->features = out->report.selected_features();
  return out;
}

}  // namespace

extern "C" {

const char* fs_version(void) {
  static const std::string v(flowsieve::pipeline::tool_version());
  return v.c_str();
}

const char* fs_last_error(void) { return g_last_error.c_str(); }

void fs_string_free(char* s) { std::free(s); }

fs_status fs_config_create(fs_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new fs_config();
  });
}

void fs_config_destroy(fs_config* cfg) { delete cfg; }

fs_status fs_config_set(fs_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    cfg->cfg.set(key, value);
  });
}

fs_status fs_config_load_file(fs_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg, "config");
    require(path, "path");
    cfg->cfg.apply_file(path);
  });
}

const char* fs_config_out(const fs_config* cfg) {
  if (cfg == nullptr || cfg->cfg.out.empty()) return nullptr;
  return cfg->cfg.out.c_str();
}

fs_status fs_config_json(const fs_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = dup_string(cfg->cfg.echo().dump(2));
  });
}

fs_status fs_dataset_load(const char* path, const char* adapter, const char* adapter_dir, fs_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const auto dir = adapter_dir ? std::filesystem::path(adapter_dir) : flowsieve::flowdata::default_adapter_dir();
    const auto a = flowsieve::flowdata::resolve_adapter(adapter ? adapter : "custom", dir);
    *out = new fs_dataset{flowsieve::flowdata::load_table(path, a)};
  });
}

fs_status fs_dataset_synthesize(const fs_config* cfg, fs_dataset** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    auto spec = cfg->cfg.synth;
    spec.seed = cfg->cfg.require_seed();
    *out = new fs_dataset{flowsieve::flowdata::generate_synthetic(spec)};
  });
}

fs_status fs_dataset_write(const fs_dataset* d, const char* path) {
  return guarded([&] {
    require(d, "dataset");
    require(path, "path");
    flowsieve::flowdata::write_canonical(d->data, path);
  });
}

size_t fs_dataset_rows(const fs_dataset* d) { return d ? d->data.row_count() : 0; }

size_t fs_dataset_features(const fs_dataset* d) { return d ? d->data.feature_count() : 0; }

const char* fs_dataset_feature_name(const fs_dataset* d, size_t i) {
  if (d == nullptr || i >= d->data.feature_count()) return nullptr;
  return d->data.feature_names()[i].c_str();
}

fs_status fs_dataset_labels(const fs_dataset* d, uint8_t* out, size_t n) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    const auto labels = d->data.labels();
    if (n != labels.size()) flowsieve::throw_usage("label buffer size does not match the row count");
    std::copy(labels.begin(), labels.end(), out);
  });
}

void fs_dataset_destroy(fs_dataset* d) { delete d; }

fs_status fs_run_select(const fs_config* cfg, fs_report** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = wrap(flowsieve::pipeline::cmd_select(cfg->cfg));
  });
}

fs_status fs_run_select_dataset(const fs_config* cfg, const fs_dataset* d, fs_report** out) {
  return guarded([&] {
    require(cfg, "config");
    require(d, "dataset");
    require(out, "out");
    *out = wrap(flowsieve::pipeline::select_report(d->data, cfg->cfg));
  });
}

fs_status fs_run_benchmark(const fs_config* cfg, fs_report** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = wrap(flowsieve::pipeline::cmd_benchmark(cfg->cfg));
  });
}

fs_status fs_run_benchmark_dataset(const fs_config* cfg, const fs_dataset* d, fs_report** out) {
  return guarded([&] {
    require(cfg, "config");
    require(d, "dataset");
    require(out, "out");
    *out = wrap(flowsieve::pipeline::benchmark_report(d->data, cfg->cfg));
  });
}

fs_status fs_run_synth(const fs_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg, "config");
    require(path, "path");
    flowsieve::pipeline::cmd_synth(cfg->cfg, path);
  });
}

fs_status fs_report_load(const char* path, fs_report** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(flowsieve::pipeline::RunReport::load(path));
  });
}

fs_status fs_report_write(const fs_report* r, const char* dir) {
  return guarded([&] {
    require(r, "report");
    require(dir, "dir");
    r->report.write(dir);
  });
}

fs_status fs_report_json(const fs_report* r, char** out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    *out = dup_string(r->report.dump());
  });
}

fs_status fs_report_render_table(const fs_report* r, char** out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    *out = dup_string(r->report.benchmark_table());
  });
}

fs_status fs_report_ranking_csv(const fs_report* r, char** out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    *out = dup_string(r->report.ranking_csv());
  });
}

int fs_report_has_benchmark(const fs_report* r) { return r && r->report.has_benchmark() ? 1 : 0; }

int fs_report_has_ranking(const fs_report* r) { return r && r->report.has_ranking() ? 1 : 0; }

size_t fs_report_feature_count(const fs_report* r) { return r ? r->features.size() : 0; }

const char* fs_report_feature(const fs_report* r, size_t i) {
  if (r == nullptr || i >= r->features.size()) return nullptr;
  return r->features[i].c_str();
}

void fs_report_destroy(fs_report* r) { delete r; }

fs_status fs_model_fit(const fs_dataset* d, const char* family, uint64_t seed, fs_model** out) {
  return guarded([&] {
    require(d, "dataset");
    require(family, "family");
    require(out, "out");
    auto cfg = flowsieve::trees::ModelConfig::defaults(flowsieve::trees::parse_family(family));
    cfg.seed = seed;
    auto model = flowsieve::trees::fit(d->data.matrix(), d->data.labels(), cfg);
    *out = new fs_model{std::move(model), d->data.feature_names()};
  });
}

fs_status fs_model_predict(const fs_model* m, const fs_dataset* d, uint8_t* labels, double* probability, size_t n) {
  return guarded([&] {
    require(m, "model");
    require(d, "dataset");
    if (n != d->data.row_count()) flowsieve::throw_usage("output buffer size does not match the row count");
    const auto view = d->data.select_features(m->features);
    const auto pred = flowsieve::trees::predict(m->model, view.matrix());
    if (labels) std::copy(pred.labels.begin(), pred.labels.end(), labels);
    if (probability) std::copy(pred.probability.begin(), pred.probability.end(), probability);
  });
}

fs_status fs_model_save(const fs_model* m, const char* path) {
  return guarded([&] {
    require(m, "model");
    require(path, "path");
    nlohmann::json doc{{"features", m->features},
                       {"model", nlohmann::json::parse(flowsieve::trees::serialize(m->model))}};
    std::ofstream out(path, std::ios::binary);
    if (!out) flowsieve::throw_data(std::string("cannot write '") + path + "'");
    out << doc.dump() << '\n';
    if (!out) flowsieve::throw_data(std::string("write failed for '") + path + "'");
  });
}

fs_status fs_model_load(const char* path, fs_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream in(path, std::ios::binary);
    if (!in) flowsieve::throw_data(std::string("cannot open '") + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto doc = nlohmann::json::parse(ss.str());
    auto features = doc.at("features").get<std::vector<std::string>>();
    auto model = flowsieve::trees::deserialize(doc.at("model").dump());
    if (features.size() != model.n_features) flowsieve::throw_data("model feature list does not match the model");
    *out = new fs_model{std::move(model), std::move(features)};
  });
}

void fs_model_destroy(fs_model* m) { delete m; }

}  // extern "C"
