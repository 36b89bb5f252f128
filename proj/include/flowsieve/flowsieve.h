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

#ifndef FLOWSIEVE_FLOWSIEVE_H_
#define FLOWSIEVE_FLOWSIEVE_H_

// C interface to the flowsieve library. Every handle is opaque and owned by
// the caller; release it with the matching *_destroy function. Functions
// returning fs_status leave a message for fs_last_error() on failure.
// Strings returned through char** are heap-allocated: free with
// fs_string_free. Strings returned as const char* are owned by the handle.

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FLOWSIEVE_BUILDING_LIBRARY)
#define FLOWSIEVE_API __declspec(dllexport)
#else
#define FLOWSIEVE_API __declspec(dllimport)
#endif
#else
#define FLOWSIEVE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

// Values double as process exit codes in the CLI.
typedef enum fs_status {
  FS_OK = 0,
  FS_ERR_USAGE = 1,
  FS_ERR_DATA = 2,
  FS_ERR_INTERNAL = 3,
} fs_status;

typedef struct fs_config fs_config;
typedef struct fs_dataset fs_dataset;
typedef struct fs_report fs_report;
typedef struct fs_model fs_model;

FLOWSIEVE_API const char* fs_version(void);
// Message of the last failed call on this thread; "" if none.
FLOWSIEVE_API const char* fs_last_error(void);
FLOWSIEVE_API void fs_string_free(char* s);

// Run configuration. Keys are the config-file keys (data, adapter, seed, k, ...).
FLOWSIEVE_API fs_status fs_config_create(fs_config** out);
FLOWSIEVE_API void fs_config_destroy(fs_config* cfg);
FLOWSIEVE_API fs_status fs_config_set(fs_config* cfg, const char* key, const char* value);
FLOWSIEVE_API fs_status fs_config_load_file(fs_config* cfg, const char* path);
// Output directory set through the "out" key, or NULL when unset.
FLOWSIEVE_API const char* fs_config_out(const fs_config* cfg);
// Config echo as JSON.
FLOWSIEVE_API fs_status fs_config_json(const fs_config* cfg, char** out);

// adapter: an adapter id ("bot-iot", "custom", ...) or a path to an adapter
// file. adapter_dir may be NULL for the shipped adapters.
FLOWSIEVE_API fs_status fs_dataset_load(const char* path, const char* adapter, const char* adapter_dir,
                                        fs_dataset** out);
// Synthetic planted-feature dataset from the config's rows/informative/noise/
// balance/shift/seed keys.
FLOWSIEVE_API fs_status fs_dataset_synthesize(const fs_config* cfg, fs_dataset** out);
FLOWSIEVE_API fs_status fs_dataset_write(const fs_dataset* d, const char* path);
FLOWSIEVE_API size_t fs_dataset_rows(const fs_dataset* d);
FLOWSIEVE_API size_t fs_dataset_features(const fs_dataset* d);
FLOWSIEVE_API const char* fs_dataset_feature_name(const fs_dataset* d, size_t i);
// Labels copied into out[0..rows); 0 benign, 1 malicious.
FLOWSIEVE_API fs_status fs_dataset_labels(const fs_dataset* d, uint8_t* out, size_t n);
FLOWSIEVE_API void fs_dataset_destroy(fs_dataset* d);

FLOWSIEVE_API fs_status fs_run_select(const fs_config* cfg, fs_report** out);
FLOWSIEVE_API fs_status fs_run_select_dataset(const fs_config* cfg, const fs_dataset* d, fs_report** out);
FLOWSIEVE_API fs_status fs_run_benchmark(const fs_config* cfg, fs_report** out);
FLOWSIEVE_API fs_status fs_run_benchmark_dataset(const fs_config* cfg, const fs_dataset* d, fs_report** out);
FLOWSIEVE_API fs_status fs_run_synth(const fs_config* cfg, const char* path);

FLOWSIEVE_API fs_status fs_report_load(const char* path, fs_report** out);
// Writes report.json, ranking.csv, features.txt and benchmark.txt as present.
FLOWSIEVE_API fs_status fs_report_write(const fs_report* r, const char* dir);
FLOWSIEVE_API fs_status fs_report_json(const fs_report* r, char** out);
FLOWSIEVE_API fs_status fs_report_render_table(const fs_report* r, char** out);
FLOWSIEVE_API fs_status fs_report_ranking_csv(const fs_report* r, char** out);
FLOWSIEVE_API int fs_report_has_benchmark(const fs_report* r);
FLOWSIEVE_API int fs_report_has_ranking(const fs_report* r);
FLOWSIEVE_API size_t fs_report_feature_count(const fs_report* r);
FLOWSIEVE_API const char* fs_report_feature(const fs_report* r, size_t i);
FLOWSIEVE_API void fs_report_destroy(fs_report* r);

// family: random_forest | gbm_histogram | gbm_goss (or rf | xgb | lgbm),
// with that family's default hyperparameters.
FLOWSIEVE_API fs_status fs_model_fit(const fs_dataset* d, const char* family, uint64_t seed, fs_model** out);
// Predicts every row of d; columns are matched to the training features by
// name. labels and probability may each be NULL; otherwise they hold n
// entries, n == fs_dataset_rows(d).
FLOWSIEVE_API fs_status fs_model_predict(const fs_model* m, const fs_dataset* d, uint8_t* labels,
                                         double* probability, size_t n);
FLOWSIEVE_API fs_status fs_model_save(const fs_model* m, const char* path);
FLOWSIEVE_API fs_status fs_model_load(const char* path, fs_model** out);
FLOWSIEVE_API void fs_model_destroy(fs_model* m);

#ifdef __cplusplus
}
#endif

#endif  // FLOWSIEVE_FLOWSIEVE_H_
