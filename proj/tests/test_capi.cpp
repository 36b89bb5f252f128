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

// Exercises the shared library through its C header only.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "flowsieve/flowsieve.h"

namespace {

std::filesystem::path scratch_dir(const char* tag) {
  std::random_device rd;
  auto p = std::filesystem::temp_directory_path() / (std::string("flowsieve_capi_") + tag + std::to_string(rd()));
  std::filesystem::create_directories(p);
  return p;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  fs_string_free(s);
  return out;
}

fs_config* quick_config() {
  fs_config* cfg = nullptr;
  EXPECT_EQ(fs_config_create(&cfg), FS_OK);
  const char* kv[][2] = {{"seed", "5"},         {"rows", "400"},   {"informative", "2"}, {"noise", "4"},
                         {"k", "3"},            {"grid", "false"}, {"repeats", "1"},     {"warmup", "0"},
                         {"rfe_estimators", "5"}};
  for (const auto& p : kv) EXPECT_EQ(fs_config_set(cfg, p[0], p[1]), FS_OK) << p[0];
  return cfg;
}

}  // namespace

TEST(CApi, VersionAndErrors) {
  EXPECT_STRNE(fs_version(), "");
  fs_config* cfg = nullptr;
  ASSERT_EQ(fs_config_create(&cfg), FS_OK);
  EXPECT_EQ(fs_config_set(cfg, "no_such_key", "1"), FS_ERR_USAGE);
  EXPECT_NE(std::string(fs_last_error()).find("no_such_key"), std::string::npos);
  EXPECT_EQ(fs_config_set(cfg, nullptr, "1"), FS_ERR_USAGE);
  EXPECT_EQ(fs_config_out(cfg), nullptr);
  fs_report* r = nullptr;
  EXPECT_EQ(fs_run_select(cfg, &r), FS_ERR_USAGE);  // no seed
  EXPECT_EQ(r, nullptr);
  EXPECT_EQ(fs_report_load("/nonexistent/report.json", &r), FS_ERR_DATA);
  fs_config_destroy(cfg);
  fs_config_destroy(nullptr);
}

TEST(CApi, SynthesizeSelectAndBenchmark) {
  fs_config* cfg = quick_config();
  fs_dataset* d = nullptr;
  ASSERT_EQ(fs_dataset_synthesize(cfg, &d), FS_OK) << fs_last_error();
  EXPECT_EQ(fs_dataset_rows(d), 400u);
  ASSERT_EQ(fs_dataset_features(d), 6u);
  EXPECT_STREQ(fs_dataset_feature_name(d, 0), "informative_01");
  EXPECT_EQ(fs_dataset_feature_name(d, 6), nullptr);
  std::vector<uint8_t> labels(400);
  ASSERT_EQ(fs_dataset_labels(d, labels.data(), labels.size()), FS_OK);
  EXPECT_EQ(fs_dataset_labels(d, labels.data(), 3), FS_ERR_USAGE);

  fs_report* sel = nullptr;
  ASSERT_EQ(fs_run_select_dataset(cfg, d, &sel), FS_OK) << fs_last_error();
  EXPECT_TRUE(fs_report_has_ranking(sel));
  EXPECT_FALSE(fs_report_has_benchmark(sel));
  ASSERT_EQ(fs_report_feature_count(sel), 3u);
  char* csv = nullptr;
  ASSERT_EQ(fs_report_ranking_csv(sel, &csv), FS_OK);
  EXPECT_EQ(take(csv).rfind("feature,percent\n", 0), 0u);

  fs_report* bench = nullptr;
  ASSERT_EQ(fs_run_benchmark_dataset(cfg, d, &bench), FS_OK) << fs_last_error();
  EXPECT_TRUE(fs_report_has_benchmark(bench));
  char* table = nullptr;
  ASSERT_EQ(fs_report_render_table(bench, &table), FS_OK);
  const std::string t = take(table);
  EXPECT_EQ(t.rfind("Model", 0), 0u);

  const auto dir = scratch_dir("bench");
  ASSERT_EQ(fs_report_write(bench, (dir / "out").c_str()), FS_OK);
  fs_report* back = nullptr;
  ASSERT_EQ(fs_report_load((dir / "out" / "report.json").c_str(), &back), FS_OK);
  char* t2 = nullptr;
  ASSERT_EQ(fs_report_render_table(back, &t2), FS_OK);
  EXPECT_EQ(take(t2), t);
  char* j1 = nullptr;
  char* j2 = nullptr;
  ASSERT_EQ(fs_report_json(bench, &j1), FS_OK);
  ASSERT_EQ(fs_report_json(back, &j2), FS_OK);
  EXPECT_EQ(take(j1), take(j2));

  char* none = nullptr;
  EXPECT_EQ(fs_report_render_table(sel, &none), FS_ERR_DATA);

  fs_report_destroy(back);
  fs_report_destroy(bench);
  fs_report_destroy(sel);
  fs_dataset_destroy(d);
  fs_config_destroy(cfg);
  std::filesystem::remove_all(dir);
}

TEST(CApi, ModelFitPredictSaveLoad) {
  fs_config* cfg = quick_config();
  fs_dataset* d = nullptr;
  ASSERT_EQ(fs_dataset_synthesize(cfg, &d), FS_OK);
  const auto dir = scratch_dir("model");
  ASSERT_EQ(fs_dataset_write(d, (dir / "data.csv").c_str()), FS_OK);
  fs_dataset* reloaded = nullptr;
  ASSERT_EQ(fs_dataset_load((dir / "data.csv").c_str(), "custom", nullptr, &reloaded), FS_OK) << fs_last_error();
  EXPECT_EQ(fs_dataset_rows(reloaded), 400u);

  for (const char* family : {"random_forest", "XGB", "gbm_goss"}) {
    fs_model* m = nullptr;
    ASSERT_EQ(fs_model_fit(d, family, 7, &m), FS_OK) << family << ": " << fs_last_error();
    std::vector<uint8_t> pred(400), truth(400);
    std::vector<double> prob(400);
    ASSERT_EQ(fs_model_predict(m, reloaded, pred.data(), prob.data(), 400), FS_OK);
    ASSERT_EQ(fs_dataset_labels(d, truth.data(), 400), FS_OK);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < 400; ++i) hit += pred[i] == truth[i];
    EXPECT_GE(hit, 396u) << family;

    const auto path = dir / (std::string(family) + ".json");
    ASSERT_EQ(fs_model_save(m, path.c_str()), FS_OK);
    fs_model* m2 = nullptr;
    ASSERT_EQ(fs_model_load(path.c_str(), &m2), FS_OK);
    std::vector<double> prob2(400);
    ASSERT_EQ(fs_model_predict(m2, d, nullptr, prob2.data(), 400), FS_OK);
    EXPECT_EQ(prob, prob2) << family;
    fs_model_destroy(m2);
    fs_model_destroy(m);
  }
  fs_model* bad = nullptr;
  EXPECT_EQ(fs_model_fit(d, "svm", 1, &bad), FS_ERR_USAGE);
  EXPECT_EQ(fs_dataset_load((dir / "missing.csv").c_str(), "custom", nullptr, &reloaded), FS_ERR_DATA);

  fs_dataset_destroy(reloaded);
  fs_dataset_destroy(d);
  fs_config_destroy(cfg);
  std::filesystem::remove_all(dir);
}
