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

// Runs the flowsieve executable and checks exit codes and outputs.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "test_util.hpp"

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args, const testutil::TempDir& dir) {
  const auto log = dir / "stdout.txt";
  const std::string cmd =
      std::string(FLOWSIEVE_CLI_PATH) + " " + args + " > '" + log.string() + "' 2> '" + (dir / "stderr.txt").string() + "'";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = testutil::read_file(log);
  return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, HelpVersionAndUsageErrors) {
  testutil::TempDir dir("cli");
  EXPECT_EQ(run("--help", dir).status, 0);
  EXPECT_EQ(run("--version", dir).status, 0);
  EXPECT_EQ(run("", dir).status, 1);
  EXPECT_EQ(run("frobnicate", dir).status, 1);
  EXPECT_EQ(run("select --seed 1", dir).status, 1);  // no data
  EXPECT_EQ(run("synth --seed 1", dir).status, 1);   // no --out
  EXPECT_EQ(run("synth --seed 1 --balance 0 --out " + q(dir / "x.csv"), dir).status, 1);
  EXPECT_EQ(run("select --seed 1 --data " + q(dir / "missing.csv"), dir).status, 2);
  EXPECT_EQ(run("report " + q(dir / "missing.json"), dir).status, 2);
}

TEST(Cli, SynthIsByteIdenticalAcrossRuns) {
  testutil::TempDir dir("cli");
  const std::string args = "synth --seed 11 --rows 300 --informative 2 --noise 3 --out ";
  ASSERT_EQ(run(args + q(dir / "a.csv"), dir).status, 0);
  ASSERT_EQ(run(args + q(dir / "b.csv"), dir).status, 0);
  const auto a = testutil::read_file(dir / "a.csv");
  EXPECT_EQ(a, testutil::read_file(dir / "b.csv"));
  EXPECT_EQ(a.rfind("informative_01,informative_02,noise_01", 0), 0u);
}

TEST(Cli, SelectBenchmarkAndReport) {
  testutil::TempDir dir("cli");
  ASSERT_EQ(run("synth --seed 2 --rows 400 --informative 2 --noise 4 --out " + q(dir / "d.csv"), dir).status, 0);
  const std::string data = " --data " + q(dir / "d.csv") + " --seed 4 --rfe-estimators 5";

  EXPECT_EQ(run("select" + data + " --k 7", dir).status, 1);  // k > feature count

  auto sel = run("select" + data + " --k 3", dir);
  ASSERT_EQ(sel.status, 0);
  EXPECT_EQ(sel.out.rfind("feature,percent\n", 0), 0u);
  EXPECT_NE(sel.out.find("selected: "), std::string::npos);

  testutil::write_file(dir / "run.conf", "k = 2\nrepeats = 1\nwarmup = 0\n");
  const auto out = dir / "bench";
  auto bench = run("benchmark --config " + q(dir / "run.conf") + data + " --no-grid --out " + q(out), dir);
  ASSERT_EQ(bench.status, 0) << testutil::read_file(dir / "stderr.txt");
  EXPECT_EQ(bench.out.rfind("Model", 0), 0u);
  const auto doc = nlohmann::json::parse(testutil::read_file(out / "report.json"));
  EXPECT_FALSE(doc.contains("grid_search"));
  EXPECT_EQ(doc.at("config").at("k"), 2);
  EXPECT_EQ(doc.at("benchmark").at("rows").size(), 6u);
  EXPECT_EQ(testutil::read_file(out / "benchmark.txt"), bench.out);

  auto shown = run("report " + q(out / "report.json"), dir);
  ASSERT_EQ(shown.status, 0);
  EXPECT_EQ(shown.out, bench.out);
  auto feats = run("report " + q(out / "report.json") + " --show features", dir);
  EXPECT_EQ(feats.out, testutil::read_file(out / "features.txt"));
}
