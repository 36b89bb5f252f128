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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "flowsieve/dataset.hpp"
#include "flowsieve/keyvalue.hpp"
#include "test_util.hpp"

namespace fd = flowsieve::flowdata;
using flowsieve::ErrorKind;

namespace {

fd::Dataset load(const std::string& text, const fd::SchemaAdapter& a = fd::SchemaAdapter::custom()) {
  return fd::load_table_text(text, a, "test");
}

std::size_t count_label(const std::vector<std::size_t>& rows, const fd::Dataset& d, fd::Label l) {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [&](std::size_t r) { return d.labels()[r] == l; }));
}

}  // namespace

TEST(KeyValue, ParsesCommentsQuotesAndRejectsDuplicates) {
  const auto doc = flowsieve::parse_key_values("# comment\n; other\nk = 8\nname = \"a b\"\n\n", "t");
  ASSERT_EQ(doc.entries.size(), 2u);
  EXPECT_EQ(*doc.find("k"), "8");
  EXPECT_EQ(*doc.find("name"), "a b");
  EXPECT_ERROR_KIND(flowsieve::parse_key_values("k = 1\nk = 2\n", "t"), ErrorKind::kData);
  EXPECT_ERROR_KIND(flowsieve::parse_key_values("no equals sign\n", "t"), ErrorKind::kData);
}

TEST(Dataset, ConstructorValidatesShape) {
  EXPECT_ERROR_KIND(fd::Dataset({"a"}, {{1.0, 2.0}}, {0}), ErrorKind::kData);
  EXPECT_ERROR_KIND(fd::Dataset({"a", "a"}, {{1.0}, {2.0}}, {0}), ErrorKind::kData);
  EXPECT_ERROR_KIND(fd::Dataset({"a"}, {{1.0}}, {2}), ErrorKind::kData);
  const fd::Dataset d({"a", "b"}, {{1.0, 2.0}, {3.0, 4.0}}, {0, 1});
  EXPECT_EQ(d.row_count(), 2u);
  EXPECT_EQ(d.feature_index("b"), 1u);
  EXPECT_ERROR_KIND(d.feature_index("zzz"), ErrorKind::kUsage);
  EXPECT_TRUE(d.has_both_classes());
}

TEST(LoadTable, MapsColumnsAndBenignValues) {
  fd::SchemaAdapter a;
  a.column_map = {{"sbytes", "Fwd. Bytes"}};
  a.benign_values = {"Benign"};
  const auto d = load("sbytes,label\n10,Benign\n20,Malicious\n30,Benign\n40,DDoS\n", a);
  ASSERT_EQ(d.feature_count(), 1u);
  EXPECT_EQ(d.feature_names()[0], "Fwd. Bytes");
  EXPECT_EQ(std::vector<fd::Label>(d.labels().begin(), d.labels().end()), (std::vector<fd::Label>{0, 1, 0, 1}));
}

TEST(LoadTable, ContractErrors) {
  EXPECT_ERROR_KIND(load("a,b\n1,2\n"), ErrorKind::kData);  // no label column
  EXPECT_ERROR_KIND(load(""), ErrorKind::kData);
  EXPECT_ERROR_KIND(load("a,label\n"), ErrorKind::kData);
  fd::SchemaAdapter mapped;
  mapped.column_map = {{"missing", "Fwd. Bytes"}};
  EXPECT_ERROR_KIND(load("a,label\n1,0\n", mapped), ErrorKind::kData);
  fd::SchemaAdapter exhaustive;
  exhaustive.benign_values = {"Benign"};
  exhaustive.malicious_values = {"Malicious"};
  exhaustive.exhaustive_labels = true;
  EXPECT_ERROR_KIND(load("a,label\n1,Benign\n2,Unknown\n", exhaustive), ErrorKind::kData);
  EXPECT_ERROR_KIND(load("a,label\n1,0\n2,7\n"), ErrorKind::kData);
}

TEST(LoadTable, FirstAppearanceEncodingIsRecorded) {
  const auto d = load("proto,label\ntcp,0\nudp,1\ntcp,1\n");
  const auto col = d.column(0);
  EXPECT_EQ(std::vector<double>(col.begin(), col.end()), (std::vector<double>{0, 1, 0}));
  ASSERT_EQ(d.load_report().encodings.size(), 1u);
  EXPECT_EQ(d.load_report().encodings[0].feature, "proto");
  EXPECT_EQ(d.load_report().encodings[0].categories, (std::vector<std::string>{"tcp", "udp"}));
}

TEST(LoadTable, MissingImputedAndCorruptRowsDropped) {
  const auto d = load("a,b,label\n1,-,0\n2,5,1\nNaN,6,0\nxyz,7,1\n3,8,1\n4,9\n");
  EXPECT_EQ(d.row_count(), 4u);
  EXPECT_EQ(d.load_report().dropped_rows, 2u);  // corrupt "xyz" and the short row
  const auto a = d.column(0);
  const auto b = d.column(1);
  EXPECT_EQ(std::vector<double>(a.begin(), a.end()), (std::vector<double>{1, 2, 0, 3}));
  EXPECT_EQ(std::vector<double>(b.begin(), b.end()), (std::vector<double>{0, 5, 6, 8}));
  ASSERT_EQ(d.load_report().missing.size(), 2u);
  EXPECT_EQ(d.load_report().missing[0].count, 1u);
}

TEST(LoadTable, TabDelimiterHexAndQuotedFields) {
  const auto d = load("\"a\"\tport\tlabel\n1.5\t0x50\t0\n2.5\t0x1bb\t1\n");
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"a", "port"}));
  EXPECT_EQ(d.column(1)[0], 80.0);
  EXPECT_EQ(d.column(1)[1], 443.0);
  const auto q = load("name,label\n\"x,y\",0\n\"z\",1\n");
  EXPECT_EQ(q.load_report().encodings[0].categories, (std::vector<std::string>{"x,y", "z"}));
}

TEST(LoadTable, DropColumnsRemoved) {
  fd::SchemaAdapter a;
  a.drop_columns = {"id"};
  const auto d = load("id,a,label\n7,1,0\n8,2,1\n", a);
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"a"}));
}

TEST(Canonical, RoundTripReloadsEqual) {
  fd::SyntheticSpec spec;
  spec.n_rows = 200;
  spec.n_informative = 2;
  spec.n_noise = 3;
  spec.seed = 11;
  const auto d = fd::generate_synthetic(spec);
  const auto reloaded = load(fd::to_canonical_csv(d));
  EXPECT_TRUE(reloaded == d);

  testutil::TempDir dir("canon");
  fd::write_canonical(d, dir / "x.canonical.csv");
  EXPECT_TRUE(fd::load_table(dir / "x.canonical.csv", fd::SchemaAdapter::custom()) == d);
}

TEST(Canonical, RejectsUnrepresentableNames) {
  const fd::Dataset bad({"a,b"}, {{1.0, 2.0}}, {0, 1});
  EXPECT_ERROR_KIND(fd::to_canonical_csv(bad), ErrorKind::kData);
  const fd::Dataset label_named({"label"}, {{1.0, 2.0}}, {0, 1});
  EXPECT_ERROR_KIND(fd::to_canonical_csv(label_named), ErrorKind::kData);
}

TEST(Adapters, ShippedFilesParseAndUseVocabulary) {
  const auto vocab = fd::canonical_vocabulary();
  for (const char* id : {"bot-iot", "iot-23", "ton-iot", "custom"}) {
    SCOPED_TRACE(id);
    const auto a = fd::resolve_adapter(id, fd::default_adapter_dir());
    EXPECT_EQ(fd::dataset_id_name(a.dataset_id), id);
    for (const auto& [source, target] : a.column_map) {
      EXPECT_NE(std::find(vocab.begin(), vocab.end(), target), vocab.end()) << target;
    }
  }
  EXPECT_ERROR_KIND(fd::resolve_adapter("nope", fd::default_adapter_dir()), ErrorKind::kUsage);
}

TEST(Adapters, BotIotAdapterMapsARawHeader) {
  const auto a = fd::resolve_adapter("bot-iot", fd::default_adapter_dir());
  const std::string text =
      "pkSeqID,stime,flgs,flgs_number,proto,proto_number,saddr,sport,daddr,dport,pkts,bytes,state,state_number,"
      "ltime,seq,dur,mean,stddev,sum,min,max,spkts,dpkts,sbytes,dbytes,rate,srate,drate,attack,category,"
      "subcategory\n"
      "1,0,e,1,udp,3,1.1.1.1,1,2.2.2.2,80,4,400,CON,1,1,1,0.5,0.1,0,0.1,0,0.2,2,2,200,200,8.0,4.0,4.0,1,DDoS,UDP\n"
      "2,0,e s,2,tcp,1,1.1.1.1,2,2.2.2.2,443,6,900,RST,2,1,2,0.7,0.2,0,0.2,0,0.4,3,3,450,450,9.0,4.5,4.5,0,Normal,"
      "Normal\n";
  const auto d = load(text, a);
  EXPECT_EQ(d.row_count(), 2u);
  EXPECT_TRUE(d.has_feature("Packets Per Second"));
  EXPECT_TRUE(d.has_feature("Total Bytes"));
  EXPECT_TRUE(d.has_feature("Flags"));
  EXPECT_FALSE(d.has_feature("category"));
  EXPECT_FALSE(d.has_feature("saddr"));
  EXPECT_EQ(d.labels()[0], fd::kMalicious);
  EXPECT_EQ(d.labels()[1], fd::kBenign);
}

TEST(Synthetic, ShapeNamesAndBalance) {
  fd::SyntheticSpec spec;
  spec.n_rows = 1000;
  spec.n_informative = 2;
  spec.n_noise = 6;
  spec.class_balance = 0.3;
  spec.seed = 7;
  const auto d = fd::generate_synthetic(spec);
  EXPECT_EQ(d.feature_count(), 8u);
  EXPECT_EQ(d.feature_names()[0], "informative_01");
  EXPECT_EQ(d.feature_names()[2], "noise_01");
  EXPECT_NEAR(static_cast<double>(d.count_label(fd::kMalicious)), 300.0, 1.0);
  EXPECT_TRUE(fd::generate_synthetic(spec) == d);
  spec.seed = 8;
  EXPECT_FALSE(fd::generate_synthetic(spec) == d);
}

TEST(Synthetic, InformativeColumnsAreShifted) {
  fd::SyntheticSpec spec;
  spec.seed = 3;
  const auto d = fd::generate_synthetic(spec);
  for (std::size_t j = 0; j < d.feature_count(); ++j) {
    double s[2] = {0, 0}, n[2] = {0, 0};
    for (std::size_t r = 0; r < d.row_count(); ++r) {
      s[d.labels()[r]] += d.column(j)[r];
      n[d.labels()[r]] += 1;
    }
    const double gap = s[1] / n[1] - s[0] / n[0];
    if (j < spec.n_informative) {
      EXPECT_GT(gap, 2.0);
    } else {
      EXPECT_LT(std::abs(gap), 0.25);
    }
  }
}

TEST(Synthetic, DegenerateSpecsRejected) {
  fd::SyntheticSpec spec;
  spec.class_balance = 0.0;
  EXPECT_ERROR_KIND(fd::generate_synthetic(spec), ErrorKind::kUsage);
  spec.class_balance = 1.0;
  EXPECT_ERROR_KIND(fd::generate_synthetic(spec), ErrorKind::kUsage);
  spec.class_balance = 0.5;
  spec.n_rows = 1;
  EXPECT_ERROR_KIND(fd::generate_synthetic(spec), ErrorKind::kUsage);
  spec.n_rows = 10;
  spec.n_informative = 0;
  EXPECT_ERROR_KIND(fd::generate_synthetic(spec), ErrorKind::kUsage);
}

TEST(KFold, TenRowsFiveFoldsOneOfEachClass) {
  const auto d = testutil::make_dataset({{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}}, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  const auto folds = fd::stratified_kfold(d, 5, 42);
  ASSERT_EQ(folds.size(), 5u);
  for (const auto& f : folds) {
    EXPECT_EQ(count_label(f.test_rows, d, 0), 1u);
    EXPECT_EQ(count_label(f.test_rows, d, 1), 1u);
  }
  EXPECT_EQ(fd::stratified_kfold(d, 5, 42), folds);
}

TEST(KFold, CoverageDisjointnessAndStratification) {
  fd::SyntheticSpec spec;
  spec.n_rows = 203;
  spec.seed = 5;
  const auto d = fd::generate_synthetic(spec);
  const auto folds = fd::stratified_kfold(d, 5, 9);
  std::vector<std::size_t> all;
  const double n0 = static_cast<double>(d.count_label(0)), n1 = static_cast<double>(d.count_label(1));
  for (const auto& f : folds) {
    all.insert(all.end(), f.test_rows.begin(), f.test_rows.end());
    std::set<std::size_t> train(f.train_rows.begin(), f.train_rows.end());
    for (const auto r : f.test_rows) EXPECT_EQ(train.count(r), 0u);
    EXPECT_EQ(f.train_rows.size() + f.test_rows.size(), d.row_count());
    EXPECT_LE(std::abs(static_cast<double>(count_label(f.test_rows, d, 0)) - n0 / 5), 1.0);
    EXPECT_LE(std::abs(static_cast<double>(count_label(f.test_rows, d, 1)) - n1 / 5), 1.0);
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(d.row_count());
  std::iota(expected.begin(), expected.end(), std::size_t{0});
  EXPECT_EQ(all, expected);
}

TEST(KFold, Preconditions) {
  const auto benign_only = testutil::make_dataset({{1, 2, 3, 4}}, {0, 0, 0, 0});
  EXPECT_ERROR_KIND(fd::stratified_kfold(benign_only, 2, 1), ErrorKind::kData);
  EXPECT_ERROR_KIND(fd::stratified_kfold(benign_only, 1, 1), ErrorKind::kUsage);
}

TEST(Holdout, CountsAndStratification) {
  std::vector<double> x(100);
  std::vector<fd::Label> y(100);
  for (std::size_t i = 0; i < 100; ++i) {
    x[i] = static_cast<double>(i);
    y[i] = i < 70 ? 0 : 1;
  }
  const auto d = testutil::make_dataset({x}, y);
  const auto h = fd::holdout_indices(d, 0.2, 1);
  EXPECT_EQ(h.train_rows.size(), 80u);
  EXPECT_EQ(h.test_rows.size(), 20u);
  EXPECT_EQ(count_label(h.test_rows, d, 0), 14u);
  EXPECT_EQ(count_label(h.test_rows, d, 1), 6u);
  const auto [train, test] = fd::holdout_split(d, 0.2, 1);
  EXPECT_EQ(train.row_count(), 80u);
  EXPECT_EQ(test.row_count(), 20u);
  EXPECT_EQ(fd::holdout_indices(d, 0.2, 1).test_rows, h.test_rows);
}

TEST(Holdout, EmptySideIsAnError) {
  const auto d = testutil::make_dataset({{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}}, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  EXPECT_ERROR_KIND(fd::holdout_indices(d, 0.999, 1), ErrorKind::kUsage);
  EXPECT_ERROR_KIND(fd::holdout_indices(d, 0.0, 1), ErrorKind::kUsage);
}
