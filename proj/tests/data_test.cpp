// Copyright 2026 The DPRF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dprf/data.hpp"

#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "dprf/rng.hpp"

namespace dprf {
namespace {

std::string write_temp_csv(const std::string& name, const std::string& content) {
  const std::string path = ::testing::TempDir() + "/" + name;
  std::ofstream file(path, std::ios::binary);
  file << content;
  return path;
}

const char* kToyCsv =
    "age,region,income,label,extra\n"
    "20,north,1.0,10,x\n"
    "30,south,2.0,20,x\n"
    "40,east,3.0,30,x\n"
    "50,west,4.0,40,x\n";

ColumnSchema toy_schema() {
  return ColumnSchema::parse(
      "age:numeric,region:categorical,income:numeric,label:label,extra:ignore");
}

TEST(TestFunctions, ValuesAtOrigin) {
  EXPECT_DOUBLE_EQ(evaluate_test_function(TestFunction::kF1, Eigen::VectorXd::Zero(5)), 1.0);
  EXPECT_DOUBLE_EQ(evaluate_test_function(TestFunction::kF2, Eigen::VectorXd::Zero(7)), 7.0);
}

TEST(GenSynthetic, NormalizationAndDeterminism) {
  const Dataset a = gen_synthetic(3, 100, 4, TestFunction::kF1, true);
  EXPECT_NEAR(a.y.norm(), 1.0, 1e-12);
  EXPECT_GT(a.provenance.label_divisor, 0.0);
  const Dataset b = gen_synthetic(3, 100, 4, TestFunction::kF1, true);
  EXPECT_TRUE(a.x == b.x);
  EXPECT_TRUE(a.y == b.y);
  const Dataset c = gen_synthetic(4, 100, 4, TestFunction::kF1, true);
  EXPECT_FALSE(a.x == c.x);
}

TEST(GenSynthetic, NormalizationCommutesWithPermutation) {
  const Dataset raw = gen_synthetic(5, 50, 3, TestFunction::kF2, false);
  Dataset reversed = raw;
  reversed.x = raw.x.colwise().reverse();
  reversed.y = raw.y.reverse();
  const double norm = raw.y.norm();
  const Eigen::VectorXd normalized_then_reversed = (raw.y / norm).reverse();
  const Eigen::VectorXd reversed_then_normalized = reversed.y / reversed.y.norm();
  EXPECT_LE((normalized_then_reversed - reversed_then_normalized).norm(), 1e-15);
}

TEST(GenSyntheticGrouped, GroupScalesApply) {
  const Dataset data =
      gen_synthetic_grouped(6, {200, 200}, 4, {1.0, 3.0}, TestFunction::kF1, false);
  const auto groups = data.group_indices();
  ASSERT_EQ(groups.size(), 2u);
  double small = 0.0;
  double large = 0.0;
  for (Index i : groups.at("g0")) small += data.x.row(i).squaredNorm();
  for (Index i : groups.at("g1")) large += data.x.row(i).squaredNorm();
  EXPECT_GT(large / 200.0, 5.0 * small / 200.0);
}

TEST(LoadTabular, ParsesColumnsAndOneHotCategories) {
  const std::string path = write_temp_csv("toy.csv", kToyCsv);
  const RawTable table = load_tabular(path, toy_schema());
  EXPECT_EQ(table.rows(), 4);
  ASSERT_EQ(table.numeric_names.size(), 2u);
  EXPECT_EQ(table.numeric_names[0], "age");
  EXPECT_DOUBLE_EQ(table.numeric(2, 0), 40.0);
  ASSERT_EQ(table.categorical_names.size(), 1u);

  const Dataset data = preprocess(table, PreprocessOptions{});
  // 2 numeric + 4 one-hot columns for the 4 region categories.
  EXPECT_EQ(data.cols(), 6);
  for (Index r = 0; r < data.rows(); ++r) {
    EXPECT_DOUBLE_EQ(data.x.row(r).segment(2, 4).sum(), 1.0);
  }
}

TEST(LoadTabular, MissingFileAndSchemaMismatch) {
  EXPECT_THROW(load_tabular("/nonexistent/file.csv", toy_schema()), std::invalid_argument);
  const std::string path = write_temp_csv("toy2.csv", kToyCsv);
  try {
    load_tabular(path, ColumnSchema::parse("age:numeric,bogus:numeric,label:label"));
    FAIL() << "expected schema error";
  } catch (const std::invalid_argument& error) {
    const std::string message = error.what();
    EXPECT_NE(message.find("bogus"), std::string::npos);
    EXPECT_NE(message.find("region"), std::string::npos);  // header echoed back
  }
}

TEST(LoadTabular, MalformedNumericCellNamesRowAndColumn) {
  const std::string path = write_temp_csv(
      "bad.csv", "a,label\n1.0,2.0\noops,3.0\n");
  try {
    load_tabular(path, ColumnSchema::parse("a:numeric,label:label"));
    FAIL() << "expected parse error";
  } catch (const std::invalid_argument& error) {
    const std::string message = error.what();
    EXPECT_NE(message.find("oops"), std::string::npos);
    EXPECT_NE(message.find("row 2"), std::string::npos);
    EXPECT_NE(message.find("'a'"), std::string::npos);
  }
}

TEST(ColumnSchema, ValidatesLabelAndGroupCounts) {
  EXPECT_THROW(ColumnSchema::parse("a:numeric,b:numeric"), std::invalid_argument);
  EXPECT_THROW(ColumnSchema::parse("a:label,b:label"), std::invalid_argument);
  EXPECT_THROW(ColumnSchema::parse("a:label,b:group,c:group"), std::invalid_argument);
  EXPECT_THROW(ColumnSchema::parse("a:wat,b:label"), std::invalid_argument);
  EXPECT_NO_THROW(ColumnSchema::parse("a:label,b:group,c:numeric"));
}

TEST(Preprocess, MinMaxEndpointValues) {
  const std::string path = write_temp_csv(
      "minmax.csv", "v,label\n2,1\n4,1\n6,1\n");
  const RawTable table = load_tabular(path, ColumnSchema::parse("v:numeric,label:label"));
  PreprocessOptions options;
  options.min_max = true;
  const Dataset data = preprocess(table, options);
  EXPECT_DOUBLE_EQ(data.x(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(data.x(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(data.x(2, 0), 1.0);
}

TEST(Preprocess, ConstantColumnMapsToZeroWithWarning) {
  const std::string path = write_temp_csv(
      "const.csv", "v,label\n5,1\n5,2\n5,3\n");
  const RawTable table = load_tabular(path, ColumnSchema::parse("v:numeric,label:label"));
  PreprocessOptions options;
  options.min_max = true;
  const Dataset data = preprocess(table, options);
  EXPECT_DOUBLE_EQ(data.x.col(0).cwiseAbs().maxCoeff(), 0.0);
  ASSERT_FALSE(data.provenance.warnings.empty());
  EXPECT_NE(data.provenance.warnings[0].find("zero range"), std::string::npos);
}

TEST(Preprocess, PerGroupWithIdenticalGroupsMatchesGlobal) {
  const std::string csv =
      "v,label,g\n1,1,a\n2,1,a\n3,1,a\n1,1,b\n2,1,b\n3,1,b\n";
  const std::string path = write_temp_csv("pergroup.csv", csv);
  const ColumnSchema schema = ColumnSchema::parse("v:numeric,label:label,g:group");
  const RawTable table = load_tabular(path, schema);

  PreprocessOptions global;
  global.min_max = true;
  PreprocessOptions per_group;
  per_group.per_group_normalize = true;
  const Dataset a = preprocess(table, global);
  const Dataset b = preprocess(table, per_group);
  EXPECT_LE((a.x - b.x).norm(), 1e-15);
}

TEST(Preprocess, LabelNormalizationRecordsDivisor) {
  const std::string path = write_temp_csv("label.csv", "v,label\n1,3\n2,4\n");
  const RawTable table = load_tabular(path, ColumnSchema::parse("v:numeric,label:label"));
  PreprocessOptions options;
  options.normalize_labels = true;
  const Dataset data = preprocess(table, options);
  EXPECT_NEAR(data.y.norm(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(data.provenance.label_divisor, 5.0);
}

TEST(Preprocess, ReplayIsBitIdentical) {
  const std::string path = write_temp_csv("replay.csv", kToyCsv);
  const RawTable table = load_tabular(path, toy_schema());
  PreprocessOptions options;
  options.min_max = true;
  options.min_max_label = true;
  options.normalize_labels = true;
  const Dataset data = preprocess(table, options);
  const Dataset replayed = apply_provenance(table, data.provenance);
  EXPECT_TRUE(data.x == replayed.x);
  EXPECT_TRUE(data.y == replayed.y);
}

TEST(Preprocess, ReplayExtrapolatesWithoutClipping) {
  const std::string train_path = write_temp_csv("train.csv", "v,label\n0,1\n10,1\n");
  const RawTable train =
      load_tabular(train_path, ColumnSchema::parse("v:numeric,label:label"));
  PreprocessOptions options;
  options.min_max = true;
  const Dataset fitted = preprocess(train, options);

  const std::string test_path = write_temp_csv("test.csv", "v,label\n20,1\n-10,1\n");
  const RawTable test = load_tabular(test_path, ColumnSchema::parse("v:numeric,label:label"));
  const Dataset replayed = apply_provenance(test, fitted.provenance);
  EXPECT_DOUBLE_EQ(replayed.x(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(replayed.x(1, 0), -1.0);
}

TEST(Preprocess, UnseenCategoryMapsToZeroBlockWithWarning) {
  const std::string train_path =
      write_temp_csv("cat_train.csv", "c,label\nred,1\nblue,1\n");
  const ColumnSchema schema = ColumnSchema::parse("c:categorical,label:label");
  const RawTable train = load_tabular(train_path, schema);
  const Dataset fitted = preprocess(train, PreprocessOptions{});

  const std::string test_path = write_temp_csv("cat_test.csv", "c,label\ngreen,1\n");
  const RawTable test = load_tabular(test_path, schema);
  const Dataset replayed = apply_provenance(test, fitted.provenance);
  EXPECT_DOUBLE_EQ(replayed.x.row(0).cwiseAbs().sum(), 0.0);
  bool warned = false;
  for (const auto& w : replayed.provenance.warnings) {
    if (w.find("green") != std::string::npos) warned = true;
  }
  EXPECT_TRUE(warned);
}

TEST(Split, PerGroupCountsProduceRequestedSizes) {
  const Dataset data =
      gen_synthetic_grouped(8, {40, 60}, 3, {1.0, 1.0}, TestFunction::kF1, false);
  const auto [train, test] = split(data, PerGroupCounts{10, 5}, 42);
  EXPECT_EQ(train.rows(), 20);
  EXPECT_EQ(test.rows(), 10);
  const auto train_groups = train.group_indices();
  EXPECT_EQ(train_groups.at("g0").size(), 10u);
  EXPECT_EQ(train_groups.at("g1").size(), 10u);
}

TEST(Split, PerGroupFractionUsesFloor) {
  const Dataset data =
      gen_synthetic_grouped(9, {25, 15}, 2, {1.0, 1.0}, TestFunction::kF1, false);
  const auto [train, test] = split(data, PerGroupFraction{0.9}, 1);
  // floor(0.9*25) + floor(0.9*15) = 22 + 13.
  EXPECT_EQ(train.rows(), 35);
  EXPECT_EQ(test.rows(), 5);
}

TEST(Split, DisjointAndExhaustive) {
  const Dataset data = gen_synthetic(10, 50, 3, TestFunction::kF1, true);
  const auto [train, test] = split(data, PerGroupFraction{0.8}, 7);
  EXPECT_EQ(train.rows() + test.rows(), data.rows());
  // Row identity via labels: every source label appears exactly once.
  std::vector<double> combined;
  for (Index i = 0; i < train.rows(); ++i) combined.push_back(train.y[i]);
  for (Index i = 0; i < test.rows(); ++i) combined.push_back(test.y[i]);
  std::vector<double> original(data.y.data(), data.y.data() + data.rows());
  std::sort(combined.begin(), combined.end());
  std::sort(original.begin(), original.end());
  EXPECT_TRUE(combined == original);
}

TEST(Split, InsufficientGroupNamesTheGroup) {
  const Dataset data =
      gen_synthetic_grouped(11, {5, 50}, 2, {1.0, 1.0}, TestFunction::kF1, false);
  try {
    split(data, PerGroupCounts{10, 5}, 3);
    FAIL() << "expected size error";
  } catch (const std::invalid_argument& error) {
    EXPECT_NE(std::string(error.what()).find("g0"), std::string::npos);
  }
}

TEST(Split, DeterministicPerSeed) {
  const Dataset data = gen_synthetic(12, 60, 2, TestFunction::kF2, false);
  const auto [a_train, a_test] = split(data, PerGroupFraction{0.5}, 5);
  const auto [b_train, b_test] = split(data, PerGroupFraction{0.5}, 5);
  EXPECT_TRUE(a_train.y == b_train.y);
  const auto [c_train, c_test] = split(data, PerGroupFraction{0.5}, 6);
  EXPECT_FALSE(a_train.y == c_train.y);
}

TEST(ConcatTables, TagsRowsByFile) {
  const std::string path_a = write_temp_csv("wa.csv", "v,label\n1,1\n2,2\n");
  const std::string path_b = write_temp_csv("wb.csv", "v,label\n3,3\n");
  const ColumnSchema schema = ColumnSchema::parse("v:numeric,label:label");
  const RawTable merged = concat_tables(
      {load_tabular(path_a, schema), load_tabular(path_b, schema)}, {"red", "white"});
  EXPECT_EQ(merged.rows(), 3);
  ASSERT_EQ(merged.group.size(), 3u);
  EXPECT_EQ(merged.group[0], "red");
  EXPECT_EQ(merged.group[2], "white");
}

}  // namespace
}  // namespace dprf
