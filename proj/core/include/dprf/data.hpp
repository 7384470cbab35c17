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

#ifndef DPRF_DATA_HPP_
#define DPRF_DATA_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dprf/common.hpp"

namespace dprf {

enum class ColumnRole { kNumeric, kCategorical, kLabel, kGroup, kIgnore };

// Column-to-role assignment for CSV ingestion. Exactly one label column and
// at most one group column.
struct ColumnSchema {
  std::vector<std::pair<std::string, ColumnRole>> columns;

  void validate() const;
  // Parses "name:role,name:role,..." with roles numeric | categorical |
  // label | group | ignore.
  static ColumnSchema parse(const std::string& text);
};

struct RawTable {
  std::vector<std::string> numeric_names;
  Eigen::MatrixXd numeric;  // m x |numeric_names|
  std::vector<std::string> categorical_names;
  std::vector<std::vector<std::string>> categorical;  // one vector per column
  Eigen::VectorXd label;
  std::vector<std::string> group;  // empty when the schema has no group column

  Index rows() const { return label.size(); }
};

// Reads a UTF-8 comma-separated file with a header row.
RawTable load_tabular(const std::string& path, const ColumnSchema& schema);

// Concatenates tables with identical column structure; when group_labels is
// non-empty (one label per table) rows are tagged by source table, for
// datasets shipped as one file per group.
RawTable concat_tables(const std::vector<RawTable>& tables,
                       const std::vector<std::string>& group_labels = {});

struct MinMaxStats {
  std::string column;
  double min = 0.0;
  double max = 0.0;
  bool zero_range = false;  // constant column, mapped to 0 with a warning
};

// Everything needed to replay the training-set transforms on held-out data.
struct DataProvenance {
  bool one_hot = false;
  std::vector<std::pair<std::string, std::vector<std::string>>> one_hot_categories;
  bool min_max_features = false;
  std::vector<MinMaxStats> feature_minmax;
  bool per_group_normalize = false;
  std::map<std::string, std::vector<MinMaxStats>> per_group_minmax;
  bool min_max_label = false;
  MinMaxStats label_minmax;
  bool l2_label = false;
  double label_divisor = 1.0;
  std::vector<std::string> feature_names;  // expanded column order
  std::vector<std::string> warnings;
};

struct PreprocessOptions {
  bool one_hot = true;
  bool min_max = false;        // min-max scale numeric feature columns
  bool min_max_label = false;  // min-max scale the label column
  bool normalize_labels = false;  // divide y by ||y||_2
  bool per_group_normalize = false;  // numeric scaling per group, independently
};

struct Dataset {
  Eigen::MatrixXd x;  // m x d
  Eigen::VectorXd y;  // length m
  std::vector<std::string> groups;  // empty, or one tag per row
  DataProvenance provenance;

  Index rows() const { return y.size(); }
  Index cols() const { return x.cols(); }
  bool has_groups() const { return !groups.empty(); }
  // Group name -> row indices; a single group "all" when untagged.
  std::map<std::string, std::vector<Index>> group_indices() const;
};

// Applies one-hot encoding and the requested normalizations, recording every
// transform (with training-set statistics) in the returned provenance.
Dataset preprocess(const RawTable& table, const PreprocessOptions& options);

// Replays recorded transforms on new rows using the recorded statistics.
// Unseen categories map to an all-zero one-hot block with a warning.
Dataset apply_provenance(const RawTable& table, const DataProvenance& provenance);

enum class TestFunction { kF1, kF2 };

// Evaluates f1(x) = sqrt(1 + ||x||_2) or f2(x) = sum_i exp(-|x_i|).
double evaluate_test_function(TestFunction fn, const Eigen::VectorXd& x);

// x_j i.i.d. N(0, I_d) with y_j = f(x_j), optionally dividing y by its norm.
Dataset gen_synthetic(std::uint64_t seed, Index m, Index d, TestFunction fn,
                      bool normalize_labels);

// Grouped variant: group g draws x ~ input_scales[g] * N(0, I_d) and rows are
// tagged "g0", "g1", ...; used for fairness experiments where groups differ
// in input norm.
Dataset gen_synthetic_grouped(std::uint64_t seed,
                              const std::vector<Index>& group_sizes, Index d,
                              const std::vector<double>& input_scales,
                              TestFunction fn, bool normalize_labels);

struct PerGroupCounts {
  Index train_n = 0;
  Index test_n = 0;
};
struct PerGroupFraction {
  double train_fraction = 0.0;
};
using SplitStrategy = std::variant<PerGroupCounts, PerGroupFraction>;

// Disjoint train/test split sampled without replacement within each group.
std::pair<Dataset, Dataset> split(const Dataset& data, const SplitStrategy& strategy,
                                  std::uint64_t seed);

// Same split on a raw table, so preprocessing statistics can be fit on the
// training rows only and replayed on the held-out rows.
std::pair<RawTable, RawTable> split_table(const RawTable& table,
                                          const SplitStrategy& strategy,
                                          std::uint64_t seed);

}  // namespace dprf

#endif  // DPRF_DATA_HPP_
