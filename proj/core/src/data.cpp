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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dprf/rng.hpp"

namespace dprf {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
      field.push_back(ch);
    } else if (ch == ',' && !quoted) {
      fields.push_back(strip_quotes(trim(field)));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(strip_quotes(trim(field)));
  return fields;
}

double parse_numeric_cell(const std::string& cell, Index row,
                          const std::string& column) {
  try {
    std::size_t consumed = 0;
    const double value = std::stod(cell, &consumed);
    if (consumed != cell.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument("load_tabular: cannot parse numeric cell '" + cell +
                                "' at row " + std::to_string(row) + ", column '" +
                                column + "'");
  }
}

const char* role_name(ColumnRole role) {
  switch (role) {
    case ColumnRole::kNumeric: return "numeric";
    case ColumnRole::kCategorical: return "categorical";
    case ColumnRole::kLabel: return "label";
    case ColumnRole::kGroup: return "group";
    case ColumnRole::kIgnore: return "ignore";
  }
  return "?";
}

}  // namespace

void ColumnSchema::validate() const {
  int labels = 0;
  int groups = 0;
  for (const auto& [name, role] : columns) {
    if (role == ColumnRole::kLabel) ++labels;
    if (role == ColumnRole::kGroup) ++groups;
  }
  if (labels != 1) {
    throw std::invalid_argument("ColumnSchema: exactly one label column required, got " +
                                std::to_string(labels));
  }
  if (groups > 1) {
    throw std::invalid_argument("ColumnSchema: at most one group column allowed");
  }
}

ColumnSchema ColumnSchema::parse(const std::string& text) {
  ColumnSchema schema;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.rfind(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("ColumnSchema: expected name:role, got '" + item + "'");
    }
    const std::string name = trim(item.substr(0, colon));
    const std::string role = trim(item.substr(colon + 1));
    ColumnRole parsed;
    if (role == "numeric") parsed = ColumnRole::kNumeric;
    else if (role == "categorical") parsed = ColumnRole::kCategorical;
    else if (role == "label") parsed = ColumnRole::kLabel;
    else if (role == "group") parsed = ColumnRole::kGroup;
    else if (role == "ignore") parsed = ColumnRole::kIgnore;
    else {
      throw std::invalid_argument("ColumnSchema: unknown role '" + role + "' for column '" +
                                  name + "'");
    }
    schema.columns.emplace_back(name, parsed);
  }
  schema.validate();
  return schema;
}

RawTable load_tabular(const std::string& path, const ColumnSchema& schema) {
  schema.validate();
  std::ifstream file(path);
  if (!file) {
    throw std::invalid_argument("load_tabular: cannot open '" + path + "'");
  }

  std::string line;
  if (!std::getline(file, line)) {
    throw std::invalid_argument("load_tabular: '" + path + "' is empty");
  }
  const std::vector<std::string> header = split_csv_line(line);

  // Resolve schema columns against the header.
  std::vector<std::pair<std::size_t, ColumnRole>> positions;
  std::vector<std::string> missing;
  for (const auto& [name, role] : schema.columns) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      missing.push_back(name + ":" + role_name(role));
      continue;
    }
    positions.emplace_back(static_cast<std::size_t>(it - header.begin()), role);
  }
  if (!missing.empty()) {
    std::string header_list;
    for (const auto& h : header) header_list += (header_list.empty() ? "" : ",") + h;
    std::string missing_list;
    for (const auto& m : missing) missing_list += (missing_list.empty() ? "" : ",") + m;
    throw std::invalid_argument("load_tabular: schema columns [" + missing_list +
                                "] not found in header [" + header_list + "]");
  }

  RawTable table;
  std::vector<std::vector<double>> numeric_cols;
  std::vector<double> label_col;
  for (const auto& [name, role] : schema.columns) {
    if (role == ColumnRole::kNumeric) {
      table.numeric_names.push_back(name);
      numeric_cols.emplace_back();
    } else if (role == ColumnRole::kCategorical) {
      table.categorical_names.push_back(name);
      table.categorical.emplace_back();
    }
  }

  Index row = 0;
  while (std::getline(file, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("load_tabular: row " + std::to_string(row + 1) +
                                  " has " + std::to_string(fields.size()) +
                                  " fields, header has " + std::to_string(header.size()));
    }
    std::size_t numeric_i = 0;
    std::size_t categorical_i = 0;
    for (const auto& [pos, role] : positions) {
      const std::string& cell = fields[pos];
      switch (role) {
        case ColumnRole::kNumeric:
          numeric_cols[numeric_i++].push_back(
              parse_numeric_cell(cell, row + 1, header[pos]));
          break;
        case ColumnRole::kCategorical:
          table.categorical[categorical_i++].push_back(cell);
          break;
        case ColumnRole::kLabel:
          label_col.push_back(parse_numeric_cell(cell, row + 1, header[pos]));
          break;
        case ColumnRole::kGroup:
          table.group.push_back(cell);
          break;
        case ColumnRole::kIgnore:
          break;
      }
    }
    ++row;
  }

  table.numeric.resize(row, static_cast<Index>(numeric_cols.size()));
  for (std::size_t c = 0; c < numeric_cols.size(); ++c) {
    for (Index r = 0; r < row; ++r) table.numeric(r, static_cast<Index>(c)) = numeric_cols[c][static_cast<std::size_t>(r)];
  }
  table.label = Eigen::Map<Eigen::VectorXd>(label_col.data(), static_cast<Index>(label_col.size()));
  return table;
}

RawTable concat_tables(const std::vector<RawTable>& tables,
                       const std::vector<std::string>& group_labels) {
  if (tables.empty()) throw std::invalid_argument("concat_tables: no tables");
  if (!group_labels.empty() && group_labels.size() != tables.size()) {
    throw std::invalid_argument("concat_tables: one group label per table required");
  }
  const RawTable& first = tables.front();
  Index total = 0;
  for (const auto& t : tables) {
    if (t.numeric_names != first.numeric_names ||
        t.categorical_names != first.categorical_names) {
      throw std::invalid_argument("concat_tables: tables have different columns");
    }
    if (!group_labels.empty() && !t.group.empty()) {
      throw std::invalid_argument(
          "concat_tables: cannot tag by file, tables already carry a group column");
    }
    total += t.rows();
  }

  RawTable out;
  out.numeric_names = first.numeric_names;
  out.categorical_names = first.categorical_names;
  out.numeric.resize(total, first.numeric.cols());
  out.label.resize(total);
  out.categorical.resize(first.categorical_names.size());
  Index offset = 0;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const RawTable& table = tables[t];
    out.numeric.middleRows(offset, table.rows()) = table.numeric;
    out.label.segment(offset, table.rows()) = table.label;
    for (std::size_t c = 0; c < table.categorical.size(); ++c) {
      out.categorical[c].insert(out.categorical[c].end(), table.categorical[c].begin(),
                                table.categorical[c].end());
    }
    for (Index r = 0; r < table.rows(); ++r) {
      if (!group_labels.empty()) {
        out.group.push_back(group_labels[t]);
      } else if (!table.group.empty()) {
        out.group.push_back(table.group[static_cast<std::size_t>(r)]);
      }
    }
    offset += table.rows();
  }
  return out;
}

std::map<std::string, std::vector<Index>> Dataset::group_indices() const {
  std::map<std::string, std::vector<Index>> out;
  if (!has_groups()) {
    std::vector<Index> all(static_cast<std::size_t>(rows()));
    std::iota(all.begin(), all.end(), Index{0});
    out.emplace("all", std::move(all));
    return out;
  }
  for (Index i = 0; i < rows(); ++i) out[groups[static_cast<std::size_t>(i)]].push_back(i);
  return out;
}

namespace {

std::vector<std::string> ordered_categories(const std::vector<std::string>& column) {
  std::vector<std::string> cats;
  for (const auto& v : column) {
    if (std::find(cats.begin(), cats.end(), v) == cats.end()) cats.push_back(v);
  }
  return cats;
}

MinMaxStats column_stats(const std::string& name, const Eigen::VectorXd& values) {
  MinMaxStats stats;
  stats.column = name;
  stats.min = values.minCoeff();
  stats.max = values.maxCoeff();
  stats.zero_range = stats.max == stats.min;
  return stats;
}

double apply_minmax(double value, const MinMaxStats& stats) {
  if (stats.zero_range) return 0.0;
  return (value - stats.min) / (stats.max - stats.min);
}

// Assembles the feature matrix: numeric columns first (schema order), then
// one one-hot block per categorical column.
Eigen::MatrixXd assemble_features(const RawTable& table, const DataProvenance& prov,
                                  std::vector<std::string>* warnings) {
  const Index m = table.rows();
  Index width = table.numeric.cols();
  if (prov.one_hot) {
    for (const auto& [name, cats] : prov.one_hot_categories) {
      width += static_cast<Index>(cats.size());
    }
  } else if (!table.categorical_names.empty()) {
    throw std::invalid_argument(
        "preprocess: categorical columns present but one_hot disabled");
  }

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, width);
  x.leftCols(table.numeric.cols()) = table.numeric;

  if (prov.one_hot) {
    Index offset = table.numeric.cols();
    for (std::size_t c = 0; c < table.categorical_names.size(); ++c) {
      const auto& cats = prov.one_hot_categories[c].second;
      for (Index r = 0; r < m; ++r) {
        const std::string& value = table.categorical[c][static_cast<std::size_t>(r)];
        const auto it = std::find(cats.begin(), cats.end(), value);
        if (it == cats.end()) {
          warnings->push_back("unseen category '" + value + "' in column '" +
                              table.categorical_names[c] + "' mapped to zero block");
          continue;
        }
        x(r, offset + static_cast<Index>(it - cats.begin())) = 1.0;
      }
      offset += static_cast<Index>(cats.size());
    }
  }
  return x;
}

void scale_numeric_columns(Eigen::MatrixXd* x, const RawTable& table,
                           const DataProvenance& prov,
                           std::vector<std::string>* warnings) {
  const Index m = table.rows();
  if (prov.per_group_normalize) {
    for (Index r = 0; r < m; ++r) {
      const std::string& g = table.group[static_cast<std::size_t>(r)];
      const auto it = prov.per_group_minmax.find(g);
      const std::vector<MinMaxStats>* stats = nullptr;
      if (it != prov.per_group_minmax.end()) {
        stats = &it->second;
      } else {
        stats = &prov.feature_minmax;
        warnings->push_back("group '" + g +
                            "' has no recorded scaling; using global statistics");
      }
      for (Index c = 0; c < table.numeric.cols(); ++c) {
        (*x)(r, c) = apply_minmax(table.numeric(r, c), (*stats)[static_cast<std::size_t>(c)]);
      }
    }
  } else if (prov.min_max_features) {
    for (Index c = 0; c < table.numeric.cols(); ++c) {
      const MinMaxStats& stats = prov.feature_minmax[static_cast<std::size_t>(c)];
      for (Index r = 0; r < m; ++r) (*x)(r, c) = apply_minmax(table.numeric(r, c), stats);
    }
  }
}

Eigen::VectorXd transform_label(const RawTable& table, const DataProvenance& prov) {
  Eigen::VectorXd y = table.label;
  if (prov.min_max_label) {
    for (Index i = 0; i < y.size(); ++i) y[i] = apply_minmax(y[i], prov.label_minmax);
  }
  if (prov.l2_label) y /= prov.label_divisor;
  return y;
}

}  // namespace

Dataset preprocess(const RawTable& table, const PreprocessOptions& options) {
  if (table.rows() == 0) throw std::invalid_argument("preprocess: empty table");
  if (options.per_group_normalize && table.group.empty()) {
    throw std::invalid_argument(
        "preprocess: per_group_normalize requires a group column");
  }

  DataProvenance prov;
  prov.one_hot = options.one_hot && !table.categorical_names.empty();
  if (prov.one_hot) {
    for (std::size_t c = 0; c < table.categorical_names.size(); ++c) {
      prov.one_hot_categories.emplace_back(table.categorical_names[c],
                                           ordered_categories(table.categorical[c]));
    }
  }

  prov.min_max_features = options.min_max || options.per_group_normalize;
  if (prov.min_max_features) {
    for (Index c = 0; c < table.numeric.cols(); ++c) {
      MinMaxStats stats =
          column_stats(table.numeric_names[static_cast<std::size_t>(c)], table.numeric.col(c));
      if (stats.zero_range) {
        prov.warnings.push_back("numeric column '" + stats.column +
                                "' has zero range; mapped to 0");
      }
      prov.feature_minmax.push_back(stats);
    }
  }
  prov.per_group_normalize = options.per_group_normalize;
  if (options.per_group_normalize) {
    std::map<std::string, std::vector<Index>> by_group;
    for (Index r = 0; r < table.rows(); ++r) by_group[table.group[static_cast<std::size_t>(r)]].push_back(r);
    for (const auto& [g, idx] : by_group) {
      std::vector<MinMaxStats> stats_list;
      for (Index c = 0; c < table.numeric.cols(); ++c) {
        Eigen::VectorXd values(static_cast<Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) values[static_cast<Index>(i)] = table.numeric(idx[i], c);
        MinMaxStats stats = column_stats(table.numeric_names[static_cast<std::size_t>(c)], values);
        if (stats.zero_range) {
          prov.warnings.push_back("numeric column '" + stats.column + "' in group '" + g +
                                  "' has zero range; mapped to 0");
        }
        stats_list.push_back(stats);
      }
      prov.per_group_minmax.emplace(g, std::move(stats_list));
    }
  }

  prov.min_max_label = options.min_max_label;
  if (prov.min_max_label) prov.label_minmax = column_stats("label", table.label);

  prov.l2_label = options.normalize_labels;
  if (prov.l2_label) {
    Eigen::VectorXd y = table.label;
    if (prov.min_max_label) {
      for (Index i = 0; i < y.size(); ++i) y[i] = apply_minmax(y[i], prov.label_minmax);
    }
    const double norm = y.norm();
    if (norm == 0.0) {
      throw std::invalid_argument("preprocess: cannot l2-normalize an all-zero label");
    }
    prov.label_divisor = norm;
  }

  prov.feature_names = table.numeric_names;
  if (prov.one_hot) {
    for (const auto& [name, cats] : prov.one_hot_categories) {
      for (const auto& cat : cats) prov.feature_names.push_back(name + "=" + cat);
    }
  }

  Dataset out = apply_provenance(table, prov);
  return out;
}

Dataset apply_provenance(const RawTable& table, const DataProvenance& provenance) {
  if (provenance.per_group_normalize && table.group.empty()) {
    throw std::invalid_argument(
        "apply_provenance: recorded per-group scaling but the table has no groups");
  }
  Dataset out;
  out.provenance = provenance;
  out.x = assemble_features(table, provenance, &out.provenance.warnings);
  scale_numeric_columns(&out.x, table, provenance, &out.provenance.warnings);
  out.y = transform_label(table, provenance);
  out.groups = table.group;
  return out;
}

double evaluate_test_function(TestFunction fn, const Eigen::VectorXd& x) {
  if (fn == TestFunction::kF1) return std::sqrt(1.0 + x.norm());
  return (-x.array().abs()).exp().sum();
}

Dataset gen_synthetic(std::uint64_t seed, Index m, Index d, TestFunction fn,
                      bool normalize_labels) {
  return gen_synthetic_grouped(seed, {m}, d, {1.0}, fn, normalize_labels);
}

Dataset gen_synthetic_grouped(std::uint64_t seed,
                              const std::vector<Index>& group_sizes, Index d,
                              const std::vector<double>& input_scales,
                              TestFunction fn, bool normalize_labels) {
  if (group_sizes.empty() || group_sizes.size() != input_scales.size()) {
    throw std::invalid_argument(
        "gen_synthetic_grouped: one input scale per group required");
  }
  if (d < 1) throw std::invalid_argument("gen_synthetic_grouped: d must be >= 1");
  Index m = 0;
  for (Index size : group_sizes) {
    if (size < 1) throw std::invalid_argument("gen_synthetic_grouped: group sizes must be >= 1");
    m += size;
  }

  Rng rng(seed);
  Dataset out;
  out.x.resize(m, d);
  out.y.resize(m);
  const bool grouped = group_sizes.size() > 1;
  Index row = 0;
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    for (Index i = 0; i < group_sizes[g]; ++i, ++row) {
      for (Index c = 0; c < d; ++c) out.x(row, c) = input_scales[g] * rng.normal();
      out.y[row] = evaluate_test_function(fn, out.x.row(row).transpose());
      if (grouped) out.groups.push_back("g" + std::to_string(g));
    }
  }
  if (normalize_labels) {
    const double norm = out.y.norm();
    out.y /= norm;
    out.provenance.l2_label = true;
    out.provenance.label_divisor = norm;
  }
  return out;
}

namespace {

Dataset take_rows(const Dataset& data, const std::vector<Index>& rows) {
  Dataset out;
  out.x.resize(static_cast<Index>(rows.size()), data.cols());
  out.y.resize(static_cast<Index>(rows.size()));
  out.provenance = data.provenance;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(static_cast<Index>(i)) = data.x.row(rows[i]);
    out.y[static_cast<Index>(i)] = data.y[rows[i]];
    if (data.has_groups()) out.groups.push_back(data.groups[static_cast<std::size_t>(rows[i])]);
  }
  return out;
}

RawTable take_table_rows(const RawTable& table, const std::vector<Index>& rows) {
  RawTable out;
  out.numeric_names = table.numeric_names;
  out.categorical_names = table.categorical_names;
  out.numeric.resize(static_cast<Index>(rows.size()), table.numeric.cols());
  out.label.resize(static_cast<Index>(rows.size()));
  out.categorical.resize(table.categorical.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.numeric.row(static_cast<Index>(i)) = table.numeric.row(rows[i]);
    out.label[static_cast<Index>(i)] = table.label[rows[i]];
    for (std::size_t c = 0; c < table.categorical.size(); ++c) {
      out.categorical[c].push_back(table.categorical[c][static_cast<std::size_t>(rows[i])]);
    }
    if (!table.group.empty()) out.group.push_back(table.group[static_cast<std::size_t>(rows[i])]);
  }
  return out;
}

// Per-group shuffled index split shared by the Dataset and RawTable variants.
std::pair<std::vector<Index>, std::vector<Index>> split_indices(
    const std::map<std::string, std::vector<Index>>& groups,
    const SplitStrategy& strategy, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Index> train_rows;
  std::vector<Index> test_rows;

  std::uint64_t group_ordinal = 0;
  for (const auto& [name, indices] : groups) {
    std::vector<Index> shuffled = indices;
    Rng group_rng = rng.fork(group_ordinal++);
    for (Index i = static_cast<Index>(shuffled.size()) - 1; i > 0; --i) {
      const Index j = group_rng.index(i + 1);
      std::swap(shuffled[static_cast<std::size_t>(i)], shuffled[static_cast<std::size_t>(j)]);
    }

    Index train_n = 0;
    Index test_n = 0;
    if (const auto* counts = std::get_if<PerGroupCounts>(&strategy)) {
      train_n = counts->train_n;
      test_n = counts->test_n;
      if (train_n < 1 || test_n < 0) {
        throw std::invalid_argument("split: per-group counts must be positive");
      }
      if (train_n + test_n > static_cast<Index>(shuffled.size())) {
        throw std::invalid_argument("split: group '" + name + "' has " +
                                    std::to_string(shuffled.size()) + " rows, need " +
                                    std::to_string(train_n + test_n));
      }
    } else {
      const auto& fraction = std::get<PerGroupFraction>(strategy);
      if (!(fraction.train_fraction > 0.0 && fraction.train_fraction < 1.0)) {
        throw std::invalid_argument("split: train fraction must lie in (0, 1)");
      }
      train_n = static_cast<Index>(std::floor(fraction.train_fraction *
                                              static_cast<double>(shuffled.size())));
      test_n = static_cast<Index>(shuffled.size()) - train_n;
      if (train_n == 0) {
        throw std::invalid_argument("split: group '" + name + "' too small for fraction");
      }
    }
    train_rows.insert(train_rows.end(), shuffled.begin(), shuffled.begin() + train_n);
    test_rows.insert(test_rows.end(), shuffled.begin() + train_n,
                     shuffled.begin() + train_n + test_n);
  }

  // Original row order within each side, so output does not depend on the
  // group iteration order.
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {train_rows, test_rows};
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitStrategy& strategy,
                                  std::uint64_t seed) {
  const auto [train_rows, test_rows] = split_indices(data.group_indices(), strategy, seed);
  return {take_rows(data, train_rows), take_rows(data, test_rows)};
}

std::pair<RawTable, RawTable> split_table(const RawTable& table,
                                          const SplitStrategy& strategy,
                                          std::uint64_t seed) {
  std::map<std::string, std::vector<Index>> groups;
  if (table.group.empty()) {
    std::vector<Index> all(static_cast<std::size_t>(table.rows()));
    std::iota(all.begin(), all.end(), Index{0});
    groups.emplace("all", std::move(all));
  } else {
    for (Index i = 0; i < table.rows(); ++i) {
      groups[table.group[static_cast<std::size_t>(i)]].push_back(i);
    }
  }
  const auto [train_rows, test_rows] = split_indices(groups, strategy, seed);
  return {take_table_rows(table, train_rows), take_table_rows(table, test_rows)};
}

}  // namespace dprf
