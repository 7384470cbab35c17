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

#include "dprf/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dprf/data.hpp"
#include "dprf/diagnostics.hpp"
#include "dprf/features.hpp"
#include "dprf/metrics.hpp"
#include "dprf/privacy.hpp"
#include "dprf/report.hpp"
#include "dprf/rng.hpp"
#include "dprf/solvers.hpp"

namespace dprf {

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "curves_vs_n") return ExperimentKind::kCurvesVsN;
  if (name == "sample_size_sweep") return ExperimentKind::kSampleSizeSweep;
  if (name == "real_data") return ExperimentKind::kRealData;
  if (name == "fairness_erg") return ExperimentKind::kFairnessErg;
  if (name == "fairness_sp") return ExperimentKind::kFairnessSp;
  if (name == "audit") return ExperimentKind::kAudit;
  if (name == "bound") return ExperimentKind::kBound;
  throw ConfigError("unknown experiment '" + name +
                    "' (expected curves_vs_n, sample_size_sweep, real_data, "
                    "fairness_erg, fairness_sp, audit or bound)");
}

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kCurvesVsN: return "curves_vs_n";
    case ExperimentKind::kSampleSizeSweep: return "sample_size_sweep";
    case ExperimentKind::kRealData: return "real_data";
    case ExperimentKind::kFairnessErg: return "fairness_erg";
    case ExperimentKind::kFairnessSp: return "fairness_sp";
    case ExperimentKind::kAudit: return "audit";
    case ExperimentKind::kBound: return "bound";
  }
  return "?";
}

namespace {

namespace streams {
constexpr std::uint64_t kTrainData = 1;
constexpr std::uint64_t kTestData = 2;
constexpr std::uint64_t kFeatures = 3;
constexpr std::uint64_t kNoise = 4;
constexpr std::uint64_t kSolver = 5;
constexpr std::uint64_t kSplit = 6;
constexpr std::uint64_t kAudit = 7;
}  // namespace streams

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------
// Config fragments shared by several experiments.

TestFunction parse_test_function(const std::string& name) {
  if (name == "f1") return TestFunction::kF1;
  if (name == "f2") return TestFunction::kF2;
  throw ConfigError("data.function must be f1 or f2, got '" + name + "'");
}

FeatureKind parse_feature_kind(const std::string& name) {
  if (name == "fourier") return FeatureKind::kFourier;
  if (name == "cosine") return FeatureKind::kCosine;
  throw ConfigError("features.kind must be fourier or cosine, got '" + name + "'");
}

struct PrivacySpec {
  std::vector<double> epsilons;
  double delta_p = 1e-5;
  double eta = 0.375;
  bool zero_noise = false;
};

PrivacySpec parse_privacy(const KeyValueConfig& raw, bool list_required) {
  PrivacySpec spec;
  if (list_required || raw.has("privacy.epsilon_list")) {
    spec.epsilons = raw.get_double_list("privacy.epsilon_list");
  } else {
    spec.epsilons = {raw.get_double("privacy.epsilon", 1.0)};
  }
  std::sort(spec.epsilons.begin(), spec.epsilons.end());
  spec.delta_p = raw.get_double("privacy.delta_p", 1e-5);
  spec.eta = raw.get_double("privacy.eta", 0.375);
  spec.zero_noise = raw.get_bool("privacy.zero_noise", false);
  for (double eps : spec.epsilons) {
    if (!(eps > 0.0 && eps <= 1.0)) {
      throw ConfigError("privacy epsilon " + fmt(eps) + " outside (0, 1]");
    }
  }
  if (!(spec.delta_p > 0.0 && spec.delta_p < 1.0)) {
    throw ConfigError("privacy.delta_p outside (0, 1)");
  }
  if (!(spec.eta > 0.0 && spec.eta < 0.5)) {
    throw ConfigError("privacy.eta outside (0, 1/2)");
  }
  return spec;
}

enum class Method { kNonPrivate, kGaussian, kGamma, kSgd };

const char* method_name(Method m) {
  switch (m) {
    case Method::kNonPrivate: return "nonprivate";
    case Method::kGaussian: return "gaussian";
    case Method::kGamma: return "gamma";
    case Method::kSgd: return "sgd";
  }
  return "?";
}

std::vector<Method> parse_methods(const KeyValueConfig& raw) {
  std::vector<std::string> names =
      raw.has("methods") ? raw.get_string_list("methods")
                         : std::vector<std::string>{"nonprivate", "gaussian", "gamma", "sgd"};
  std::vector<Method> methods;
  for (const auto& name : names) {
    if (name == "nonprivate") methods.push_back(Method::kNonPrivate);
    else if (name == "gaussian") methods.push_back(Method::kGaussian);
    else if (name == "gamma") methods.push_back(Method::kGamma);
    else if (name == "sgd") methods.push_back(Method::kSgd);
    else throw ConfigError("unknown method '" + name + "'");
  }
  return methods;
}

// ---------------------------------------------------------------------------
// CSV data loading.

std::string preset_columns(const std::string& preset) {
  if (preset == "medical") {
    return "age:numeric,sex:categorical,bmi:numeric,children:numeric,"
           "smoker:categorical,region:categorical,charges:label";
  }
  if (preset == "wine") {
    return "fixed acidity:numeric,volatile acidity:numeric,citric acid:numeric,"
           "residual sugar:numeric,chlorides:numeric,free sulfur dioxide:numeric,"
           "total sulfur dioxide:numeric,density:numeric,pH:numeric,"
           "sulphates:numeric,alcohol:numeric,quality:label";
  }
  throw ConfigError("unknown data.preset '" + preset + "' (expected medical or wine)");
}

RawTable load_configured_tables(const KeyValueConfig& raw) {
  const std::vector<std::string> paths = raw.get_string_list("data.csv_paths");
  for (const auto& path : paths) {
    if (!std::filesystem::exists(path)) {
      throw ConfigError("data.csv_paths: file '" + path + "' does not exist");
    }
  }

  std::string columns;
  if (raw.has("data.columns")) {
    columns = raw.get_string("data.columns");
  } else if (raw.has("data.preset")) {
    columns = preset_columns(raw.get_string("data.preset"));
  } else {
    throw ConfigError("csv data needs data.columns or data.preset");
  }
  // The sensitive column doubles as the group tag; by default it also stays
  // a one-hot feature.
  if (raw.has("data.group_column")) {
    const std::string group_column = raw.get_string("data.group_column");
    if (!raw.get_bool("data.group_column_as_feature", true)) {
      const std::string needle = group_column + ":categorical";
      const auto pos = columns.find(needle);
      if (pos != std::string::npos) {
        columns.erase(pos, needle.size());
      }
    }
    columns += "," + group_column + ":group";
  }
  const ColumnSchema schema = ColumnSchema::parse(columns);

  std::vector<RawTable> tables;
  tables.reserve(paths.size());
  for (const auto& path : paths) tables.push_back(load_tabular(path, schema));

  std::vector<std::string> group_labels;
  if (raw.has("data.csv_group_labels")) {
    group_labels = raw.get_string_list("data.csv_group_labels");
  }
  return concat_tables(tables, group_labels);
}

// ---------------------------------------------------------------------------
// Small numeric helpers.

double design_test_error(const DesignMatrix& a, const Eigen::VectorXd& y,
                         const Eigen::VectorXcd& values) {
  Eigen::VectorXd prediction;
  if (a.kind == FeatureKind::kFourier) {
    prediction = (a.fourier * values).real();
  } else {
    prediction = a.cosine * values.real();
  }
  return (y - prediction).squaredNorm() / static_cast<double>(y.size());
}

Eigen::VectorXcd maybe_privatize(const Coefficients& c, const MechanismSpec& mechanism,
                                 std::uint64_t seed, bool zero_noise) {
  if (zero_noise) return c.values;
  return privatize(c, mechanism, seed).values;
}

void add_condition_warnings(Manifest& manifest, const ConditionReport& report,
                            const std::string& where) {
  if (report.all_ok()) return;
  std::ostringstream msg;
  msg << "concentration preconditions not met at " << where << ":";
  if (!report.d_ok) {
    msg << " d=" << report.observed_d << " < " << report.required_d;
  }
  if (!report.variance_ok) {
    msg << " gamma^2*sigma^2=" << report.observed_variance_product << " < "
        << report.required_variance_product;
  }
  if (!report.n_ok) {
    msg << " N=" << report.observed_n << " < " << report.required_n;
  }
  manifest.add_warning(msg.str());
}

// Orders parameter tuples componentwise, numerically where both cells parse
// as numbers, so "200" sorts before "1000".
bool tuple_less(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] == b[i]) continue;
    std::size_t consumed_a = 0;
    std::size_t consumed_b = 0;
    double na = 0.0;
    double nb = 0.0;
    bool numeric = false;
    try {
      na = std::stod(a[i], &consumed_a);
      nb = std::stod(b[i], &consumed_b);
      numeric = consumed_a == a[i].size() && consumed_b == b[i].size();
    } catch (const std::exception&) {
      numeric = false;
    }
    if (numeric) {
      if (na != nb) return na < nb;
      continue;
    }
    return a[i] < b[i];
  }
  return a.size() < b.size();
}

struct Accumulator {
  std::map<std::vector<std::string>, std::vector<double>> values;

  void add(std::vector<std::string> key, double value) {
    values[std::move(key)].push_back(value);
  }

  std::vector<const std::map<std::vector<std::string>, std::vector<double>>::value_type*>
  sorted_entries() const {
    std::vector<const std::map<std::vector<std::string>, std::vector<double>>::value_type*>
        out;
    out.reserve(values.size());
    for (const auto& entry : values) out.push_back(&entry);
    std::sort(out.begin(), out.end(),
              [](const auto* a, const auto* b) { return tuple_less(a->first, b->first); });
    return out;
  }
};

// Writes the aggregate table (params..., mean, std, reps) plus the raw
// per-repetition rows the aggregation can be recomputed from.
void write_aggregate(const std::string& out_dir, const std::vector<std::string>& params,
                     const Accumulator& acc, const std::string& value_name) {
  CsvTable results;
  results.header = params;
  results.header.insert(results.header.end(), {"mean", "std", "reps"});
  CsvTable per_rep;
  per_rep.header = params;
  per_rep.header.insert(per_rep.header.end(), {"rep", value_name});

  for (const auto* entry : acc.sorted_entries()) {
    const auto& [key, vals] = *entry;
    const MeanStd stats = mean_std(vals);
    std::vector<std::string> row = key;
    row.insert(row.end(),
               {fmt(stats.mean), fmt(stats.std), std::to_string(vals.size())});
    results.add_row(std::move(row));
    for (std::size_t r = 0; r < vals.size(); ++r) {
      std::vector<std::string> rep_row = key;
      rep_row.insert(rep_row.end(), {std::to_string(r), fmt(vals[r])});
      per_rep.add_row(std::move(rep_row));
    }
  }
  results.write(out_dir + "/results.csv");
  per_rep.write(out_dir + "/per_repetition.csv");
}

void maybe_write_curve_svg(const ExperimentConfig& config, const Accumulator& acc,
                           const std::string& title, const std::string& x_label) {
  if (!config.svg) return;
  // Key layout: {x, epsilon, method}; one series per (method, epsilon).
  std::map<std::string, Series> series;
  for (const auto& [key, vals] : acc.values) {
    const std::string name = key[2] + " eps=" + key[1];
    Series& s = series[name];
    s.name = name;
    s.x.push_back(std::stod(key[0]));
    s.y.push_back(mean_std(vals).mean);
  }
  SeriesPlot plot;
  plot.title = title;
  plot.x_label = x_label;
  plot.y_label = "test error";
  plot.log_y = true;
  for (auto& [name, s] : series) {
    std::vector<std::size_t> order(s.x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
    Series sorted;
    sorted.name = s.name;
    for (std::size_t i : order) {
      sorted.x.push_back(s.x[i]);
      sorted.y.push_back(s.y[i]);
    }
    plot.series.push_back(std::move(sorted));
  }
  write_svg(plot, config.out_dir + "/plot.svg");
}

// ---------------------------------------------------------------------------
// curves_vs_n and sample_size_sweep share the synthetic method-comparison
// cell: train min-norm (and SGD when requested), privatize, score.

struct CellResult {
  std::map<Method, std::map<double, double>> test_error;  // method -> eps -> value
};

CellResult evaluate_methods_cell(const Dataset& train, const Dataset& test,
                                 const FeatureSample& features,
                                 const std::vector<Method>& methods,
                                 const PrivacySpec& privacy, double tol,
                                 Rng noise_root) {
  const DesignMatrix a = build_design_matrix(features, train.x);
  const DesignMatrix a_test = build_design_matrix(features, test.x);
  const Index n = features.count();

  const Coefficients min_norm = solve_min_norm(a, train.y, MinNormMethod::kGram, tol);
  Coefficients sgd;
  const bool want_sgd =
      std::find(methods.begin(), methods.end(), Method::kSgd) != methods.end();
  if (want_sgd) {
    sgd = solve_sgd(a, train.y, SgdOptions{}, noise_root.fork(streams::kSolver).seed());
  }

  CellResult cell;
  std::uint64_t eps_ordinal = 0;
  for (double eps : privacy.epsilons) {
    Rng eps_rng = noise_root.fork(streams::kNoise).fork(eps_ordinal++);
    const PrivacyParams params =
        privacy.zero_noise ? zero_noise_params(n)
                           : calibrate_gaussian(n, privacy.eta, eps, privacy.delta_p);
    for (Method method : methods) {
      double value = 0.0;
      switch (method) {
        case Method::kNonPrivate:
          value = design_test_error(a_test, test.y, min_norm.values);
          break;
        case Method::kGaussian:
          value = design_test_error(
              a_test, test.y,
              maybe_privatize(min_norm, GaussianMechanism{params},
                              eps_rng.fork(0).seed(), privacy.zero_noise));
          break;
        case Method::kGamma:
          value = design_test_error(
              a_test, test.y,
              maybe_privatize(min_norm, GammaMechanism{eps, params.sensitivity},
                              eps_rng.fork(1).seed(), privacy.zero_noise));
          break;
        case Method::kSgd:
          value = design_test_error(
              a_test, test.y,
              maybe_privatize(sgd, GaussianMechanism{params}, eps_rng.fork(2).seed(),
                              privacy.zero_noise));
          break;
      }
      cell.test_error[method][eps] = value;
    }
  }
  return cell;
}

void run_curves_vs_n(const ExperimentConfig& config, Manifest& manifest) {
  const KeyValueConfig& raw = config.raw;
  const TestFunction fn = parse_test_function(raw.get_string("data.function", "f1"));
  const Index train_size = raw.get_int("data.train_size", 1000);
  const Index test_size = raw.get_int("data.test_size", 1000);
  const Index dim = raw.get_int("data.dim");
  const bool normalize = raw.get_bool("data.normalize_labels", true);
  std::vector<std::int64_t> counts = raw.get_int_list("features.count_list");
  std::sort(counts.begin(), counts.end());
  const double sigma_omega_sq = raw.get_double("features.sigma_omega_sq", 40.0);
  const FeatureKind kind = parse_feature_kind(raw.get_string("features.kind", "fourier"));
  const PrivacySpec privacy = parse_privacy(raw, /*list_required=*/true);
  const std::vector<Method> methods = parse_methods(raw);
  const std::int64_t repetitions = raw.get_int("repetitions", 10);
  const double tol = raw.get_double("solver.tolerance", 1e-10);

  if (train_size < 1 || test_size < 1 || dim < 1 || repetitions < 1) {
    throw ConfigError("curves_vs_n: sizes and repetitions must be positive");
  }
  for (std::int64_t n : counts) {
    if (n < train_size) {
      throw ConfigError("curves_vs_n: features.count_list entry " + std::to_string(n) +
                        " below train size (min-norm needs N >= m)");
    }
  }

  Rng root(config.seed);
  Dataset train = gen_synthetic(root.fork(streams::kTrainData).seed(), train_size, dim,
                                fn, normalize);
  Dataset test =
      gen_synthetic(root.fork(streams::kTestData).seed(), test_size, dim, fn, false);
  if (normalize) test.y /= train.provenance.label_divisor;

  const double gamma_sq = estimate_gamma_sq(train.x);
  Accumulator acc;
  for (std::size_t ni = 0; ni < counts.size(); ++ni) {
    const Index n = counts[ni];
    add_condition_warnings(
        manifest,
        check_concentration_conditions(train_size, dim, n, privacy.eta, 0.1, gamma_sq,
                                       sigma_omega_sq),
        "N=" + std::to_string(n));
    for (std::int64_t rep = 0; rep < repetitions; ++rep) {
      Rng cell_rng = root.fork(streams::kFeatures).fork(ni).fork(rep);
      const FeatureSample features =
          sample_features(cell_rng.seed(), n, dim, sigma_omega_sq, kind);
      const CellResult cell = evaluate_methods_cell(train, test, features, methods,
                                                    privacy, tol, cell_rng.fork(1));
      for (const auto& [method, by_eps] : cell.test_error) {
        for (const auto& [eps, value] : by_eps) {
          acc.add({std::to_string(n), fmt(eps), method_name(method)}, value);
        }
      }
    }
  }

  write_aggregate(config.out_dir, {"n_features", "epsilon", "method"}, acc, "test_error");
  maybe_write_curve_svg(config, acc, "test error vs number of features", "N");
}

void run_sample_size_sweep(const ExperimentConfig& config, Manifest& manifest) {
  const KeyValueConfig& raw = config.raw;
  const TestFunction fn = parse_test_function(raw.get_string("data.function", "f1"));
  std::vector<std::int64_t> train_sizes = raw.get_int_list("data.train_sizes");
  std::sort(train_sizes.begin(), train_sizes.end());
  const Index test_size = raw.get_int("data.test_size", 200);
  const Index dim = raw.get_int("data.dim");
  const bool normalize = raw.get_bool("data.normalize_labels", true);
  const Index count_offset = raw.get_int("features.count_offset", 200);
  const double sigma_omega_sq = raw.get_double("features.sigma_omega_sq", 40.0);
  const FeatureKind kind = parse_feature_kind(raw.get_string("features.kind", "fourier"));
  const PrivacySpec privacy = parse_privacy(raw, /*list_required=*/false);
  const std::vector<Method> methods = parse_methods(raw);
  const std::int64_t repetitions = raw.get_int("repetitions", 10);
  const double tol = raw.get_double("solver.tolerance", 1e-10);
  if (dim < 1 || test_size < 1 || repetitions < 1 || count_offset < 0) {
    throw ConfigError("sample_size_sweep: invalid sizes");
  }

  Rng root(config.seed);
  Accumulator acc;
  for (std::size_t mi = 0; mi < train_sizes.size(); ++mi) {
    const Index m = train_sizes[mi];
    if (m < 1) throw ConfigError("sample_size_sweep: train size must be positive");
    const Index n = m + count_offset;
    Dataset train =
        gen_synthetic(root.fork(streams::kTrainData).fork(mi).seed(), m, dim, fn, normalize);
    Dataset test =
        gen_synthetic(root.fork(streams::kTestData).fork(mi).seed(), test_size, dim, fn, false);
    if (normalize) test.y /= train.provenance.label_divisor;

    add_condition_warnings(
        manifest,
        check_concentration_conditions(m, dim, n, privacy.eta, 0.1,
                                       estimate_gamma_sq(train.x), sigma_omega_sq),
        "m=" + std::to_string(m) + ", N=" + std::to_string(n));

    for (std::int64_t rep = 0; rep < repetitions; ++rep) {
      Rng cell_rng = root.fork(streams::kFeatures).fork(mi).fork(rep);
      const FeatureSample features =
          sample_features(cell_rng.seed(), n, dim, sigma_omega_sq, kind);
      const CellResult cell = evaluate_methods_cell(train, test, features, methods,
                                                    privacy, tol, cell_rng.fork(1));
      for (const auto& [method, by_eps] : cell.test_error) {
        for (const auto& [eps, value] : by_eps) {
          acc.add({std::to_string(m), fmt(eps), method_name(method)}, value);
        }
      }
    }
  }

  write_aggregate(config.out_dir, {"train_size", "epsilon", "method"}, acc, "test_error");
  maybe_write_curve_svg(config, acc, "test error vs training size", "m");
}

// ---------------------------------------------------------------------------
// real_data: epsilon/N sweeps plus the solver comparison with wall-clock
// timing (solver time only, median of 3 runs, seconds).

struct SolverChoice {
  std::string name;           // column value: svd | gram | kaczmarz | sgd:<lr>
  MinNormMethod direct = MinNormMethod::kSvd;
  bool is_direct = false;
  bool is_kaczmarz = false;
  bool is_sgd = false;
  double sgd_learning_rate = 0.0;
};

std::vector<SolverChoice> parse_solvers(const KeyValueConfig& raw) {
  std::vector<std::string> names = raw.has("solver.methods")
                                       ? raw.get_string_list("solver.methods")
                                       : std::vector<std::string>{"svd", "kaczmarz"};
  std::vector<SolverChoice> out;
  for (const auto& name : names) {
    SolverChoice choice;
    choice.name = name;
    if (name == "svd" || name == "pinv") {
      choice.name = "svd";
      choice.is_direct = true;
      choice.direct = MinNormMethod::kSvd;
    } else if (name == "gram") {
      choice.is_direct = true;
      choice.direct = MinNormMethod::kGram;
    } else if (name == "kaczmarz") {
      choice.is_kaczmarz = true;
    } else if (name == "sgd") {
      choice.is_sgd = true;
    } else {
      throw ConfigError("unknown solver '" + name + "'");
    }
    out.push_back(choice);
  }
  if (raw.has("solver.sgd_learning_rates")) {
    for (double lr : raw.get_double_list("solver.sgd_learning_rates")) {
      SolverChoice choice;
      choice.name = "sgd:" + fmt(lr);
      choice.is_sgd = true;
      choice.sgd_learning_rate = lr;
      out.push_back(choice);
    }
  }
  return out;
}

void run_real_data(const ExperimentConfig& config, Manifest& manifest) {
  const KeyValueConfig& raw = config.raw;
  const RawTable table = load_configured_tables(raw);

  PreprocessOptions options;
  options.one_hot = raw.get_bool("data.one_hot", true);
  options.min_max = raw.get_bool("data.min_max", true);
  options.min_max_label = raw.get_bool("data.min_max_label", true);
  options.normalize_labels = raw.get_bool("data.normalize_labels", false);
  options.per_group_normalize = raw.get_bool("data.per_group_normalize", false);
  const double train_fraction = raw.get_double("data.train_fraction", 0.9);

  std::vector<std::int64_t> counts = raw.get_int_list("features.count_list");
  std::sort(counts.begin(), counts.end());
  const double sigma_omega_sq = raw.get_double("features.sigma_omega_sq", 40.0);
  const FeatureKind kind = parse_feature_kind(raw.get_string("features.kind", "fourier"));
  const PrivacySpec privacy = parse_privacy(raw, /*list_required=*/true);
  const std::vector<SolverChoice> solvers = parse_solvers(raw);
  const std::int64_t repetitions = raw.get_int("repetitions", 10);
  const double kaczmarz_factor = raw.get_double("solver.kaczmarz_iteration_factor", 1.0);
  const double tol = raw.get_double("solver.tolerance", 1e-10);
  const std::int64_t timing_runs = raw.get_int("timing.runs", 3);
  if (repetitions < 1 || kaczmarz_factor <= 0.0 || timing_runs < 1) {
    throw ConfigError("real_data: invalid repetitions/iteration factor/timing runs");
  }

  Rng root(config.seed);
  const auto [train_raw, test_raw] =
      split_table(table, PerGroupFraction{train_fraction}, root.fork(streams::kSplit).seed());
  const Dataset train = preprocess(train_raw, options);
  const Dataset test = apply_provenance(test_raw, train.provenance);
  for (const auto& warning : train.provenance.warnings) manifest.add_warning(warning);
  manifest.set("train_rows", std::to_string(train.rows()));
  manifest.set("test_rows", std::to_string(test.rows()));

  const double label_norm = train.y.norm();
  if (label_norm > 1.0 + 1e-9) {
    manifest.add_warning(
        "||y||_2 = " + fmt(label_norm) +
        " exceeds 1; the calibrated sensitivity bound assumes unit-norm labels");
  }

  const std::int64_t kaczmarz_iters = static_cast<std::int64_t>(
      std::ceil(kaczmarz_factor * static_cast<double>(train.rows())));

  Accumulator acc;
  CsvTable timing;
  timing.header = {"n_features", "solver", "seconds_median"};

  for (std::size_t ni = 0; ni < counts.size(); ++ni) {
    const Index n = counts[ni];
    if (n < train.rows()) {
      throw ConfigError("real_data: N=" + std::to_string(n) +
                        " below training rows (min-norm needs N >= m)");
    }
    add_condition_warnings(
        manifest,
        check_concentration_conditions(train.rows(), train.cols(), n, privacy.eta, 0.1,
                                       estimate_gamma_sq(train.x), sigma_omega_sq),
        "N=" + std::to_string(n));

    for (std::int64_t rep = 0; rep < repetitions; ++rep) {
      Rng cell_rng = root.fork(streams::kFeatures).fork(ni).fork(rep);
      const FeatureSample features =
          sample_features(cell_rng.seed(), n, train.cols(), sigma_omega_sq, kind);
      const DesignMatrix a = build_design_matrix(features, train.x);
      const DesignMatrix a_test = build_design_matrix(features, test.x);

      for (std::size_t si = 0; si < solvers.size(); ++si) {
        const SolverChoice& solver = solvers[si];
        const auto solve_once = [&]() {
          if (solver.is_direct) return solve_min_norm(a, train.y, solver.direct, tol);
          if (solver.is_kaczmarz) {
            return solve_kaczmarz(a, train.y, kaczmarz_iters,
                                  cell_rng.fork(streams::kSolver).fork(si).seed());
          }
          SgdOptions sgd;
          if (solver.sgd_learning_rate > 0.0) sgd.learning_rate = solver.sgd_learning_rate;
          return solve_sgd(a, train.y, sgd, cell_rng.fork(streams::kSolver).fork(si).seed());
        };

        if (rep == 0) {
          std::vector<double> seconds;
          for (std::int64_t run = 0; run < timing_runs; ++run) {
            const auto start = std::chrono::steady_clock::now();
            const Coefficients timed = solve_once();
            const auto stop = std::chrono::steady_clock::now();
            seconds.push_back(std::chrono::duration<double>(stop - start).count());
            (void)timed;
          }
          std::sort(seconds.begin(), seconds.end());
          timing.add_row({std::to_string(n), solver.name,
                          fmt(seconds[seconds.size() / 2])});
        }

        const Coefficients solution = solve_once();
        acc.add({std::to_string(n), "-", solver.name, "none"},
                design_test_error(a_test, test.y, solution.values));

        std::uint64_t eps_ordinal = 0;
        for (double eps : privacy.epsilons) {
          const PrivacyParams params =
              privacy.zero_noise ? zero_noise_params(n)
                                 : calibrate_gaussian(n, privacy.eta, eps, privacy.delta_p);
          const Eigen::VectorXcd noisy = maybe_privatize(
              solution, GaussianMechanism{params},
              cell_rng.fork(streams::kNoise).fork(si).fork(eps_ordinal++).seed(),
              privacy.zero_noise);
          acc.add({std::to_string(n), fmt(eps), solver.name, "gaussian"},
                  design_test_error(a_test, test.y, noisy));
        }
      }
    }
  }

  write_aggregate(config.out_dir, {"n_features", "epsilon", "solver", "mechanism"}, acc,
                  "test_error");
  timing.write(config.out_dir + "/timing.csv");
}

// ---------------------------------------------------------------------------
// fairness_erg: per-group excessive risk gaps, random-feature model vs the
// regularized linear baseline with matched Gaussian noise.

struct FairnessData {
  Dataset rf;      // one-hot only, l2-normalized labels
  Dataset linear;  // per-group (or raw) normalized inputs, same labels
};

// Excessive risk is reported on the training side; the held-out rows exist
// only to reproduce the sampling protocol.
FairnessData prepare_fairness_split(const KeyValueConfig& raw, const RawTable& table,
                                    const SplitStrategy& strategy, std::uint64_t seed) {
  const RawTable train_raw = split_table(table, strategy, seed).first;

  PreprocessOptions rf_options;
  rf_options.one_hot = true;
  rf_options.min_max = false;  // feature scale left untouched for the RF model
  rf_options.normalize_labels = true;
  PreprocessOptions linear_options;
  linear_options.one_hot = true;
  linear_options.per_group_normalize = raw.get_bool("data.per_group_normalize", true);
  linear_options.min_max = !linear_options.per_group_normalize;
  linear_options.normalize_labels = true;

  FairnessData out;
  out.rf = preprocess(train_raw, rf_options);
  out.linear = preprocess(train_raw, linear_options);
  return out;
}

void run_fairness_erg(const ExperimentConfig& config, Manifest& manifest) {
  const KeyValueConfig& raw = config.raw;
  const std::string source = raw.get_string("data.source", "csv");
  const Index n = raw.get_int("features.count", 4000);
  const double sigma_omega_sq = raw.get_double("features.sigma_omega_sq");
  const PrivacySpec privacy = parse_privacy(raw, /*list_required=*/true);
  const std::int64_t repetitions = raw.get_int("repetitions", 100);
  const std::int64_t split_repeats = raw.get_int("split_repeats", 10);
  const double tol = raw.get_double("solver.tolerance", 1e-10);
  const std::string solver_name = raw.get_string("solver.method", "gram");
  if (solver_name != "gram" && solver_name != "svd" && solver_name != "pinv") {
    throw ConfigError("fairness_erg: solver.method must be gram, svd or pinv");
  }
  const MinNormMethod min_norm_method =
      solver_name == "gram" ? MinNormMethod::kGram : MinNormMethod::kSvd;
  if (repetitions < 1 || split_repeats < 1 || n < 1) {
    throw ConfigError("fairness_erg: invalid repetitions/split_repeats/count");
  }

  SplitStrategy strategy = PerGroupFraction{raw.get_double("data.train_fraction", 0.9)};
  if (raw.has("data.per_group_train")) {
    strategy = PerGroupCounts{raw.get_int("data.per_group_train"),
                              raw.get_int("data.per_group_test")};
  }

  RawTable table;
  Dataset grouped_synthetic;
  if (source == "csv") {
    table = load_configured_tables(raw);
    if (table.group.empty()) {
      throw ConfigError("fairness_erg: csv data needs a group column");
    }
  } else if (source == "synthetic_grouped") {
    std::vector<Index> sizes;
    for (std::int64_t s : raw.get_int_list("data.group_sizes")) sizes.push_back(s);
    const std::vector<double> scales = raw.get_double_list("data.group_scales");
    grouped_synthetic = gen_synthetic_grouped(
        Rng(config.seed).fork(streams::kTrainData).seed(), sizes,
        raw.get_int("data.dim"), scales,
        parse_test_function(raw.get_string("data.function", "f1")), true);
  } else {
    throw ConfigError("fairness_erg: data.source must be csv or synthetic_grouped");
  }

  Rng root(config.seed);
  Accumulator gap_acc;
  CsvTable details;
  details.header = {"epsilon", "model",        "group",      "split_repeat",
                    "excessive_risk", "gap",   "gap_approx", "hessian_trace"};

  for (std::int64_t repeat = 0; repeat < split_repeats; ++repeat) {
    Rng repeat_rng = root.fork(streams::kSplit).fork(static_cast<std::uint64_t>(repeat));
    FairnessData data;
    if (source == "csv") {
      data = prepare_fairness_split(raw, table, strategy, repeat_rng.seed());
    } else {
      auto [train, test] = split(grouped_synthetic, strategy, repeat_rng.seed());
      (void)test;
      data.rf = train;
      data.linear = train;  // unnormalized inputs for the synthetic baseline
    }
    const Index m = data.rf.rows();
    if (n < m) {
      throw ConfigError("fairness_erg: features.count below training rows");
    }

    const FeatureSample features = sample_features(
        root.fork(streams::kFeatures).fork(static_cast<std::uint64_t>(repeat)).seed(), n,
        data.rf.cols(), sigma_omega_sq, FeatureKind::kFourier);
    const DesignMatrix a = build_design_matrix(features, data.rf.x);
    const Coefficients min_norm = solve_min_norm(a, data.rf.y, min_norm_method, tol);
    const TrainedModel model = make_model(features, min_norm);

    const double lambda = matched_linear_lambda(n, data.linear.rows());
    const Eigen::VectorXd weights = linear_ridge(data.linear.x, data.linear.y, lambda);
    const double linear_sensitivity = 2.0 / (static_cast<double>(data.linear.rows()) * lambda);

    std::uint64_t eps_ordinal = 0;
    for (double eps : privacy.epsilons) {
      Rng eps_rng = repeat_rng.fork(streams::kNoise).fork(eps_ordinal++);
      const PrivacyParams params = calibrate_gaussian_for_labels(
          data.rf.y, n, privacy.eta, eps, privacy.delta_p);
      const FairnessReport rf_report = excessive_risk_gap(
          model, GaussianMechanism{params}, data.rf, repetitions, eps_rng.fork(0).seed());

      const double linear_variance =
          gaussian_mechanism_variance(linear_sensitivity, eps, privacy.delta_p);
      const FairnessReport linear_report = linear_excessive_risk_gap(
          weights, linear_variance, data.linear, repetitions, eps_rng.fork(1).seed());

      const auto record = [&](const std::string& model_name, const FairnessReport& report) {
        for (const auto& [group, gap] : report.per_group_gap) {
          gap_acc.add({fmt(eps), model_name, group}, gap);
          details.add_row({fmt(eps), model_name, group, std::to_string(repeat),
                           fmt(report.per_group_excessive_risk.at(group)), fmt(gap),
                           fmt(report.per_group_gap_approx.at(group)),
                           fmt(report.hessian_traces.at(group))});
        }
      };
      record("rf", rf_report);
      record("linear", linear_report);
    }
  }

  write_aggregate(config.out_dir, {"epsilon", "model", "group"}, gap_acc, "gap");
  details.write(config.out_dir + "/fairness_details.csv");
  manifest.set("matched_lambda_rule", "sqrt(N)/(2m)");

  if (config.svg) {
    std::map<std::string, Series> series;
    for (const auto& [key, vals] : gap_acc.values) {
      const std::string name = key[1] + ":" + key[2];
      Series& s = series[name];
      s.name = name;
      s.x.push_back(std::stod(key[0]));
      s.y.push_back(mean_std(vals).mean);
    }
    SeriesPlot plot;
    plot.title = "excessive risk gap vs privacy budget";
    plot.x_label = "epsilon";
    plot.y_label = "excessive risk gap";
    for (auto& [name, s] : series) plot.series.push_back(s);
    write_svg(plot, config.out_dir + "/plot.svg");
  }
}

// ---------------------------------------------------------------------------
// fairness_sp: statistical parity of targets, DP-RF outputs, regularized
// least squares and its DP variant, on the full dataset.

void run_fairness_sp(const ExperimentConfig& config, Manifest& manifest) {
  const KeyValueConfig& raw = config.raw;
  const Index n = raw.get_int("features.count", 4000);
  const double sigma_omega_sq = raw.get_double("features.sigma_omega_sq");
  const PrivacySpec privacy = parse_privacy(raw, /*list_required=*/false);
  const double eps = privacy.epsilons.front();
  const std::int64_t repetitions = raw.get_int("repetitions", 20);
  const Index grid = raw.get_int("metrics.grid_resolution", 500);
  const double tol = raw.get_double("solver.tolerance", 1e-10);
  const std::string solver_name = raw.get_string("solver.method", "gram");
  if (solver_name != "gram" && solver_name != "svd" && solver_name != "pinv") {
    throw ConfigError("fairness_sp: solver.method must be gram, svd or pinv");
  }
  const MinNormMethod min_norm_method =
      solver_name == "gram" ? MinNormMethod::kGram : MinNormMethod::kSvd;
  if (repetitions < 1 || grid < 2) {
    throw ConfigError("fairness_sp: invalid repetitions or grid resolution");
  }

  const RawTable table = load_configured_tables(raw);
  if (table.group.empty()) throw ConfigError("fairness_sp: data needs a group column");

  PreprocessOptions rf_options;
  rf_options.one_hot = true;
  rf_options.normalize_labels = true;
  PreprocessOptions linear_options;
  linear_options.one_hot = true;
  linear_options.per_group_normalize = raw.get_bool("data.per_group_normalize", true);
  linear_options.normalize_labels = true;

  const Dataset rf_data = preprocess(table, rf_options);
  const Dataset linear_data = preprocess(table, linear_options);
  const auto groups = rf_data.group_indices();
  const Index m = rf_data.rows();
  // Full-dataset training can leave N < m; the coefficients are then the
  // least-squares solution, reached through ridge with a vanishing penalty.
  const bool under_parametrized = n < m;
  const double ls_lambda = raw.get_double("solver.ridge_lambda", 1e-8);
  if (under_parametrized) {
    manifest.add_warning(
        "features.count below sample count; training least-squares via ridge "
        "with lambda = " + fmt(ls_lambda));
  }

  const auto outputs_by_group = [&](const Eigen::VectorXd& values) {
    std::map<std::string, Eigen::VectorXd> out;
    for (const auto& [name, idx] : groups) {
      Eigen::VectorXd v(static_cast<Index>(idx.size()));
      for (std::size_t i = 0; i < idx.size(); ++i) v[static_cast<Index>(i)] = values[idx[i]];
      out[name] = std::move(v);
    }
    return out;
  };

  CsvTable results;
  results.header = {"model", "mean", "std", "reps"};
  const double sp_targets = statistical_parity(outputs_by_group(rf_data.y), grid);
  results.add_row({"targets", fmt(sp_targets), "0", "1"});

  Rng root(config.seed);
  std::vector<double> sp_rf;
  for (std::int64_t rep = 0; rep < repetitions; ++rep) {
    Rng rep_rng = root.fork(streams::kFeatures).fork(static_cast<std::uint64_t>(rep));
    const FeatureSample features =
        sample_features(rep_rng.seed(), n, rf_data.cols(), sigma_omega_sq,
                        FeatureKind::kFourier);
    const DesignMatrix a = build_design_matrix(features, rf_data.x);
    const Coefficients min_norm =
        under_parametrized ? solve_ridge(a, rf_data.y, ls_lambda, tol)
                           : solve_min_norm(a, rf_data.y, min_norm_method, tol);
    const PrivacyParams params =
        calibrate_gaussian_for_labels(rf_data.y, n, privacy.eta, eps, privacy.delta_p);
    const Eigen::VectorXcd noisy =
        maybe_privatize(min_norm, GaussianMechanism{params},
                        rep_rng.fork(streams::kNoise).seed(), privacy.zero_noise);
    const Eigen::VectorXd outputs = (a.fourier * noisy).real();
    sp_rf.push_back(statistical_parity(outputs_by_group(outputs), grid));
  }
  const MeanStd rf_stats = mean_std(sp_rf);
  results.add_row({"dp_rf", fmt(rf_stats.mean), fmt(rf_stats.std),
                   std::to_string(repetitions)});

  const double lambda = matched_linear_lambda(n, linear_data.rows());
  const Eigen::VectorXd weights = linear_ridge(linear_data.x, linear_data.y, lambda);
  const double sp_rls =
      statistical_parity(outputs_by_group(linear_data.x * weights), grid);
  results.add_row({"rls", fmt(sp_rls), "0", "1"});

  const double linear_sensitivity = 2.0 / (static_cast<double>(linear_data.rows()) * lambda);
  const double linear_variance =
      gaussian_mechanism_variance(linear_sensitivity, eps, privacy.delta_p);
  std::vector<double> sp_dprls;
  for (std::int64_t rep = 0; rep < repetitions; ++rep) {
    Rng rep_rng = root.fork(streams::kNoise).fork(static_cast<std::uint64_t>(rep));
    const Eigen::VectorXd noisy =
        weights + rep_rng.normal_vector(weights.size(), std::sqrt(linear_variance));
    sp_dprls.push_back(statistical_parity(outputs_by_group(linear_data.x * noisy), grid));
  }
  const MeanStd dprls_stats = mean_std(sp_dprls);
  results.add_row({"dp_rls", fmt(dprls_stats.mean), fmt(dprls_stats.std),
                   std::to_string(repetitions)});

  results.write(config.out_dir + "/results.csv");
  manifest.set("epsilon", fmt(eps));
  manifest.set("label_normalization", "l2");
}

// ---------------------------------------------------------------------------
// audit: concentration, sensitivity and noise-calibration diagnostics.

void run_audit(const ExperimentConfig& config, Manifest& manifest) {
  const KeyValueConfig& raw = config.raw;
  const Index m = raw.get_int("audit.m", 20);
  const Index dim = raw.get_int("audit.d", 30);
  const Index n = raw.get_int("audit.n_features", 2000);
  const double sigma_omega_sq = raw.get_double("audit.sigma_omega_sq", 1.0);
  const double eta = raw.get_double("privacy.eta", 0.375);
  const double delta = raw.get_double("audit.delta", 0.1);
  const double epsilon = raw.get_double("privacy.epsilon", 1.0);
  const double delta_p = raw.get_double("privacy.delta_p", 1e-5);
  const std::int64_t seeds = raw.get_int("audit.seeds", 20);
  const std::int64_t swap_trials = raw.get_int("audit.swap_trials", 100);
  const std::int64_t gaussian_draws = raw.get_int("audit.gaussian_draws", 100000);
  const std::int64_t gamma_draws = raw.get_int("audit.gamma_draws", 10000);
  const TestFunction fn = parse_test_function(raw.get_string("data.function", "f1"));
  if (seeds < 1 || swap_trials < 1) throw ConfigError("audit: invalid trial counts");

  CsvTable report;
  report.header = {"check", "seed", "metric", "value", "bound", "ok"};
  std::ostringstream text;
  text << "audit report\n============\n";

  const ConditionReport conditions = check_concentration_conditions(
      m, dim, n, eta, delta, static_cast<double>(dim), sigma_omega_sq);
  text << "concentration preconditions: d_ok=" << conditions.d_ok
       << " variance_ok=" << conditions.variance_ok << " n_ok=" << conditions.n_ok
       << " (required d=" << conditions.required_d
       << ", gamma^2*sigma^2=" << conditions.required_variance_product
       << ", N=" << conditions.required_n << ")\n";

  Rng root(config.seed);
  std::int64_t concentration_ok = 0;
  for (std::int64_t s = 0; s < seeds; ++s) {
    Rng seed_rng = root.fork(streams::kAudit).fork(static_cast<std::uint64_t>(s));
    const Dataset data = gen_synthetic(seed_rng.fork(0).seed(), m, dim, fn, true);
    const FeatureSample features = sample_features(seed_rng.fork(1).seed(), n, dim,
                                                   sigma_omega_sq, FeatureKind::kFourier);
    const ConcentrationResult result =
        concentration_check(build_design_matrix(features, data.x));
    const bool ok = result.spectral_deviation <= 2.0 * eta;
    concentration_ok += ok ? 1 : 0;
    report.add_row({"concentration", std::to_string(s), "spectral_deviation",
                    fmt(result.spectral_deviation), fmt(2.0 * eta), ok ? "1" : "0"});
  }
  text << "concentration: deviation <= 2*eta in " << concentration_ok << "/" << seeds
       << " seeds\n";

  const double theoretical_delta =
      2.0 / std::sqrt(static_cast<double>(n) * (1.0 - 2.0 * eta));
  text << "sensitivity bound Delta = " << theoretical_delta << " (N=" << n
       << ", eta=" << eta << ")\n";
  std::int64_t audits_ok = 0;
  for (std::int64_t s = 0; s < seeds; ++s) {
    Rng seed_rng = root.fork(streams::kAudit + 1).fork(static_cast<std::uint64_t>(s));
    const Dataset data = gen_synthetic(seed_rng.fork(0).seed(), m, dim, fn, true);
    const FeatureSample features = sample_features(seed_rng.fork(1).seed(), n, dim,
                                                   sigma_omega_sq, FeatureKind::kFourier);
    Rng sampler_rng = seed_rng.fork(2);
    const ReplacementSampler sampler = [&fn, dim](Rng& rng) {
      Eigen::VectorXd x(dim);
      for (Index i = 0; i < dim; ++i) x[i] = rng.normal();
      return std::make_pair(x, evaluate_test_function(fn, x));
    };
    const AuditResult swap = sensitivity_audit(data, features, NeighborMode::kSwap,
                                               swap_trials, eta, sampler_rng.seed(), sampler);
    const AuditResult remove = sensitivity_audit(data, features, NeighborMode::kRemove, m,
                                                 eta, sampler_rng.fork(1).seed());
    const double worst = std::max(swap.empirical_max, remove.empirical_max);
    const bool ok = !swap.violated && !remove.violated;
    audits_ok += ok ? 1 : 0;
    report.add_row({"sensitivity", std::to_string(s), "empirical_max", fmt(worst),
                    fmt(swap.theoretical_bound), ok ? "1" : "0"});
  }
  text << "sensitivity: empirical max within bound in " << audits_ok << "/" << seeds
       << " seeded audits (swap trials " << swap_trials << " + exhaustive removal)\n";

  const PrivacyParams params = calibrate_gaussian(n, eta, epsilon, delta_p);
  const NoiseCalibrationReport gaussian = noise_calibration(
      GaussianMechanism{params}, n, gaussian_draws, delta, root.fork(101).seed());
  report.add_row({"noise_gaussian", "-", "per_coordinate_variance",
                  fmt(gaussian.per_coordinate_variance),
                  fmt(gaussian.expected_per_coordinate_variance), "-"});
  report.add_row({"noise_gaussian", "-", "norm_sq_quantile", fmt(gaussian.empirical_quantile),
                  fmt(gaussian.quantile_bound), gaussian.quantile_within_bound ? "1" : "0"});
  const NoiseCalibrationReport gamma = noise_calibration(
      GammaMechanism{epsilon, params.sensitivity}, n, gamma_draws, delta,
      root.fork(102).seed());
  report.add_row({"noise_gamma", "-", "mean_norm", fmt(gamma.mean_norm),
                  fmt(gamma.expected_mean_norm), "-"});
  report.add_row({"noise_gamma", "-", "norm_quantile", fmt(gamma.empirical_quantile),
                  fmt(gamma.quantile_bound), gamma.quantile_within_bound ? "1" : "0"});
  text << "gaussian noise: sigma^2 = " << params.noise_variance
       << ", empirical per-coordinate variance = " << gaussian.per_coordinate_variance
       << "\n";
  text << "gaussian tail: (1-delta) quantile of ||z||^2 = " << gaussian.empirical_quantile
       << " vs reference bound " << gaussian.quantile_bound
       << (gaussian.quantile_within_bound ? " (within)" : " (exceeds)") << "\n";
  text << "gamma noise: mean ||z|| = " << gamma.mean_norm << " (expected "
       << gamma.expected_mean_norm << ")\n";
  text << "gamma tail: (1-delta/2) quantile of ||z|| = " << gamma.empirical_quantile
       << " vs reference bound " << gamma.quantile_bound
       << (gamma.quantile_within_bound ? " (within)" : " (exceeds)") << "\n";

  report.write(config.out_dir + "/audit.csv");
  std::ofstream text_file(config.out_dir + "/audit_report.txt", std::ios::binary);
  if (!text_file) throw std::runtime_error("audit: cannot write report");
  text_file << text.str();
  manifest.set("sensitivity_bound", fmt(theoretical_delta));
}

// ---------------------------------------------------------------------------
// bound: generalization-bound table.

void run_bound(const ExperimentConfig& config, Manifest& manifest) {
  const KeyValueConfig& raw = config.raw;
  std::vector<std::int64_t> counts = raw.get_int_list("bound.n_list");
  std::sort(counts.begin(), counts.end());
  const Index m = raw.get_int("bound.m");
  const double eta = raw.get_double("bound.eta", 0.375);
  const double delta = raw.get_double("bound.delta", 0.05);
  std::vector<double> epsilons = raw.get_double_list("bound.epsilon_list");
  std::sort(epsilons.begin(), epsilons.end());
  const double delta_p = raw.get_double("bound.delta_p", 1e-5);
  const double f_norm = raw.get_double("bound.f_norm", 1.0);

  CsvTable table;
  table.header = {"n_features", "m",          "eta",           "delta",
                  "epsilon",    "delta_p",    "f_norm",        "approximation_term",
                  "estimation_term", "non_private_term", "privacy_term",
                  "privacy_term_relaxed", "total"};
  std::string note;
  for (std::int64_t n : counts) {
    for (double eps : epsilons) {
      const GeneralizationBound bound =
          eval_generalization_bound(n, m, eta, delta, eps, delta_p, f_norm);
      note = bound.denominator_note;
      table.add_row({std::to_string(n), std::to_string(m), fmt(eta), fmt(delta), fmt(eps),
                     fmt(delta_p), fmt(f_norm), fmt(bound.approximation_term),
                     fmt(bound.estimation_term), fmt(bound.non_private_term),
                     fmt(bound.privacy_term), fmt(bound.privacy_term_relaxed),
                     fmt(bound.total)});
    }
  }
  table.write(config.out_dir + "/results.csv");
  manifest.set("denominator_note", note);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_config(KeyValueConfig raw) {
  ExperimentConfig config;
  config.raw = std::move(raw);
  config.kind = parse_experiment_kind(config.raw.get_string("experiment"));
  const std::int64_t seed = config.raw.get_int("seed", 1);
  if (seed < 0) throw ConfigError("seed must be nonnegative");
  config.seed = static_cast<std::uint64_t>(seed);
  config.out_dir = config.raw.get_string("out_dir", "out");
  config.svg = config.raw.get_bool("svg", false);
  return config;
}

ExperimentConfig ExperimentConfig::load(
    const std::string& path, const std::map<std::string, std::string>& overrides) {
  KeyValueConfig raw = KeyValueConfig::from_file(path);
  for (const auto& [key, value] : overrides) raw.set(key, value);
  return from_config(std::move(raw));
}

void run_experiment(const ExperimentConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  Manifest manifest(config.out_dir + "/manifest.txt");
  manifest.set("dprf_version", kVersion);
  manifest.set("eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION));
  manifest.set("experiment", experiment_kind_name(config.kind));
  manifest.set("seed", std::to_string(config.seed));
  for (const auto& [key, value] : config.raw.entries()) {
    manifest.set("config." + key, value);
  }
  manifest.write("running");

  try {
    switch (config.kind) {
      case ExperimentKind::kCurvesVsN: run_curves_vs_n(config, manifest); break;
      case ExperimentKind::kSampleSizeSweep: run_sample_size_sweep(config, manifest); break;
      case ExperimentKind::kRealData: run_real_data(config, manifest); break;
      case ExperimentKind::kFairnessErg: run_fairness_erg(config, manifest); break;
      case ExperimentKind::kFairnessSp: run_fairness_sp(config, manifest); break;
      case ExperimentKind::kAudit: run_audit(config, manifest); break;
      case ExperimentKind::kBound: run_bound(config, manifest); break;
    }
  } catch (const std::exception& error) {
    manifest.add_warning("run aborted; partial outputs are incomplete");
    manifest.write(std::string("failed: ") + error.what());
    throw;
  }

  for (const auto& key : config.raw.unused_keys()) {
    manifest.add_warning("config key never used: " + key);
  }
  manifest.write("complete");
}

}  // namespace dprf
