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

#include "dprf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "dprf/rng.hpp"

namespace dprf {

const Eigen::VectorXcd& TrainedModel::coefficient_values() const {
  if (const auto* plain = std::get_if<Coefficients>(&coefficients)) {
    return plain->values;
  }
  return std::get<PrivatizedCoefficients>(coefficients).values;
}

TrainedModel make_model(FeatureSample features, Coefficients coefficients,
                        PredictionConvention convention) {
  if (coefficients.size() != features.count()) {
    throw std::invalid_argument("make_model: coefficient length " +
                                std::to_string(coefficients.size()) +
                                " does not match feature count " +
                                std::to_string(features.count()));
  }
  return TrainedModel{std::move(features), std::move(coefficients), convention};
}

TrainedModel make_model(FeatureSample features, PrivatizedCoefficients coefficients,
                        PredictionConvention convention) {
  if (coefficients.size() != features.count()) {
    throw std::invalid_argument("make_model: coefficient length " +
                                std::to_string(coefficients.size()) +
                                " does not match feature count " +
                                std::to_string(features.count()));
  }
  return TrainedModel{std::move(features), std::move(coefficients), convention};
}

Eigen::VectorXcd predict_complex(const TrainedModel& model,
                                 const Eigen::MatrixXd& inputs) {
  const Eigen::VectorXcd& c = model.coefficient_values();
  if (c.size() != model.features.count()) {
    throw std::invalid_argument("predict: coefficient/feature length mismatch");
  }
  const DesignMatrix design = build_design_matrix(model.features, inputs);
  if (design.kind == FeatureKind::kFourier) return design.fourier * c;
  return (design.cosine * c.real()).cast<Complex>();
}

Eigen::VectorXd predict(const TrainedModel& model, const Eigen::MatrixXd& inputs,
                        PredictionDiagnostics* diagnostics) {
  const Eigen::VectorXcd full = predict_complex(model, inputs);
  if (diagnostics != nullptr) {
    diagnostics->max_imaginary_magnitude = full.imag().cwiseAbs().maxCoeff();
  }
  return full.real();
}

double test_error(const TrainedModel& model, const Eigen::MatrixXd& inputs,
                  const Eigen::VectorXd& labels) {
  if (labels.size() == 0) throw std::invalid_argument("test_error: empty test set");
  if (inputs.rows() != labels.size()) {
    throw std::invalid_argument("test_error: inputs/labels length mismatch");
  }
  const Eigen::VectorXcd full = predict_complex(model, inputs);
  if (model.convention == PredictionConvention::kRealPart) {
    return (labels - full.real()).squaredNorm() / static_cast<double>(labels.size());
  }
  return (full - labels.cast<Complex>()).squaredNorm() / static_cast<double>(labels.size());
}

double test_error(const TrainedModel& model, const Dataset& test_set) {
  return test_error(model, test_set.x, test_set.y);
}

namespace {

// Shared excessive-risk accumulator. noisy_prediction(rep) must return the
// prediction vector of the privatized model for repetition rep; the same
// draw scores the population and every group.
FairnessReport excessive_risk_report(
    const Eigen::VectorXd& base_prediction, const Dataset& data,
    std::int64_t repetitions, double per_coordinate_variance,
    const std::map<std::string, double>& traces, double population_trace,
    const std::function<Eigen::VectorXd(std::int64_t)>& noisy_prediction) {
  if (repetitions < 1) {
    throw std::invalid_argument("excessive_risk_gap: repetitions must be >= 1");
  }
  const auto groups = data.group_indices();
  for (const auto& [name, idx] : groups) {
    if (idx.empty()) throw std::invalid_argument("excessive_risk_gap: empty group");
  }
  // Sequential accumulation everywhere, so a group covering the whole
  // dataset reproduces the population value bit-for-bit.
  const auto sequential_mean = [](const Eigen::VectorXd& v) {
    double sum = 0.0;
    for (Index i = 0; i < v.size(); ++i) sum += v[i];
    return sum / static_cast<double>(v.size());
  };

  const Eigen::VectorXd base_sq = (data.y - base_prediction).array().square();
  const double base_population = sequential_mean(base_sq);
  std::map<std::string, double> base_group;
  for (const auto& [name, idx] : groups) {
    double sum = 0.0;
    for (Index i : idx) sum += base_sq[i];
    base_group[name] = sum / static_cast<double>(idx.size());
  }

  FairnessReport report;
  report.repetitions = repetitions;
  double population = 0.0;
  std::map<std::string, double> group_risk;
  for (const auto& [name, idx] : groups) group_risk[name] = 0.0;

  for (std::int64_t rep = 0; rep < repetitions; ++rep) {
    const Eigen::VectorXd prediction = noisy_prediction(rep);
    const Eigen::VectorXd sq = (data.y - prediction).array().square();
    population += sequential_mean(sq) - base_population;
    for (const auto& [name, idx] : groups) {
      double sum = 0.0;
      for (Index i : idx) sum += sq[i];
      group_risk[name] += sum / static_cast<double>(idx.size()) - base_group[name];
    }
  }

  report.population_excessive_risk = population / static_cast<double>(repetitions);
  report.hessian_traces = traces;
  report.population_hessian_trace = population_trace;
  for (auto& [name, value] : group_risk) {
    const double risk = value / static_cast<double>(repetitions);
    report.per_group_excessive_risk[name] = risk;
    report.per_group_gap[name] = std::abs(report.population_excessive_risk - risk);
    report.per_group_gap_approx[name] =
        0.5 * per_coordinate_variance * std::abs(traces.at(name) - population_trace);
  }
  return report;
}

double per_coordinate_variance_of(const MechanismSpec& mechanism, FeatureKind kind,
                                  Index n_coefficients) {
  if (const auto* gaussian = std::get_if<GaussianMechanism>(&mechanism)) {
    return gaussian->params.noise_variance;
  }
  const auto& gamma = std::get<GammaMechanism>(mechanism);
  const double dim = static_cast<double>(
      kind == FeatureKind::kFourier ? 2 * n_coefficients : n_coefficients);
  // E[R^2]/dim with R ~ Gamma(dim, xi).
  return (dim + 1.0) / (gamma.rate() * gamma.rate());
}

}  // namespace

FairnessReport excessive_risk_gap(const TrainedModel& non_private,
                                  const MechanismSpec& mechanism,
                                  const Dataset& data, std::int64_t repetitions,
                                  std::uint64_t rng_seed) {
  const Eigen::VectorXcd& c_values = non_private.coefficient_values();
  const DesignMatrix design = build_design_matrix(non_private.features, data.x);

  std::map<std::string, double> traces;
  for (const auto& [name, idx] : data.group_indices()) {
    Eigen::MatrixXd rows(static_cast<Index>(idx.size()), data.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) rows.row(static_cast<Index>(i)) = data.x.row(idx[i]);
    traces[name] = hessian_trace_feature_map(rows, non_private.features);
  }
  const double population_trace = hessian_trace_feature_map(data.x, non_private.features);

  Coefficients base;
  base.values = c_values;
  base.kind = non_private.features.kind;
  if (const auto* plain = std::get_if<Coefficients>(&non_private.coefficients)) {
    base.provenance = plain->provenance;
  }

  const Eigen::VectorXd base_prediction =
      design.kind == FeatureKind::kFourier
          ? Eigen::VectorXd((design.fourier * c_values).real())
          : Eigen::VectorXd(design.cosine * c_values.real());

  Rng root(rng_seed);
  const auto noisy_prediction = [&](std::int64_t rep) {
    Rng rep_rng = root.fork(static_cast<std::uint64_t>(rep));
    const PrivatizedCoefficients noisy = privatize(base, mechanism, rep_rng.seed());
    if (design.kind == FeatureKind::kFourier) {
      return Eigen::VectorXd((design.fourier * noisy.values).real());
    }
    return Eigen::VectorXd(design.cosine * noisy.values.real());
  };

  return excessive_risk_report(
      base_prediction, data, repetitions,
      per_coordinate_variance_of(mechanism, non_private.features.kind, c_values.size()),
      traces, population_trace, noisy_prediction);
}

FairnessReport linear_excessive_risk_gap(const Eigen::VectorXd& weights,
                                         double noise_variance,
                                         const Dataset& data,
                                         std::int64_t repetitions,
                                         std::uint64_t rng_seed) {
  if (weights.size() != data.cols()) {
    throw std::invalid_argument("linear_excessive_risk_gap: weight length mismatch");
  }
  if (noise_variance < 0.0) {
    throw std::invalid_argument("linear_excessive_risk_gap: negative noise variance");
  }

  std::map<std::string, double> traces;
  for (const auto& [name, idx] : data.group_indices()) {
    Eigen::MatrixXd rows(static_cast<Index>(idx.size()), data.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) rows.row(static_cast<Index>(i)) = data.x.row(idx[i]);
    traces[name] = hessian_trace_linear(rows);
  }
  const double population_trace = hessian_trace_linear(data.x);

  const Eigen::VectorXd base_prediction = data.x * weights;
  const double stddev = std::sqrt(noise_variance);
  Rng root(rng_seed);
  const auto noisy_prediction = [&](std::int64_t rep) {
    Rng rep_rng = root.fork(static_cast<std::uint64_t>(rep));
    const Eigen::VectorXd noisy = weights + rep_rng.normal_vector(weights.size(), stddev);
    return Eigen::VectorXd(data.x * noisy);
  };

  return excessive_risk_report(base_prediction, data, repetitions, noise_variance,
                               traces, population_trace, noisy_prediction);
}

double hessian_trace_linear(const Eigen::MatrixXd& group_inputs) {
  if (group_inputs.rows() == 0) {
    throw std::invalid_argument("hessian_trace: empty group");
  }
  return group_inputs.array().square().rowwise().sum().mean();
}

double hessian_trace_feature_map(const Eigen::MatrixXd& group_inputs,
                                 const FeatureSample& features) {
  if (group_inputs.rows() == 0) {
    throw std::invalid_argument("hessian_trace: empty group");
  }
  double total = 0.0;
  for (Index r = 0; r < group_inputs.rows(); ++r) {
    total += feature_map(features, group_inputs.row(r).transpose()).squaredNorm();
  }
  return total / static_cast<double>(group_inputs.rows());
}

double ks_distance(const Eigen::VectorXd& p_samples,
                   const Eigen::VectorXd& q_samples, Index grid_resolution) {
  if (p_samples.size() == 0 || q_samples.size() == 0) {
    throw std::invalid_argument("ks_distance: empty sample set");
  }
  if (grid_resolution < 2) {
    throw std::invalid_argument("ks_distance: grid resolution must be >= 2");
  }

  std::vector<double> p(p_samples.data(), p_samples.data() + p_samples.size());
  std::vector<double> q(q_samples.data(), q_samples.data() + q_samples.size());
  std::sort(p.begin(), p.end());
  std::sort(q.begin(), q.end());

  const double lo = std::min(p.front(), q.front());
  const double hi = std::max(p.back(), q.back());
  const double step = (hi - lo) / static_cast<double>(grid_resolution - 1);

  const auto cdf = [](const std::vector<double>& sorted, double t) {
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), t) -
                               sorted.begin()) /
           static_cast<double>(sorted.size());
  };

  double max_diff = 0.0;
  for (Index i = 0; i < grid_resolution; ++i) {
    const double t = i + 1 == grid_resolution ? hi : lo + step * static_cast<double>(i);
    max_diff = std::max(max_diff, std::abs(cdf(p, t) - cdf(q, t)));
  }
  return max_diff;
}

double statistical_parity(const std::map<std::string, Eigen::VectorXd>& outputs_by_group,
                          Index grid_resolution) {
  if (outputs_by_group.empty()) {
    throw std::invalid_argument("statistical_parity: no groups");
  }
  double max_distance = 0.0;
  for (auto a = outputs_by_group.begin(); a != outputs_by_group.end(); ++a) {
    for (auto b = std::next(a); b != outputs_by_group.end(); ++b) {
      max_distance =
          std::max(max_distance, ks_distance(a->second, b->second, grid_resolution));
    }
  }
  return max_distance;
}

}  // namespace dprf
