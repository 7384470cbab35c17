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

#ifndef DPRF_METRICS_HPP_
#define DPRF_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "dprf/data.hpp"
#include "dprf/features.hpp"
#include "dprf/privacy.hpp"
#include "dprf/solvers.hpp"

namespace dprf {

// Real-labeled tasks take the real part of the (generally complex) Fourier
// model output; kComplex keeps the full value and scores squared moduli.
enum class PredictionConvention { kRealPart, kComplex };

struct TrainedModel {
  FeatureSample features;
  std::variant<Coefficients, PrivatizedCoefficients> coefficients;
  PredictionConvention convention = PredictionConvention::kRealPart;

  const Eigen::VectorXcd& coefficient_values() const;
};

TrainedModel make_model(FeatureSample features, Coefficients coefficients,
                        PredictionConvention convention = PredictionConvention::kRealPart);
TrainedModel make_model(FeatureSample features, PrivatizedCoefficients coefficients,
                        PredictionConvention convention = PredictionConvention::kRealPart);

// Largest |Im f(x)| seen while forming real-part predictions; off-sample
// Fourier outputs are generally complex and this is the honesty check.
struct PredictionDiagnostics {
  double max_imaginary_magnitude = 0.0;
};

Eigen::VectorXcd predict_complex(const TrainedModel& model,
                                 const Eigen::MatrixXd& inputs);

// Sum_k c_k exp(i<w_k, x>) (or the cosine analog), real part.
Eigen::VectorXd predict(const TrainedModel& model, const Eigen::MatrixXd& inputs,
                        PredictionDiagnostics* diagnostics = nullptr);

// Mean squared prediction error over a non-empty test set.
double test_error(const TrainedModel& model, const Eigen::MatrixXd& inputs,
                  const Eigen::VectorXd& labels);
double test_error(const TrainedModel& model, const Dataset& test_set);

struct FairnessReport {
  std::map<std::string, double> per_group_excessive_risk;
  double population_excessive_risk = 0.0;
  // xi_a = |population - group| estimated from the coupled repetitions.
  std::map<std::string, double> per_group_gap;
  // Quadratic-loss approximation (1/2) sigma^2 |Tr(H_a) - Tr(H)|, reported
  // alongside the empirical estimate rather than reconciled with it: the
  // exact quadratic identity E[L(theta+z) - L(theta)] = sigma^2 mean||x||^2
  // carries no 1/2, the approximation as conventionally written does.
  std::map<std::string, double> per_group_gap_approx;
  std::map<std::string, double> hessian_traces;
  double population_hessian_trace = 0.0;
  std::optional<double> sp_score;
  std::int64_t repetitions = 0;
};

// Excessive risk R = E_z[L(theta + z)] - L(theta) of the mechanism around the
// supplied non-private model, estimated over `repetitions` noise draws; the
// population and every group are scored on the same draws, which reduces the
// variance of the gaps. Groups come from the dataset (one group "all" when it
// carries no labels).
FairnessReport excessive_risk_gap(const TrainedModel& non_private,
                                  const MechanismSpec& mechanism,
                                  const Dataset& data, std::int64_t repetitions,
                                  std::uint64_t rng_seed);

// Same estimator for the linear model y ~ <w, x> under isotropic Gaussian
// noise on the weights.
FairnessReport linear_excessive_risk_gap(const Eigen::VectorXd& weights,
                                         double noise_variance,
                                         const Dataset& data,
                                         std::int64_t repetitions,
                                         std::uint64_t rng_seed);

// Mean ||x||^2 over a non-empty group: the Hessian trace of the quadratic
// risk for a raw linear model.
double hessian_trace_linear(const Eigen::MatrixXd& group_inputs);

// Mean ||phi(x)||^2 over a non-empty group; identically 1 in Fourier mode
// regardless of the input distribution.
double hessian_trace_feature_map(const Eigen::MatrixXd& group_inputs,
                                 const FeatureSample& features);

// Two-sample Kolmogorov-Smirnov distance evaluated on a uniform grid of
// grid_resolution points spanning the pooled sample range (inclusive
// endpoints): max_t |F_p(t) - F_q(t)|.
double ks_distance(const Eigen::VectorXd& p_samples,
                   const Eigen::VectorXd& q_samples, Index grid_resolution = 500);

// Maximum pairwise KS distance between per-group output samples.
double statistical_parity(const std::map<std::string, Eigen::VectorXd>& outputs_by_group,
                          Index grid_resolution = 500);

}  // namespace dprf

#endif  // DPRF_METRICS_HPP_
