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

#ifndef DPRF_PRIVACY_HPP_
#define DPRF_PRIVACY_HPP_

#include <cstdint>
#include <variant>

#include <Eigen/Dense>

#include "dprf/common.hpp"
#include "dprf/solvers.hpp"

namespace dprf {

// Gaussian-mechanism calibration for the min-norm random-feature coefficients:
//   Delta   = 2 / sqrt(N (1 - 2 eta))
//   sigma^2 = 2 ln(1.25 / delta_p) Delta^2 / epsilon^2
// The sensitivity is a high-probability bound (valid on the concentration
// event and under ||y||_2 <= 1); it is used as the calibration constant
// exactly as stated, and the diagnostics module audits it empirically.
struct PrivacyParams {
  double epsilon = 0.0;         // in (0, 1]
  double delta_p = 0.0;         // in (0, 1)
  double eta = 0.0;             // in (0, 1/2)
  double sensitivity = 0.0;     // Delta
  double noise_variance = 0.0;  // sigma^2 per real coordinate
  Index n_features = 0;         // the N the sensitivity was derived from
};

PrivacyParams calibrate_gaussian(Index n_features, double eta, double epsilon,
                                 double delta_p);

// Same calibration, but first checks the sensitivity bound's precondition
// ||y||_2 <= 1 against the training labels and fails loudly if violated.
PrivacyParams calibrate_gaussian_for_labels(const Eigen::VectorXd& y,
                                            Index n_features, double eta,
                                            double epsilon, double delta_p);

// sigma^2 = 2 ln(1.25/delta_p) sensitivity^2 / epsilon^2
double gaussian_mechanism_variance(double sensitivity, double epsilon,
                                   double delta_p);

// Degenerate zero-noise parameters (the epsilon -> infinity limit). Exposed
// for testing only; calibrate_gaussian never produces them.
PrivacyParams zero_noise_params(Index n_features);

enum class MechanismKind { kGaussian, kGamma };

struct GaussianMechanism {
  PrivacyParams params;
};

// Additive noise with density proportional to exp(-xi ||b||_2): a radius
// drawn from Gamma(dim, xi) times a uniform unit-sphere direction, where dim
// is the real dimension of the coefficient space and xi = epsilon / Delta.
// Provides (epsilon, 0)-differential privacy.
struct GammaMechanism {
  double epsilon = 0.0;
  double sensitivity = 0.0;

  double rate() const { return epsilon / sensitivity; }
};

using MechanismSpec = std::variant<GaussianMechanism, GammaMechanism>;

MechanismKind mechanism_kind(const MechanismSpec& spec);

// Private coefficient vector. Carries the non-private provenance chain but
// never the pre-noise values.
struct PrivatizedCoefficients {
  Eigen::VectorXcd values;
  FeatureKind kind = FeatureKind::kFourier;
  MechanismSpec mechanism;
  std::uint64_t noise_seed = 0;
  Provenance inner_provenance = Provenance::kMinNormGram;
  SolverMeta inner_meta;

  Index size() const { return values.size(); }
};

// Output perturbation. Complex coefficient vectors are treated as R^{2N}:
// independent N(0, sigma^2) noise on each of the 2N real coordinates (the
// complex l2 sensitivity equals the R^{2N} l2 sensitivity, so the Gaussian
// guarantee carries over). Cosine-mode coefficients live in R^N literally.
PrivatizedCoefficients privatize(const Coefficients& coefficients,
                                 const MechanismSpec& mechanism,
                                 std::uint64_t noise_seed);

// Ridge-regularized linear least squares, the non-private half of the
// regularized baseline: minimizes (1/m)||Xw - y||^2 + lambda ||w||^2.
Eigen::VectorXd linear_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             double lambda);

// lambda = sqrt(N) / (2m), which makes the baseline's sensitivity 2/(m lambda)
// coincide with the random-feature sensitivity 4/sqrt(N) at eta = 3/8, so the
// two models receive identically distributed Gaussian noise.
double matched_linear_lambda(Index n_features, Index m);

struct LinearBaseline {
  Eigen::VectorXd private_weights;
  double lambda = 0.0;
  double sensitivity = 0.0;  // 2 / (m lambda)
  double epsilon = 0.0;
  double delta_p = 0.0;
  double noise_variance = 0.0;
  std::uint64_t noise_seed = 0;
};

// Gaussian output perturbation of the regularized linear model.
LinearBaseline dp_linear_baseline(const Eigen::MatrixXd& x,
                                  const Eigen::VectorXd& y, double lambda,
                                  double epsilon, double delta_p,
                                  std::uint64_t noise_seed);

}  // namespace dprf

#endif  // DPRF_PRIVACY_HPP_
