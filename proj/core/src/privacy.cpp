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

#include "dprf/privacy.hpp"

#include <cmath>
#include <stdexcept>

#include "dprf/rng.hpp"

namespace dprf {
namespace {

// Slack for the ||y||_2 <= 1 precondition so that labels normalized by their
// own norm pass the check despite rounding.
constexpr double kLabelNormSlack = 1e-9;

}  // namespace

double gaussian_mechanism_variance(double sensitivity, double epsilon,
                                   double delta_p) {
  return 2.0 * std::log(1.25 / delta_p) * sensitivity * sensitivity /
         (epsilon * epsilon);
}

PrivacyParams calibrate_gaussian(Index n_features, double eta, double epsilon,
                                 double delta_p) {
  if (n_features < 1) {
    throw std::invalid_argument("calibrate_gaussian: N must be >= 1");
  }
  if (!(eta > 0.0 && eta < 0.5)) {
    throw std::invalid_argument(
        "calibrate_gaussian: eta must lie in (0, 1/2); the sensitivity "
        "2/sqrt(N(1-2 eta)) diverges at eta = 1/2");
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument(
        "calibrate_gaussian: epsilon must lie in (0, 1]; the Gaussian-mechanism "
        "guarantee is stated for epsilon in (0, 1), with epsilon = 1 admitted "
        "as the closure point");
  }
  if (!(delta_p > 0.0 && delta_p < 1.0)) {
    throw std::invalid_argument("calibrate_gaussian: delta_p must lie in (0, 1)");
  }

  PrivacyParams params;
  params.epsilon = epsilon;
  params.delta_p = delta_p;
  params.eta = eta;
  params.n_features = n_features;
  params.sensitivity =
      2.0 / std::sqrt(static_cast<double>(n_features) * (1.0 - 2.0 * eta));
  params.noise_variance =
      gaussian_mechanism_variance(params.sensitivity, epsilon, delta_p);
  return params;
}

PrivacyParams calibrate_gaussian_for_labels(const Eigen::VectorXd& y,
                                            Index n_features, double eta,
                                            double epsilon, double delta_p) {
  const double norm = y.norm();
  if (norm > 1.0 + kLabelNormSlack) {
    throw std::invalid_argument(
        "calibrate_gaussian_for_labels: ||y||_2 = " + std::to_string(norm) +
        " exceeds 1; the sensitivity bound assumes unit-norm labels "
        "(normalize the labels before training)");
  }
  return calibrate_gaussian(n_features, eta, epsilon, delta_p);
}

PrivacyParams zero_noise_params(Index n_features) {
  PrivacyParams params;
  params.epsilon = 1.0;
  params.delta_p = 1e-5;
  params.eta = 0.25;
  params.n_features = n_features;
  params.sensitivity =
      2.0 / std::sqrt(static_cast<double>(n_features) * 0.5);
  params.noise_variance = 0.0;
  return params;
}

MechanismKind mechanism_kind(const MechanismSpec& spec) {
  return std::holds_alternative<GaussianMechanism>(spec) ? MechanismKind::kGaussian
                                                         : MechanismKind::kGamma;
}

namespace {

void add_gaussian_noise(Eigen::VectorXcd* values, FeatureKind kind, double sigma,
                        Rng& rng) {
  const Index n = values->size();
  if (kind == FeatureKind::kFourier) {
    for (Index k = 0; k < n; ++k) {
      (*values)[k] += Complex(sigma * rng.normal(), sigma * rng.normal());
    }
  } else {
    for (Index k = 0; k < n; ++k) (*values)[k] += sigma * rng.normal();
  }
}

void add_gamma_noise(Eigen::VectorXcd* values, FeatureKind kind, double rate,
                     Rng& rng) {
  const Index n = values->size();
  const Index dim = kind == FeatureKind::kFourier ? 2 * n : n;
  const double radius = rng.gamma(static_cast<double>(dim)) / rate;
  const Eigen::VectorXd direction = rng.sphere_direction(dim);
  if (kind == FeatureKind::kFourier) {
    // Real parts in the first N sphere coordinates, imaginary in the rest.
    for (Index k = 0; k < n; ++k) {
      (*values)[k] += radius * Complex(direction[k], direction[n + k]);
    }
  } else {
    for (Index k = 0; k < n; ++k) (*values)[k] += radius * direction[k];
  }
}

}  // namespace

PrivatizedCoefficients privatize(const Coefficients& coefficients,
                                 const MechanismSpec& mechanism,
                                 std::uint64_t noise_seed) {
  PrivatizedCoefficients out;
  out.values = coefficients.values;
  out.kind = coefficients.kind;
  out.mechanism = mechanism;
  out.noise_seed = noise_seed;
  out.inner_provenance = coefficients.provenance;
  out.inner_meta = coefficients.meta;

  Rng rng(noise_seed);
  if (const auto* gaussian = std::get_if<GaussianMechanism>(&mechanism)) {
    const PrivacyParams& params = gaussian->params;
    if (params.n_features != coefficients.size()) {
      throw std::invalid_argument(
          "privatize: params calibrated for N=" + std::to_string(params.n_features) +
          " but coefficient vector has length " + std::to_string(coefficients.size()));
    }
    if (params.noise_variance < 0.0) {
      throw std::invalid_argument("privatize: negative noise variance");
    }
    add_gaussian_noise(&out.values, coefficients.kind,
                       std::sqrt(params.noise_variance), rng);
  } else {
    const auto& gamma = std::get<GammaMechanism>(mechanism);
    if (!(gamma.epsilon > 0.0) || !(gamma.sensitivity > 0.0)) {
      throw std::invalid_argument(
          "privatize: Gamma mechanism requires positive epsilon and sensitivity");
    }
    add_gamma_noise(&out.values, coefficients.kind, gamma.rate(), rng);
  }
  return out;
}

Eigen::VectorXd linear_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             double lambda) {
  if (x.rows() != y.size()) {
    throw std::invalid_argument("linear_ridge: dimension mismatch");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("linear_ridge: lambda must be positive");
  }
  const double m = static_cast<double>(x.rows());
  const Index d = x.cols();
  const Eigen::MatrixXd normal = x.transpose() * x + m * lambda * Eigen::MatrixXd::Identity(d, d);
  return normal.ldlt().solve(x.transpose() * y);
}

double matched_linear_lambda(Index n_features, Index m) {
  return std::sqrt(static_cast<double>(n_features)) / (2.0 * static_cast<double>(m));
}

LinearBaseline dp_linear_baseline(const Eigen::MatrixXd& x,
                                  const Eigen::VectorXd& y, double lambda,
                                  double epsilon, double delta_p,
                                  std::uint64_t noise_seed) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("dp_linear_baseline: lambda must be positive");
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("dp_linear_baseline: epsilon must lie in (0, 1]");
  }
  if (!(delta_p > 0.0 && delta_p < 1.0)) {
    throw std::invalid_argument("dp_linear_baseline: delta_p must lie in (0, 1)");
  }

  LinearBaseline out;
  out.lambda = lambda;
  out.epsilon = epsilon;
  out.delta_p = delta_p;
  out.sensitivity = 2.0 / (static_cast<double>(x.rows()) * lambda);
  out.noise_variance = gaussian_mechanism_variance(out.sensitivity, epsilon, delta_p);
  out.noise_seed = noise_seed;

  Rng rng(noise_seed);
  out.private_weights =
      linear_ridge(x, y, lambda) +
      rng.normal_vector(x.cols(), std::sqrt(out.noise_variance));
  return out;
}

}  // namespace dprf
