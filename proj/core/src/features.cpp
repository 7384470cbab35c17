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

#include "dprf/features.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dprf/rng.hpp"

namespace dprf {

FeatureSample sample_features(std::uint64_t seed, Index n_features, Index dim,
                              double sigma_omega_sq, FeatureKind kind) {
  if (n_features < 1) throw std::invalid_argument("sample_features: N must be >= 1");
  if (dim < 1) throw std::invalid_argument("sample_features: d must be >= 1");
  if (!(sigma_omega_sq > 0.0)) {
    throw std::invalid_argument("sample_features: sigma_omega_sq must be positive");
  }

  Rng rng(seed);
  const double stddev = std::sqrt(sigma_omega_sq);
  FeatureSample out;
  out.omegas.resize(n_features, dim);
  for (Index k = 0; k < n_features; ++k) {
    for (Index j = 0; j < dim; ++j) out.omegas(k, j) = stddev * rng.normal();
  }
  if (kind == FeatureKind::kCosine) {
    out.offsets.resize(n_features);
    for (Index k = 0; k < n_features; ++k) {
      out.offsets[k] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
  }
  out.sigma_omega_sq = sigma_omega_sq;
  out.seed = seed;
  out.kind = kind;
  return out;
}

DesignMatrix build_design_matrix(const FeatureSample& features,
                                 const Eigen::MatrixXd& inputs) {
  if (inputs.cols() != features.dim()) {
    throw std::invalid_argument(
        "build_design_matrix: input dimension " + std::to_string(inputs.cols()) +
        " does not match feature dimension " + std::to_string(features.dim()));
  }
  const Index m = inputs.rows();
  const Index n = features.count();
  // phases(j, k) = <w_k, x_j>
  Eigen::MatrixXd phases = inputs * features.omegas.transpose();

  DesignMatrix out;
  out.kind = features.kind;
  if (features.kind == FeatureKind::kFourier) {
    out.fourier.resize(m, n);
    for (Index j = 0; j < m; ++j) {
      for (Index k = 0; k < n; ++k) {
        out.fourier(j, k) = Complex(std::cos(phases(j, k)), std::sin(phases(j, k)));
      }
    }
  } else {
    out.cosine.resize(m, n);
    for (Index j = 0; j < m; ++j) {
      for (Index k = 0; k < n; ++k) {
        out.cosine(j, k) = std::cos(phases(j, k) + features.offsets[k]);
      }
    }
  }
  return out;
}

Eigen::VectorXcd feature_map(const FeatureSample& features, const Eigen::VectorXd& x) {
  if (x.size() != features.dim()) {
    throw std::invalid_argument("feature_map: dimension mismatch");
  }
  const Index n = features.count();
  Eigen::VectorXd phases = features.omegas * x;
  Eigen::VectorXcd phi(n);
  if (features.kind == FeatureKind::kFourier) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index k = 0; k < n; ++k) {
      phi[k] = scale * Complex(std::cos(phases[k]), std::sin(phases[k]));
    }
  } else {
    const double scale = std::sqrt(2.0 / static_cast<double>(n));
    for (Index k = 0; k < n; ++k) {
      phi[k] = scale * std::cos(phases[k] + features.offsets[k]);
    }
  }
  return phi;
}

std::complex<double> kernel_estimate(const FeatureSample& features,
                                     const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& x_prime) {
  if (x.size() != features.dim() || x_prime.size() != features.dim()) {
    throw std::invalid_argument("kernel_estimate: dimension mismatch");
  }
  const Eigen::VectorXcd a = feature_map(features, x);
  const Eigen::VectorXcd b = feature_map(features, x_prime);
  // <a, b> = sum_k a_k conj(b_k)
  return (b.adjoint() * a)(0, 0);
}

ConditionReport check_concentration_conditions(Index m, Index d, Index n_features,
                                               double eta, double delta,
                                               double gamma_sq,
                                               double sigma_omega_sq, double c1,
                                               double c2) {
  if (!(eta > 0.0 && eta < 0.5)) {
    throw std::invalid_argument(
        "check_concentration_conditions: eta must lie in the open interval (0, 1/2)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument(
        "check_concentration_conditions: delta must lie in the open interval (0, 1)");
  }
  if (m < 1 || d < 1 || n_features < 1) {
    throw std::invalid_argument("check_concentration_conditions: counts must be >= 1");
  }

  const double md = static_cast<double>(m);
  ConditionReport report;
  report.c1 = c1;
  report.c2 = c2;
  report.required_d = c1 * std::log(md / delta);
  report.required_variance_product = 4.0 * std::log(2.0 * md / eta);
  report.required_n = c2 * md * std::log(2.0 * md / delta) / (eta * eta);
  report.observed_d = static_cast<double>(d);
  report.observed_variance_product = gamma_sq * sigma_omega_sq;
  report.observed_n = static_cast<double>(n_features);
  report.d_ok = report.observed_d >= report.required_d;
  report.variance_ok = report.observed_variance_product >= report.required_variance_product;
  report.n_ok = report.observed_n >= report.required_n;
  return report;
}

double estimate_gamma_sq(const Eigen::MatrixXd& inputs) {
  if (inputs.rows() < 2) {
    throw std::invalid_argument("estimate_gamma_sq: need at least two rows");
  }
  const Eigen::RowVectorXd mean = inputs.colwise().mean();
  const Eigen::MatrixXd centered = inputs.rowwise() - mean;
  const double denom = static_cast<double>(inputs.rows() - 1);
  const double mean_var = centered.array().square().colwise().sum().mean() / denom;
  return static_cast<double>(inputs.cols()) * mean_var;
}

}  // namespace dprf
