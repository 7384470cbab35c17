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

#ifndef DPRF_FEATURES_HPP_
#define DPRF_FEATURES_HPP_

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "dprf/common.hpp"

namespace dprf {

enum class FeatureKind { kFourier, kCosine };

// N random frequency vectors drawn i.i.d. from N(0, sigma_omega_sq * I_d),
// plus uniform [-pi, pi] phase offsets in cosine mode. Immutable after
// construction; resampling with the same seed is bit-identical.
//
// The sampling variance is named sigma_omega_sq throughout: the same symbol
// conventionally denotes both this parameter and the privacy noise variance
// (PrivacyParams::noise_variance), and the two must not be conflated.
struct FeatureSample {
  Eigen::MatrixXd omegas;   // N x d, one frequency vector per row
  Eigen::VectorXd offsets;  // length N in cosine mode, empty otherwise
  double sigma_omega_sq = 0.0;
  std::uint64_t seed = 0;
  FeatureKind kind = FeatureKind::kFourier;

  Index count() const { return omegas.rows(); }
  Index dim() const { return omegas.cols(); }
};

FeatureSample sample_features(std::uint64_t seed, Index n_features, Index dim,
                              double sigma_omega_sq, FeatureKind kind);

// Unnormalized design matrix. Fourier entries are the unit-modulus complex
// exponentials exp(i<w_k, x_j>); cosine mode stores the real entries
// cos(<w_k, x_j> + b_k). The 1/sqrt(N) normalization belongs to the feature
// map used for kernel estimates and Hessian traces, not to this matrix.
struct DesignMatrix {
  FeatureKind kind = FeatureKind::kFourier;
  Eigen::MatrixXcd fourier;  // m x N when kind == kFourier
  Eigen::MatrixXd cosine;    // m x N when kind == kCosine

  Index rows() const {
    return kind == FeatureKind::kFourier ? fourier.rows() : cosine.rows();
  }
  Index cols() const {
    return kind == FeatureKind::kFourier ? fourier.cols() : cosine.cols();
  }
};

DesignMatrix build_design_matrix(const FeatureSample& features,
                                 const Eigen::MatrixXd& inputs);

// Normalized feature map phi. Fourier: (1/sqrt(N)) exp(i<w_k, x>). Cosine:
// sqrt(2/N) cos(<w_k, x> + b_k); the sqrt(2) keeps <phi(x), phi(x')> an
// unbiased estimate of the same shift-invariant kernel.
Eigen::VectorXcd feature_map(const FeatureSample& features,
                             const Eigen::VectorXd& x);

// <phi(x), phi(x')>, a Monte Carlo estimate of the Gaussian kernel
// exp(-sigma_omega_sq * ||x - x'||^2 / 2). Conjugate-symmetric; exactly 1 at
// x == x' in Fourier mode.
std::complex<double> kernel_estimate(const FeatureSample& features,
                                     const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& x_prime);

// Verdicts for the three concentration preconditions
//   d >= C1 log(m/delta)
//   gamma^2 sigma^2 >= 4 log(2m/eta)
//   N >= C2 eta^-2 m log(2m/delta)
// under which ||(1/N) A A* - I_m||_2 <= 2 eta with probability >= 1 - 3 delta.
// The constants C1, C2 are existential in the underlying statement and default
// to 1; callers get the computed thresholds rather than a hard failure.
struct ConditionReport {
  bool d_ok = false;
  bool variance_ok = false;
  bool n_ok = false;
  double required_d = 0.0;
  double required_variance_product = 0.0;
  double required_n = 0.0;
  double observed_d = 0.0;
  double observed_variance_product = 0.0;
  double observed_n = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;

  bool all_ok() const { return d_ok && variance_ok && n_ok; }
};

ConditionReport check_concentration_conditions(Index m, Index d, Index n_features,
                                               double eta, double delta,
                                               double gamma_sq,
                                               double sigma_omega_sq,
                                               double c1 = 1.0, double c2 = 1.0);

// Data variance parameter gamma^2 estimated as d times the mean per-coordinate
// sample variance, for use when the data distribution's parameter is unknown.
double estimate_gamma_sq(const Eigen::MatrixXd& inputs);

}  // namespace dprf

#endif  // DPRF_FEATURES_HPP_
