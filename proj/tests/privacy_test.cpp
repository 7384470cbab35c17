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

#include <gtest/gtest.h>

#include "dprf/rng.hpp"
#include "test_util.hpp"

namespace dprf {
namespace {

Coefficients make_coefficients(Index n, FeatureKind kind) {
  Coefficients c;
  c.kind = kind;
  c.values = Eigen::VectorXcd::Zero(n);
  for (Index i = 0; i < n; ++i) {
    c.values[i] = Complex(std::sin(0.1 * static_cast<double>(i)),
                          kind == FeatureKind::kFourier ? std::cos(0.2 * static_cast<double>(i))
                                                        : 0.0);
  }
  return c;
}

TEST(Calibrate, EtaThreeEighthsGivesFourOverSqrtN) {
  for (Index n : {16, 400, 4000, 12345}) {
    const PrivacyParams params = calibrate_gaussian(n, 0.375, 1.0, 1e-5);
    EXPECT_EQ(params.sensitivity, 4.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST(Calibrate, ReferencePointMatchesClosedForm) {
  const PrivacyParams params = calibrate_gaussian(400, 0.375, 1.0, 1e-5);
  EXPECT_EQ(params.sensitivity, 0.2);
  EXPECT_NEAR(params.noise_variance, 0.9388855213027552, 1e-12);
  // Independent transcription of sigma^2 = 2 ln(1.25/delta_p) Delta^2 / eps^2.
  EXPECT_NEAR(params.noise_variance,
              testing::gaussian_variance_oracle(params.sensitivity, 1.0, 1e-5), 1e-12);
}

TEST(Calibrate, RejectsOutOfRangeArguments) {
  EXPECT_THROW(calibrate_gaussian(100, 0.5, 1.0, 1e-5), std::invalid_argument);
  EXPECT_THROW(calibrate_gaussian(100, 0.0, 1.0, 1e-5), std::invalid_argument);
  EXPECT_THROW(calibrate_gaussian(100, 0.25, 1.5, 1e-5), std::invalid_argument);
  EXPECT_THROW(calibrate_gaussian(100, 0.25, 0.0, 1e-5), std::invalid_argument);
  EXPECT_THROW(calibrate_gaussian(100, 0.25, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(calibrate_gaussian(0, 0.25, 1.0, 1e-5), std::invalid_argument);
  EXPECT_NO_THROW(calibrate_gaussian(100, 0.25, 1.0, 1e-5));  // eps = 1 admitted
}

TEST(Calibrate, SensitivityMonotonicity) {
  double previous = calibrate_gaussian(100, 0.25, 1.0, 1e-5).sensitivity;
  for (Index n : {200, 400, 800, 1600}) {
    const double current = calibrate_gaussian(n, 0.25, 1.0, 1e-5).sensitivity;
    EXPECT_LT(current, previous);
    previous = current;
  }
  previous = calibrate_gaussian(100, 0.05, 1.0, 1e-5).sensitivity;
  for (double eta : {0.15, 0.25, 0.35, 0.45, 0.49}) {
    const double current = calibrate_gaussian(100, eta, 1.0, 1e-5).sensitivity;
    EXPECT_GT(current, previous);
    previous = current;
  }
}

TEST(Calibrate, VarianceMonotonicity) {
  double previous = calibrate_gaussian(100, 0.25, 0.1, 1e-5).noise_variance;
  for (double eps : {0.2, 0.4, 0.8, 1.0}) {
    const double current = calibrate_gaussian(100, 0.25, eps, 1e-5).noise_variance;
    EXPECT_LT(current, previous);
    previous = current;
  }
  previous = calibrate_gaussian(100, 0.25, 1.0, 1e-2).noise_variance;
  for (double delta_p : {1e-3, 1e-5, 1e-8}) {
    const double current = calibrate_gaussian(100, 0.25, 1.0, delta_p).noise_variance;
    EXPECT_GT(current, previous);
    previous = current;
  }
}

TEST(Calibrate, LabelNormPreconditionEnforced) {
  Eigen::VectorXd good(3);
  good << 0.6, 0.4, 0.2;
  EXPECT_NO_THROW(calibrate_gaussian_for_labels(good, 100, 0.375, 1.0, 1e-5));
  Eigen::VectorXd bad(3);
  bad << 1.0, 1.0, 1.0;
  EXPECT_THROW(calibrate_gaussian_for_labels(bad, 100, 0.375, 1.0, 1e-5),
               std::invalid_argument);
}

TEST(Privatize, ZeroNoiseIsIdentity) {
  const Coefficients c = make_coefficients(32, FeatureKind::kFourier);
  const PrivatizedCoefficients out =
      privatize(c, GaussianMechanism{zero_noise_params(32)}, 123);
  EXPECT_EQ((out.values - c.values).norm(), 0.0);
  EXPECT_EQ(out.inner_provenance, c.provenance);
}

TEST(Privatize, MismatchedParamsThrow) {
  const Coefficients c = make_coefficients(32, FeatureKind::kFourier);
  EXPECT_THROW(privatize(c, GaussianMechanism{calibrate_gaussian(16, 0.375, 1.0, 1e-5)}, 1),
               std::invalid_argument);
  EXPECT_THROW(privatize(c, GammaMechanism{0.0, 0.1}, 1), std::invalid_argument);
  EXPECT_THROW(privatize(c, GammaMechanism{0.5, 0.0}, 1), std::invalid_argument);
}

TEST(Privatize, GaussianPerCoordinateVariance) {
  const Index n = 20;
  const Coefficients c = make_coefficients(n, FeatureKind::kFourier);
  PrivacyParams params = calibrate_gaussian(n, 0.375, 0.5, 1e-5);
  const std::int64_t draws = 100000;
  double sq_sum = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    const PrivatizedCoefficients out =
        privatize(c, GaussianMechanism{params}, static_cast<std::uint64_t>(i));
    sq_sum += (out.values - c.values).squaredNorm();
  }
  // Complex coordinates carry noise on both real and imaginary parts.
  const double per_coordinate = sq_sum / (static_cast<double>(draws) * 2.0 * n);
  EXPECT_NEAR(per_coordinate, params.noise_variance, 0.05 * params.noise_variance);
}

TEST(Privatize, CosineModeKeepsCoefficientsReal) {
  const Index n = 16;
  const Coefficients c = make_coefficients(n, FeatureKind::kCosine);
  const PrivacyParams params = calibrate_gaussian(n, 0.375, 1.0, 1e-5);
  const PrivatizedCoefficients gaussian = privatize(c, GaussianMechanism{params}, 9);
  EXPECT_EQ(gaussian.values.imag().cwiseAbs().maxCoeff(), 0.0);
  const PrivatizedCoefficients gamma =
      privatize(c, GammaMechanism{1.0, params.sensitivity}, 10);
  EXPECT_EQ(gamma.values.imag().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Privatize, GammaRadiusMatchesMean) {
  const Index n = 500;
  const Coefficients c = make_coefficients(n, FeatureKind::kFourier);
  const double epsilon = 0.5;
  const double sensitivity = 0.05;
  const GammaMechanism mechanism{epsilon, sensitivity};
  const double dim = 2.0 * static_cast<double>(n);
  const std::int64_t draws = 10000;
  double norm_sum = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    const PrivatizedCoefficients out = privatize(c, mechanism, static_cast<std::uint64_t>(i));
    norm_sum += (out.values - c.values).norm();
  }
  const double expected = dim / mechanism.rate();
  EXPECT_NEAR(norm_sum / static_cast<double>(draws), expected, 0.05 * expected);
}

TEST(Privatize, GaussianNoiseSmallerThanGammaNoise) {
  const Index n = 1000;
  const Coefficients c = make_coefficients(n, FeatureKind::kFourier);
  const PrivacyParams params = calibrate_gaussian(n, 0.375, 1.0, 1e-5);
  const GammaMechanism gamma{1.0, params.sensitivity};
  double gaussian_norm = 0.0;
  double gamma_norm = 0.0;
  const std::int64_t draws = 10000;
  for (std::int64_t i = 0; i < draws; ++i) {
    gaussian_norm +=
        (privatize(c, GaussianMechanism{params}, static_cast<std::uint64_t>(i)).values -
         c.values)
            .norm();
    gamma_norm +=
        (privatize(c, gamma, static_cast<std::uint64_t>(i) + 7777).values - c.values).norm();
  }
  EXPECT_LT(gaussian_norm, gamma_norm);
}

TEST(LinearRidge, MatchesNormalEquationsOracle) {
  Rng rng(5);
  const Index m = 40;
  const Index d = 6;
  Eigen::MatrixXd x(m, d);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  Eigen::VectorXd y(m);
  for (Index i = 0; i < m; ++i) y[i] = rng.normal();
  const double lambda = 0.05;
  const Eigen::VectorXd w = linear_ridge(x, y, lambda);
  const Eigen::MatrixXd normal =
      x.transpose() * x + static_cast<double>(m) * lambda * Eigen::MatrixXd::Identity(d, d);
  const Eigen::VectorXd residual = normal * w - x.transpose() * y;
  EXPECT_LE(residual.norm(), 1e-10 * (x.transpose() * y).norm());
}

TEST(LinearRidge, RejectsNonPositiveLambda) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(3);
  EXPECT_THROW(linear_ridge(x, y, 0.0), std::invalid_argument);
  EXPECT_THROW(dp_linear_baseline(x, y, -0.1, 0.5, 1e-5, 1), std::invalid_argument);
}

TEST(LinearBaseline, MatchedLambdaEqualsRandomFeatureSensitivity) {
  const Index n = 4000;
  const Index m = 1338;
  const double lambda = matched_linear_lambda(n, m);
  const double linear_sensitivity = 2.0 / (static_cast<double>(m) * lambda);
  EXPECT_DOUBLE_EQ(linear_sensitivity, 4.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_DOUBLE_EQ(linear_sensitivity,
                   calibrate_gaussian(n, 0.375, 1.0, 1e-5).sensitivity);
}

TEST(LinearBaseline, ZeroLabelsGiveNoiseOnlyOutput) {
  Rng rng(6);
  const Index m = 30;
  const Index d = 4;
  Eigen::MatrixXd x(m, d);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  const LinearBaseline out = dp_linear_baseline(x, Eigen::VectorXd::Zero(m), 0.1, 0.5, 1e-5, 3);
  // Ridge weights are exactly zero, so the output is the noise draw itself.
  Rng noise(3);
  const Eigen::VectorXd expected = noise.normal_vector(d, std::sqrt(out.noise_variance));
  EXPECT_EQ((out.private_weights - expected).norm(), 0.0);
}

TEST(LinearBaseline, SensitivityFormula) {
  Rng rng(7);
  Eigen::MatrixXd x(25, 3);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  Eigen::VectorXd y(25);
  for (Index i = 0; i < 25; ++i) y[i] = 0.1 * rng.normal();
  const LinearBaseline out = dp_linear_baseline(x, y, 0.2, 0.5, 1e-5, 11);
  EXPECT_DOUBLE_EQ(out.sensitivity, 2.0 / (25.0 * 0.2));
  EXPECT_NEAR(out.noise_variance,
              testing::gaussian_variance_oracle(out.sensitivity, 0.5, 1e-5), 1e-15);
}

}  // namespace
}  // namespace dprf
