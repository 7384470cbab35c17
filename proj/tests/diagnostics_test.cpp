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

#include "dprf/diagnostics.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "dprf/solvers.hpp"
#include "test_util.hpp"

namespace dprf {
namespace {

TEST(ConcentrationCheck, SingleRowDeviationIsZero) {
  const FeatureSample f = sample_features(1, 64, 3, 40.0, FeatureKind::kFourier);
  Eigen::MatrixXd x(1, 3);
  x << 0.4, -0.2, 1.0;
  const ConcentrationResult result = concentration_check(build_design_matrix(f, x));
  EXPECT_NEAR(result.spectral_deviation, 0.0, 1e-12);
}

TEST(ConcentrationCheck, ScaledIdentityDeviationIsZero) {
  const Index m = 5;
  const Index n = 25;
  DesignMatrix a;
  a.kind = FeatureKind::kFourier;
  a.fourier = std::sqrt(static_cast<double>(n)) * Eigen::MatrixXcd::Identity(m, n);
  const ConcentrationResult result = concentration_check(a);
  EXPECT_NEAR(result.spectral_deviation, 0.0, 1e-12);
  EXPECT_NEAR(result.lambda_min, 1.0, 1e-12);
  EXPECT_NEAR(result.lambda_max, 1.0, 1e-12);
}

TEST(ConcentrationCheck, EigenvalueSandwich) {
  const auto instance = testing::make_instance(2, 25, 6, 400, 4.0);
  const ConcentrationResult result = concentration_check(instance.design);
  EXPECT_LE(std::abs(result.lambda_min - 1.0), result.spectral_deviation + 1e-15);
  EXPECT_LE(std::abs(result.lambda_max - 1.0), result.spectral_deviation + 1e-15);
  EXPECT_GE(result.spectral_deviation, 0.0);
}

TEST(ConcentrationCheck, WellConditionedInstanceHasSmallDeviation) {
  // Over-parametrized draw with the variance precondition met; deviation
  // should sit well below the 2*eta = 1 target.
  const auto instance = testing::make_instance(3, 20, 30, 2000, 1.0);
  const ConcentrationResult result = concentration_check(instance.design);
  EXPECT_LE(result.spectral_deviation, 1.0);
}

TEST(SensitivityAudit, SwapWithTwinGivesZeroDifference) {
  Dataset data = gen_synthetic(4, 10, 3, TestFunction::kF1, true);
  data.x.row(0) = data.x.row(1);
  data.y[0] = data.y[1];
  const FeatureSample f = sample_features(5, 200, 3, 40.0, FeatureKind::kFourier);
  // The sampler returns row 0's twin (pre-normalization label value).
  const double raw_label = data.y[0] * data.provenance.label_divisor;
  const Eigen::VectorXd twin = data.x.row(0).transpose();
  const ReplacementSampler sampler = [&](Rng&) { return std::make_pair(twin, raw_label); };
  const AuditResult result =
      sensitivity_audit(data, f, NeighborMode::kSwap, 1, 0.375, 6, sampler);
  // Identical datasets: the difference is pure floating-point noise, far
  // below the sensitivity bound.
  EXPECT_LE(result.empirical_max, 1e-10);
  EXPECT_FALSE(result.violated);
}

TEST(SensitivityAudit, RemoveModeEnumeratesAllNeighbors) {
  const Dataset data = gen_synthetic(7, 2, 4, TestFunction::kF1, true);
  const FeatureSample f = sample_features(8, 64, 4, 40.0, FeatureKind::kFourier);
  const AuditResult result = sensitivity_audit(data, f, NeighborMode::kRemove, 100, 0.375, 9);
  EXPECT_EQ(result.trials, 2);
  EXPECT_EQ(result.mode, NeighborMode::kRemove);
}

TEST(SensitivityAudit, WellConditionedInstanceRespectsBound) {
  const Dataset data = gen_synthetic(10, 20, 30, TestFunction::kF1, true);
  const FeatureSample f = sample_features(11, 2000, 30, 1.0, FeatureKind::kFourier);
  Rng helper(12);
  const ReplacementSampler sampler = [](Rng& rng) {
    Eigen::VectorXd x(30);
    for (Index i = 0; i < 30; ++i) x[i] = rng.normal();
    return std::make_pair(x, evaluate_test_function(TestFunction::kF1, x));
  };
  const AuditResult swap =
      sensitivity_audit(data, f, NeighborMode::kSwap, 25, 0.375, 13, sampler);
  EXPECT_NEAR(swap.theoretical_bound, 4.0 / std::sqrt(2000.0), 1e-15);
  EXPECT_FALSE(swap.violated);
  const AuditResult remove = sensitivity_audit(data, f, NeighborMode::kRemove, 20, 0.375, 14);
  EXPECT_FALSE(remove.violated);
  EXPECT_LE(remove.empirical_max, remove.theoretical_bound);
}

TEST(SensitivityAudit, SwapModeNeedsSampler) {
  const Dataset data = gen_synthetic(15, 5, 2, TestFunction::kF1, true);
  const FeatureSample f = sample_features(16, 32, 2, 40.0, FeatureKind::kFourier);
  EXPECT_THROW(sensitivity_audit(data, f, NeighborMode::kSwap, 5, 0.375, 17),
               std::invalid_argument);
  EXPECT_THROW(sensitivity_audit(data, f, NeighborMode::kRemove, 5, 0.5, 17),
               std::invalid_argument);
}

TEST(NoiseCalibration, ZeroVarianceGivesZeroStatistics) {
  const NoiseCalibrationReport report = noise_calibration(
      GaussianMechanism{zero_noise_params(50)}, 50, 500, 0.1, 1);
  EXPECT_EQ(report.per_coordinate_variance, 0.0);
  EXPECT_EQ(report.mean_norm, 0.0);
  EXPECT_EQ(report.empirical_quantile, 0.0);
  EXPECT_TRUE(report.quantile_within_bound);
}

TEST(NoiseCalibration, GaussianMomentsMatch) {
  const PrivacyParams params = calibrate_gaussian(100, 0.375, 0.5, 1e-5);
  const NoiseCalibrationReport report =
      noise_calibration(GaussianMechanism{params}, 100, 10000, 0.1, 2);
  EXPECT_NEAR(report.per_coordinate_variance, params.noise_variance,
              0.05 * params.noise_variance);
  EXPECT_NEAR(report.mean_norm, report.expected_mean_norm, 0.05 * report.expected_mean_norm);
}

TEST(NoiseCalibration, GammaMomentsMatch) {
  const GammaMechanism mechanism{0.5, 0.1};
  const Index dim = 1000;
  const NoiseCalibrationReport report = noise_calibration(mechanism, dim, 10000, 0.1, 3);
  const double expected_mean = static_cast<double>(dim) / mechanism.rate();
  EXPECT_NEAR(report.mean_norm, expected_mean, 0.05 * expected_mean);
  EXPECT_NEAR(report.per_coordinate_variance, report.expected_per_coordinate_variance,
              0.05 * report.expected_per_coordinate_variance);
}

TEST(NoiseCalibration, BoundFormulasMatchHandEvaluation) {
  const PrivacyParams params = calibrate_gaussian(1000, 0.375, 1.0, 1e-5);
  const NoiseCalibrationReport gaussian =
      noise_calibration(GaussianMechanism{params}, 1000, 200, 0.1, 4);
  const double expected_gaussian =
      2.0 * std::log(1.25e5) / 0.25 +
      8.0 * std::sqrt(2.0) / (std::sqrt(1000.0) * 0.25) * std::sqrt(std::log(10.0));
  EXPECT_NEAR(gaussian.quantile_bound, expected_gaussian, 1e-9);

  const NoiseCalibrationReport gamma = noise_calibration(
      GammaMechanism{1.0, params.sensitivity}, 1000, 200, 0.1, 5);
  const double expected_gamma =
      std::sqrt(2.0 / 0.25) * (std::sqrt(1000.0) + std::sqrt(20.0));
  EXPECT_NEAR(gamma.quantile_bound, expected_gamma, 1e-9);
}

TEST(NoiseCalibration, InputValidation) {
  const PrivacyParams params = calibrate_gaussian(10, 0.375, 1.0, 1e-5);
  EXPECT_THROW(noise_calibration(GaussianMechanism{params}, 0, 500, 0.1, 1),
               std::invalid_argument);
  EXPECT_THROW(noise_calibration(GaussianMechanism{params}, 10, 99, 0.1, 1),
               std::invalid_argument);
  EXPECT_THROW(noise_calibration(GaussianMechanism{params}, 10, 500, 1.0, 1),
               std::invalid_argument);
}

TEST(GeneralizationBound, MonotoneDecreasingInEpsilon) {
  double previous = eval_generalization_bound(10000, 1000, 0.375, 0.05, 0.1, 1e-5, 1.0).total;
  for (double eps : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const double current =
        eval_generalization_bound(10000, 1000, 0.375, 0.05, eps, 1e-5, 1.0).total;
    EXPECT_LT(current, previous);
    previous = current;
  }
}

TEST(GeneralizationBound, ReferencePointMatchesIndependentTranscription) {
  const GeneralizationBound bound =
      eval_generalization_bound(10000, 1000, 0.375, 0.05, 1.0, 1e-5, 1.0);
  // Frozen from a high-precision evaluation of the printed formula.
  EXPECT_NEAR(bound.total, 331.166426077901, 1e-9);
  EXPECT_NEAR(bound.non_private_term, 19.759791333388, 1e-9);
  EXPECT_NEAR(bound.total,
              testing::generalization_bound_oracle(10000, 1000, 0.375, 0.05, 1.0, 1e-5, 1.0),
              1e-9);
  EXPECT_GT(bound.privacy_term, bound.privacy_term_relaxed);
  EXPECT_FALSE(bound.denominator_note.empty());
}

TEST(GeneralizationBound, DoublingNScalesApproximationTermBySqrtHalf) {
  const GeneralizationBound a =
      eval_generalization_bound(1 << 13, 1000, 0.375, 0.05, 1.0, 1e-5, 1.0);
  const GeneralizationBound b =
      eval_generalization_bound(1 << 14, 1000, 0.375, 0.05, 1.0, 1e-5, 1.0);
  EXPECT_NEAR(b.approximation_term / a.approximation_term, 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(GeneralizationBound, NonPrivateTermDecreasesInN) {
  double previous = eval_generalization_bound(1 << 10, 1000, 0.375, 0.05, 1.0, 1e-5, 1.0)
                        .non_private_term;
  for (int k = 11; k <= 20; ++k) {
    const GeneralizationBound bound =
        eval_generalization_bound(Index{1} << k, 1000, 0.375, 0.05, 1.0, 1e-5, 1.0);
    EXPECT_LT(bound.non_private_term, previous);
    previous = bound.non_private_term;
  }
}

TEST(GeneralizationBound, DomainValidation) {
  EXPECT_THROW(eval_generalization_bound(0, 10, 0.375, 0.05, 1.0, 1e-5, 1.0),
               std::invalid_argument);
  EXPECT_THROW(eval_generalization_bound(10, 10, 0.5, 0.05, 1.0, 1e-5, 1.0),
               std::invalid_argument);
  EXPECT_THROW(eval_generalization_bound(10, 10, 0.375, 0.0, 1.0, 1e-5, 1.0),
               std::invalid_argument);
  EXPECT_THROW(eval_generalization_bound(10, 10, 0.375, 0.05, 2.0, 1e-5, 1.0),
               std::invalid_argument);
  EXPECT_THROW(eval_generalization_bound(10, 10, 0.375, 0.05, 1.0, 1e-5, 0.0),
               std::invalid_argument);
}

}  // namespace
}  // namespace dprf
