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

#include <cmath>

#include <gtest/gtest.h>

#include "dprf/rng.hpp"
#include "test_util.hpp"

namespace dprf {
namespace {

Eigen::VectorXd to_vector(std::initializer_list<double> values) {
  Eigen::VectorXd out(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) out[i++] = v;
  return out;
}

TEST(Predict, FirstBasisFunctionAtOrigin) {
  const FeatureSample f = sample_features(1, 8, 3, 1.0, FeatureKind::kFourier);
  Coefficients c;
  c.kind = FeatureKind::kFourier;
  c.values = Eigen::VectorXcd::Zero(8);
  c.values[0] = 1.0;
  const TrainedModel model = make_model(f, c);
  const Eigen::VectorXd out = predict(model, Eigen::MatrixXd::Zero(1, 3));
  EXPECT_NEAR(out[0], 1.0, 1e-14);
}

TEST(Predict, CosineConstantFeature) {
  FeatureSample f;
  f.kind = FeatureKind::kCosine;
  f.omegas = Eigen::MatrixXd::Zero(1, 2);
  f.offsets = Eigen::VectorXd::Zero(1);
  f.sigma_omega_sq = 1.0;
  Coefficients c;
  c.kind = FeatureKind::kCosine;
  c.values = Eigen::VectorXcd::Ones(1);
  const TrainedModel model = make_model(f, c);
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, -3, 4, 0, 0;
  const Eigen::VectorXd out = predict(model, x);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(out[i], 1.0, 1e-15);
}

TEST(Predict, ReproducesTrainingLabels) {
  const auto instance = testing::make_instance(3, 30, 4, 90, 40.0);
  const Coefficients c = solve_min_norm(instance.design, instance.data.y, MinNormMethod::kGram);
  const TrainedModel model = make_model(instance.features, c);
  PredictionDiagnostics diag;
  const Eigen::VectorXd out = predict(model, instance.data.x, &diag);
  EXPECT_LE((out - instance.data.y).norm(), 1e-8);
  EXPECT_LE(diag.max_imaginary_magnitude, 1e-8);
}

TEST(Predict, LengthMismatchThrows) {
  const FeatureSample f = sample_features(1, 8, 3, 1.0, FeatureKind::kFourier);
  Coefficients c;
  c.values = Eigen::VectorXcd::Zero(7);
  EXPECT_THROW(make_model(f, c), std::invalid_argument);
}

TEST(TestError, PerfectPredictionIsZero) {
  const auto instance = testing::make_instance(4, 20, 3, 60, 40.0);
  const Coefficients c = solve_min_norm(instance.design, instance.data.y, MinNormMethod::kGram);
  const TrainedModel model = make_model(instance.features, c);
  EXPECT_LE(test_error(model, instance.data), 1e-16);
}

TEST(TestError, HandValues) {
  FeatureSample f;
  f.kind = FeatureKind::kCosine;
  f.omegas = Eigen::MatrixXd::Zero(1, 1);
  f.offsets = Eigen::VectorXd::Zero(1);
  f.sigma_omega_sq = 1.0;
  Coefficients c;
  c.kind = FeatureKind::kCosine;
  c.values = Eigen::VectorXcd::Ones(1);  // constant prediction 1
  const TrainedModel model = make_model(f, c);

  // Single point, prediction 1, label 0 -> error 1.
  EXPECT_DOUBLE_EQ(test_error(model, Eigen::MatrixXd::Zero(1, 1), to_vector({0.0})), 1.0);
  // Predictions (1, 1) against labels (0, 1)... mean((1-0)^2, (1-1)^2) = 0.5.
  EXPECT_DOUBLE_EQ(test_error(model, Eigen::MatrixXd::Zero(2, 1), to_vector({0.0, 1.0})),
                   0.5);
  EXPECT_THROW(test_error(model, Eigen::MatrixXd::Zero(0, 1), Eigen::VectorXd()),
               std::invalid_argument);
}

TEST(TestError, ComplexConventionScoresSquaredModulus) {
  const FeatureSample f = sample_features(2, 4, 2, 1.0, FeatureKind::kFourier);
  Coefficients c;
  c.kind = FeatureKind::kFourier;
  c.values = Eigen::VectorXcd::Zero(4);
  c.values[0] = Complex(0.0, 1.0);  // prediction at x = 0 is the imaginary unit
  const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(1, 2);
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(1);

  const TrainedModel real_part = make_model(f, c, PredictionConvention::kRealPart);
  EXPECT_NEAR(test_error(real_part, x, y), 0.0, 1e-14);
  const TrainedModel complex_model = make_model(f, c, PredictionConvention::kComplex);
  EXPECT_NEAR(test_error(complex_model, x, y), 1.0, 1e-14);
}

TEST(ExcessiveRisk, ZeroNoiseMechanismGivesExactZero) {
  const auto instance = testing::make_instance(5, 24, 3, 72, 40.0);
  const Coefficients c = solve_min_norm(instance.design, instance.data.y, MinNormMethod::kGram);
  const TrainedModel model = make_model(instance.features, c);
  const FairnessReport report = excessive_risk_gap(
      model, GaussianMechanism{zero_noise_params(72)}, instance.data, 5, 1);
  EXPECT_EQ(report.population_excessive_risk, 0.0);
  for (const auto& [group, gap] : report.per_group_gap) EXPECT_EQ(gap, 0.0);
}

TEST(ExcessiveRisk, SingleGroupHasZeroGap) {
  const auto instance = testing::make_instance(6, 24, 3, 72, 40.0);
  const Coefficients c = solve_min_norm(instance.design, instance.data.y, MinNormMethod::kGram);
  const TrainedModel model = make_model(instance.features, c);
  const PrivacyParams params = calibrate_gaussian(72, 0.375, 1.0, 1e-5);
  const FairnessReport report =
      excessive_risk_gap(model, GaussianMechanism{params}, instance.data, 20, 2);
  ASSERT_EQ(report.per_group_gap.size(), 1u);
  EXPECT_EQ(report.per_group_gap.at("all"), 0.0);
  EXPECT_GT(report.population_excessive_risk, 0.0);
}

TEST(ExcessiveRisk, LinearModelMatchesQuadraticIdentity) {
  // E L(w + z) - L(w) = sigma^2 * mean ||x||^2 exactly for squared loss.
  Rng rng(7);
  const Index m = 50;
  const Index d = 4;
  Dataset data;
  data.x.resize(m, d);
  for (Index i = 0; i < data.x.size(); ++i) data.x.data()[i] = rng.normal();
  Eigen::VectorXd w(d);
  w << 0.5, -0.2, 0.1, 0.9;
  data.y = data.x * w;  // interpolating optimum
  const double sigma_sq = 0.04;
  const FairnessReport report = linear_excessive_risk_gap(w, sigma_sq, data, 10000, 3);
  const double expected = sigma_sq * data.x.array().square().rowwise().sum().mean();
  EXPECT_NEAR(report.population_excessive_risk, expected, 0.05 * expected);
}

TEST(ExcessiveRisk, ReportsApproximationAlongsideEstimate) {
  Rng rng(8);
  const Index m = 60;
  const Index d = 3;
  Dataset data;
  data.x.resize(m, d);
  for (Index i = 0; i < m; ++i) {
    const double scale = i < m / 2 ? 1.0 : 3.0;
    for (Index j = 0; j < d; ++j) data.x(i, j) = scale * rng.normal();
    data.groups.push_back(i < m / 2 ? "small" : "large");
  }
  data.y = Eigen::VectorXd::Zero(m);
  const Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  const double sigma_sq = 0.5;
  const FairnessReport report = linear_excessive_risk_gap(w, sigma_sq, data, 2000, 4);
  for (const auto& [group, approx] : report.per_group_gap_approx) {
    const double expected = 0.5 * sigma_sq *
                            std::abs(report.hessian_traces.at(group) -
                                     report.population_hessian_trace);
    EXPECT_DOUBLE_EQ(approx, expected);
    // The exact quadratic identity carries no 1/2: the empirical gap should
    // land near twice the reported approximation.
    EXPECT_NEAR(report.per_group_gap.at(group), 2.0 * approx, 0.2 * 2.0 * approx);
  }
}

TEST(HessianTrace, FourierFeatureMapIsOne) {
  const FeatureSample f = sample_features(9, 128, 5, 40.0, FeatureKind::kFourier);
  Rng rng(10);
  Eigen::MatrixXd x(30, 5);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = 100.0 * rng.normal();
  EXPECT_NEAR(hessian_trace_feature_map(x, f), 1.0, 1e-12);
}

TEST(HessianTrace, LinearValues) {
  Eigen::MatrixXd ring(4, 2);
  ring << 3, 0, 0, 3, -3, 0, 0, -3;  // all norms 3
  EXPECT_DOUBLE_EQ(hessian_trace_linear(ring), 9.0);
  Eigen::MatrixXd two(2, 2);
  two << 1, 0, 0, 2;
  EXPECT_DOUBLE_EQ(hessian_trace_linear(two), 2.5);
  EXPECT_THROW(hessian_trace_linear(Eigen::MatrixXd(0, 2)), std::invalid_argument);
}

TEST(KsDistance, IdenticalMultisetsGiveZero) {
  const Eigen::VectorXd p = to_vector({0.1, 0.4, 0.4, 0.9});
  EXPECT_EQ(ks_distance(p, p, 500), 0.0);
}

TEST(KsDistance, DisjointSupportsGiveOne) {
  EXPECT_EQ(ks_distance(to_vector({0.0, 0.1, 0.2}), to_vector({5.0, 5.5, 6.0}), 500), 1.0);
}

TEST(KsDistance, EnumeratedHandValue) {
  EXPECT_DOUBLE_EQ(ks_distance(to_vector({0, 0, 1, 1}), to_vector({1, 1, 1, 1}), 500), 0.5);
}

TEST(KsDistance, SymmetricAndBounded) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd p(8), q(12);
    for (Index i = 0; i < 8; ++i) p[i] = rng.normal();
    for (Index i = 0; i < 12; ++i) q[i] = rng.normal();
    const double pq = ks_distance(p, q, 500);
    EXPECT_DOUBLE_EQ(pq, ks_distance(q, p, 500));
    EXPECT_GE(pq, 0.0);
    EXPECT_LE(pq, 1.0);
  }
}

TEST(KsDistance, MatchesEnumeratedOracleOnLatticeSamples) {
  // Values on a 1/50 lattice keep every distinct value at least one grid cell
  // apart, so the grid evaluation is exact.
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const Index np = 1 + rng.index(20);
    const Index nq = 1 + rng.index(20);
    std::vector<double> p, q;
    Eigen::VectorXd pv(np), qv(nq);
    for (Index i = 0; i < np; ++i) {
      pv[i] = static_cast<double>(rng.index(51)) / 50.0;
      p.push_back(pv[i]);
    }
    for (Index i = 0; i < nq; ++i) {
      qv[i] = static_cast<double>(rng.index(51)) / 50.0;
      q.push_back(qv[i]);
    }
    EXPECT_NEAR(ks_distance(pv, qv, 500), testing::ks_oracle(p, q), 1e-12);
  }
}

TEST(KsDistance, InputValidation) {
  EXPECT_THROW(ks_distance(Eigen::VectorXd(), to_vector({1.0}), 500), std::invalid_argument);
  EXPECT_THROW(ks_distance(to_vector({1.0}), to_vector({1.0}), 1), std::invalid_argument);
}

TEST(StatisticalParity, SingleGroupIsZero) {
  std::map<std::string, Eigen::VectorXd> groups;
  groups["only"] = to_vector({1.0, 2.0, 3.0});
  EXPECT_EQ(statistical_parity(groups, 500), 0.0);
}

TEST(StatisticalParity, IdenticalOutputsGiveZero) {
  std::map<std::string, Eigen::VectorXd> groups;
  groups["a"] = to_vector({1.0, 2.0, 3.0});
  groups["b"] = to_vector({1.0, 2.0, 3.0});
  EXPECT_EQ(statistical_parity(groups, 500), 0.0);
}

TEST(StatisticalParity, ReturnsDominantPair) {
  std::map<std::string, Eigen::VectorXd> groups;
  groups["g1"] = to_vector({0.0, 0.1, 0.2});
  groups["g2"] = to_vector({0.1, 0.2, 0.3});
  groups["g3"] = to_vector({10.0, 11.0, 12.0});
  double expected = 0.0;
  for (const auto& [na, va] : groups) {
    for (const auto& [nb, vb] : groups) {
      if (na < nb) expected = std::max(expected, ks_distance(va, vb, 500));
    }
  }
  EXPECT_DOUBLE_EQ(statistical_parity(groups, 500), expected);
  EXPECT_DOUBLE_EQ(expected, ks_distance(groups["g1"], groups["g3"], 500));
}

TEST(StatisticalParity, InvariantUnderRelabeling) {
  Rng rng(13);
  std::map<std::string, Eigen::VectorXd> groups;
  for (const char* name : {"x", "y", "z"}) {
    Eigen::VectorXd v(10);
    for (Index i = 0; i < 10; ++i) v[i] = rng.normal();
    groups[name] = v;
  }
  std::map<std::string, Eigen::VectorXd> relabeled;
  relabeled["zebra"] = groups["x"];
  relabeled["apple"] = groups["y"];
  relabeled["momo"] = groups["z"];
  EXPECT_DOUBLE_EQ(statistical_parity(groups, 500), statistical_parity(relabeled, 500));
}

TEST(StatisticalParity, InvariantUnderMonotoneTransform) {
  Rng rng(14);
  std::map<std::string, Eigen::VectorXd> groups;
  std::map<std::string, Eigen::VectorXd> transformed;
  for (const char* name : {"a", "b"}) {
    Eigen::VectorXd v(15);
    for (Index i = 0; i < 15; ++i) v[i] = rng.uniform(0.0, 2.0);
    groups[name] = v;
    transformed[name] = v.array().exp().matrix();
  }
  EXPECT_NEAR(statistical_parity(groups, 500), statistical_parity(transformed, 500),
              2.0 / 500.0);
}

TEST(StatisticalParity, EmptyMapThrows) {
  EXPECT_THROW(statistical_parity({}, 500), std::invalid_argument);
}

}  // namespace
}  // namespace dprf
