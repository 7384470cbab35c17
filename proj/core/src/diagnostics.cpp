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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dprf/solvers.hpp"

namespace dprf {
namespace {

template <typename Matrix>
ConcentrationResult concentration_impl(const Matrix& a) {
  const double n = static_cast<double>(a.cols());
  const Matrix scaled = (a * a.adjoint()) / n;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(scaled);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("concentration_check: eigendecomposition failed");
  }
  const Eigen::VectorXd evals = eig.eigenvalues();
  ConcentrationResult out;
  out.lambda_min = evals(0);
  out.lambda_max = evals(evals.size() - 1);
  // ||(1/N) A A* - I|| = max |lambda - 1| for a Hermitian deviation.
  out.spectral_deviation =
      std::max(std::abs(out.lambda_min - 1.0), std::abs(out.lambda_max - 1.0));
  return out;
}

}  // namespace

ConcentrationResult concentration_check(const DesignMatrix& a) {
  if (a.kind == FeatureKind::kFourier) return concentration_impl(a.fourier);
  return concentration_impl(a.cosine);
}

namespace {

// Unit-norm-or-less labels: scale down only when the norm exceeds 1.
Eigen::VectorXd clamp_label_norm(Eigen::VectorXd y) {
  const double norm = y.norm();
  if (norm > 1.0) y /= norm;
  return y;
}

// The audit trains through the truncated pseudoinverse: neighbors with
// degenerate rows (e.g. duplicate samples) still have a well-defined
// min-norm solution that the Gram route would reject.
Eigen::VectorXcd min_norm_values(Eigen::MatrixXcd a, const Eigen::VectorXd& y) {
  DesignMatrix design;
  design.kind = FeatureKind::kFourier;
  design.fourier = std::move(a);
  return solve_min_norm(design, y, MinNormMethod::kSvd).values;
}

Eigen::MatrixXcd rows_without(const Eigen::MatrixXcd& a, Index skip) {
  Eigen::MatrixXcd out(a.rows() - 1, a.cols());
  Index r = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    if (i == skip) continue;
    out.row(r++) = a.row(i);
  }
  return out;
}

Eigen::VectorXd entries_without(const Eigen::VectorXd& y, Index skip) {
  Eigen::VectorXd out(y.size() - 1);
  Index r = 0;
  for (Index i = 0; i < y.size(); ++i) {
    if (i == skip) continue;
    out[r++] = y[i];
  }
  return out;
}

Eigen::RowVectorXcd fourier_row(const FeatureSample& features,
                                const Eigen::VectorXd& x) {
  const Eigen::VectorXd phases = features.omegas * x;
  Eigen::RowVectorXcd row(features.count());
  for (Index k = 0; k < features.count(); ++k) {
    row[k] = Complex(std::cos(phases[k]), std::sin(phases[k]));
  }
  return row;
}

}  // namespace

AuditResult sensitivity_audit(const Dataset& data, const FeatureSample& features,
                              NeighborMode mode, std::int64_t trials, double eta,
                              std::uint64_t rng_seed,
                              const ReplacementSampler& sampler) {
  if (trials < 1) throw std::invalid_argument("sensitivity_audit: trials must be >= 1");
  if (!(eta > 0.0 && eta < 0.5)) {
    throw std::invalid_argument("sensitivity_audit: eta must lie in (0, 1/2)");
  }
  if (features.kind != FeatureKind::kFourier) {
    throw std::invalid_argument("sensitivity_audit: Fourier features expected");
  }
  if (mode == NeighborMode::kSwap && !sampler) {
    throw std::invalid_argument(
        "sensitivity_audit: swap mode needs a replacement sampler");
  }
  const Index m = data.rows();
  if (mode == NeighborMode::kRemove) trials = std::min<std::int64_t>(trials, m);

  const DesignMatrix design = build_design_matrix(features, data.x);
  const Eigen::VectorXd y = clamp_label_norm(data.y);
  const Eigen::VectorXcd base = min_norm_values(design.fourier, y);

  Rng rng(rng_seed);
  AuditResult result;
  result.mode = mode;
  result.trials = trials;
  result.theoretical_bound =
      2.0 / std::sqrt(static_cast<double>(features.count()) * (1.0 - 2.0 * eta));

  for (std::int64_t t = 0; t < trials; ++t) {
    const Index j = static_cast<Index>(t % m);
    try {
      Eigen::VectorXcd neighbor;
      if (mode == NeighborMode::kRemove) {
        neighbor = min_norm_values(rows_without(design.fourier, j),
                                   clamp_label_norm(entries_without(y, j)));
      } else {
        auto [x_new, y_new] = sampler(rng);
        if (x_new.size() != features.dim()) {
          throw std::invalid_argument("sensitivity_audit: replacement dimension mismatch");
        }
        Eigen::MatrixXcd swapped = design.fourier;
        swapped.row(j) = fourier_row(features, x_new);
        Eigen::VectorXd y_swapped = y;
        // The replacement's label goes through the dataset's recorded scaling.
        y_swapped[j] = y_new / (data.provenance.l2_label ? data.provenance.label_divisor : 1.0);
        neighbor = min_norm_values(std::move(swapped), clamp_label_norm(y_swapped));
      }
      result.empirical_max =
          std::max(result.empirical_max, (base - neighbor).norm());
    } catch (const SingularSystemError&) {
      // Unresolvable neighbor; excluded from the maximum but counted.
      ++result.excluded_trials;
    }
  }
  result.violated = result.empirical_max > result.theoretical_bound;
  return result;
}

NoiseCalibrationReport noise_calibration(const MechanismSpec& mechanism,
                                         Index dimension, std::int64_t draws,
                                         double delta, std::uint64_t rng_seed) {
  if (dimension < 1) {
    throw std::invalid_argument("noise_calibration: dimension must be >= 1");
  }
  if (draws < 100) {
    throw std::invalid_argument("noise_calibration: need at least 100 draws");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("noise_calibration: delta must lie in (0, 1)");
  }

  NoiseCalibrationReport report;
  report.kind = mechanism_kind(mechanism);
  report.dimension = dimension;
  report.draws = draws;
  report.delta = delta;

  Rng rng(rng_seed);
  const double dim = static_cast<double>(dimension);
  std::vector<double> tail_stat(static_cast<std::size_t>(draws));
  double sq_sum = 0.0;
  double norm_sum = 0.0;

  if (report.kind == MechanismKind::kGaussian) {
    const PrivacyParams& params = std::get<GaussianMechanism>(mechanism).params;
    const double sigma = std::sqrt(params.noise_variance);
    for (std::int64_t i = 0; i < draws; ++i) {
      const Eigen::VectorXd z = rng.normal_vector(dimension, sigma);
      const double norm_sq = z.squaredNorm();
      sq_sum += norm_sq;
      norm_sum += std::sqrt(norm_sq);
      tail_stat[static_cast<std::size_t>(i)] = norm_sq;
    }
    report.expected_per_coordinate_variance = params.noise_variance;
    // E||z|| = sigma sqrt(2) Gamma((n+1)/2) / Gamma(n/2)
    report.expected_mean_norm =
        sigma * std::sqrt(2.0) *
        std::exp(std::lgamma((dim + 1.0) / 2.0) - std::lgamma(dim / 2.0));
    // (1 - delta) quantile of ||z||^2 against the sub-exponential reference
    // 2 log(1.25/delta_p) / ((1-2eta) eps^2) + 8 sqrt(2) sqrt(ln(1/delta)) /
    // (sqrt(N) (1-2eta) eps), with N = dimension.
    const double one_minus = 1.0 - 2.0 * params.eta;
    report.quantile_bound =
        2.0 * std::log(1.25 / params.delta_p) / (one_minus * params.epsilon * params.epsilon) +
        8.0 * std::sqrt(2.0) / (std::sqrt(dim) * one_minus * params.epsilon) *
            std::sqrt(std::log(1.0 / delta));
    std::sort(tail_stat.begin(), tail_stat.end());
    const std::size_t idx = static_cast<std::size_t>(
        std::ceil((1.0 - delta) * static_cast<double>(draws))) - 1;
    report.empirical_quantile = tail_stat[idx];
  } else {
    const GammaMechanism& gamma = std::get<GammaMechanism>(mechanism);
    const double rate = gamma.rate();
    for (std::int64_t i = 0; i < draws; ++i) {
      const double radius = rng.gamma(dim) / rate;
      // Direction is irrelevant to every reported statistic; the norm IS the
      // radius, and by symmetry E z_k^2 = R^2 / dim.
      sq_sum += radius * radius;
      norm_sum += radius;
      tail_stat[static_cast<std::size_t>(i)] = radius;
    }
    report.expected_per_coordinate_variance = (dim + 1.0) / (rate * rate);
    report.expected_mean_norm = dim / rate;
    // (1 - delta/2) quantile of ||z|| against the Chebyshev reference
    // sqrt(2 / ((1-2eta) eps^2)) (sqrt(N) + sqrt(2/delta)), reconstructing
    // 1 - 2 eta from Delta = 2/sqrt(N (1-2eta)) at N = dimension.
    const double one_minus = 4.0 / (dim * gamma.sensitivity * gamma.sensitivity);
    report.quantile_bound = std::sqrt(2.0 / (one_minus * gamma.epsilon * gamma.epsilon)) *
                            (std::sqrt(dim) + std::sqrt(2.0 / delta));
    std::sort(tail_stat.begin(), tail_stat.end());
    const std::size_t idx = static_cast<std::size_t>(
        std::ceil((1.0 - delta / 2.0) * static_cast<double>(draws))) - 1;
    report.empirical_quantile = tail_stat[idx];
  }

  report.per_coordinate_variance = sq_sum / (static_cast<double>(draws) * dim);
  report.mean_norm = norm_sum / static_cast<double>(draws);
  report.quantile_within_bound = report.empirical_quantile <= report.quantile_bound;
  return report;
}

GeneralizationBound eval_generalization_bound(Index n_features, Index m, double eta,
                                              double delta, double epsilon,
                                              double delta_p, double f_norm) {
  if (n_features < 1 || m < 1) {
    throw std::invalid_argument("eval_generalization_bound: counts must be >= 1");
  }
  if (!(eta > 0.0 && eta < 0.5)) {
    throw std::invalid_argument("eval_generalization_bound: eta must lie in (0, 1/2)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("eval_generalization_bound: delta must lie in (0, 1)");
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("eval_generalization_bound: epsilon must lie in (0, 1]");
  }
  if (!(delta_p > 0.0 && delta_p < 1.0)) {
    throw std::invalid_argument("eval_generalization_bound: delta_p must lie in (0, 1)");
  }
  if (!(f_norm > 0.0)) {
    throw std::invalid_argument("eval_generalization_bound: f_norm must be positive");
  }

  const double n = static_cast<double>(n_features);
  const double md = static_cast<double>(m);
  const double log2d = std::log(2.0 / delta);
  const double log1d = std::log(1.0 / delta);

  GeneralizationBound out;
  out.approximation_term = 14.0 * log2d / std::sqrt(n) * f_norm;
  out.estimation_term =
      (28.0 * std::pow(2.0 * md * log1d, 0.25) * log2d / std::sqrt(n * (1.0 - 2.0 * eta)) +
       std::pow(32.0 * log1d / md, 0.25) * std::sqrt(log2d)) *
      f_norm;
  out.non_private_term = out.approximation_term + out.estimation_term;

  const double prefactor =
      std::sqrt(n) * (std::sqrt((1.0 + 2.0 * eta) / md) + std::pow(2.0 * log1d / md, 0.25));
  const auto privacy_inner = [&](double denominator) {
    return 2.0 * std::log(1.25 / delta_p) / (denominator * epsilon * epsilon) +
           8.0 * std::sqrt(2.0) / (std::sqrt(n) * denominator * epsilon) * std::sqrt(log1d);
  };
  out.privacy_term = prefactor * std::sqrt(privacy_inner(1.0 - 2.0 * eta));
  out.privacy_term_relaxed = prefactor * std::sqrt(privacy_inner(1.0 - eta));
  out.total = out.non_private_term + out.privacy_term;
  out.denominator_note =
      "privacy term uses (1-2eta) denominators, consistent with the tail bound "
      "it derives from; the (1-eta) variant is reported as privacy_term_relaxed";
  return out;
}

}  // namespace dprf
