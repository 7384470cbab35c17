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

#ifndef DPRF_SOLVERS_HPP_
#define DPRF_SOLVERS_HPP_

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "dprf/common.hpp"
#include "dprf/features.hpp"

namespace dprf {

enum class Provenance {
  kMinNormGram,
  kMinNormSvd,
  kKaczmarz,
  kSgd,
  kRidge,
  kPrivatized,
};

struct SolverMeta {
  std::int64_t iterations = 0;
  double regularization = 0.0;
  double relative_residual = 0.0;  // ||Ac - y|| / ||y|| (0 when y == 0)
  double tolerance = 0.0;
  std::int64_t skipped_rows = 0;  // zero rows skipped by Kaczmarz
};

// Trained coefficient vector. Stored as complex throughout; cosine-mode
// systems are solved in real arithmetic and embedded, so their imaginary
// parts are exactly zero.
struct Coefficients {
  Eigen::VectorXcd values;
  Provenance provenance = Provenance::kMinNormGram;
  FeatureKind kind = FeatureKind::kFourier;
  SolverMeta meta;

  Index size() const { return values.size(); }
};

enum class MinNormMethod { kGram, kSvd };

// Minimum-norm interpolant of A c = y in the over-parametrized regime
// (N >= m). Gram solves c = A*(AA*)^-1 y through the Hermitian
// eigendecomposition of AA* and rejects systems whose relative eigenvalue
// gap lambda_min / lambda_max falls below tol (SingularSystemError). Svd
// computes the pseudoinverse solution with singular values below
// tol * sigma_max truncated.
Coefficients solve_min_norm(const DesignMatrix& a, const Eigen::VectorXd& y,
                            MinNormMethod method, double tol = 1e-10);

// Randomized Kaczmarz from the zero vector: project onto one row's
// hyperplane per step, rows chosen uniformly at random. For Fourier design
// matrices every row has norm sqrt(N), so uniform selection coincides with
// the squared-row-norm distribution of the classical analysis. Zero rows are
// skipped and counted in meta.skipped_rows.
Coefficients solve_kaczmarz(const DesignMatrix& a, const Eigen::VectorXd& y,
                            std::int64_t iterations, std::uint64_t seed);

struct SgdOptions {
  std::optional<double> learning_rate;   // default 1/m
  std::optional<std::int64_t> iterations;  // default m
};

// One-sample SGD on the squared loss from zero initialization; reference
// training settings are batch size 1, learning rate 1/m, m iterations.
Coefficients solve_sgd(const DesignMatrix& a, const Eigen::VectorXd& y,
                       const SgdOptions& options, std::uint64_t seed);

// Ridge solution c = A*(AA* + m lambda I)^-1 y of
//   min (1/m)||Ac - y||^2 + lambda ||c||^2,
// solved through whichever Gram side is smaller, so it also covers the
// under-parametrized regime N < m (where the lambda -> 0 limit is the
// least-squares pseudoinverse solution). lambda == 0 falls back to the Gram
// min-norm path (and its singularity check).
Coefficients solve_ridge(const DesignMatrix& a, const Eigen::VectorXd& y,
                         double lambda, double tol = 1e-10);

}  // namespace dprf

#endif  // DPRF_SOLVERS_HPP_
