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

#include "dprf/solvers.hpp"

#include <cmath>
#include <stdexcept>

#include "dprf/rng.hpp"

namespace dprf {
namespace {

template <typename Matrix>
using VectorOf = Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>;

template <typename Matrix>
double relative_residual(const Matrix& a, const VectorOf<Matrix>& c,
                         const Eigen::VectorXd& y) {
  const double ynorm = y.norm();
  if (ynorm == 0.0) return 0.0;
  return (a * c - y.cast<typename Matrix::Scalar>()).norm() / ynorm;
}

template <typename Matrix>
VectorOf<Matrix> to_scalar(const Eigen::VectorXd& y) {
  return y.cast<typename Matrix::Scalar>();
}

// Solve AA* u = y through the Hermitian eigendecomposition of AA*,
// rejecting systems with a relative eigenvalue gap below tol. Returns c = A* u.
template <typename Matrix>
VectorOf<Matrix> gram_solve(const Matrix& a, const Eigen::VectorXd& y, double tol) {
  const Matrix gram = a * a.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("gram_solve: eigendecomposition failed");
  }
  const Eigen::VectorXd evals = eig.eigenvalues();
  const double lambda_min = evals(0);
  const double lambda_max = evals(evals.size() - 1);
  if (lambda_min < tol * lambda_max) {
    throw SingularSystemError(lambda_min, lambda_max, tol);
  }
  const VectorOf<Matrix> rotated = eig.eigenvectors().adjoint() * to_scalar<Matrix>(y);
  const VectorOf<Matrix> scaled =
      (rotated.array() / evals.array().template cast<typename Matrix::Scalar>()).matrix();
  return a.adjoint() * (eig.eigenvectors() * scaled);
}

template <typename Matrix>
VectorOf<Matrix> svd_solve(const Matrix& a, const Eigen::VectorXd& y, double tol) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol);
  return svd.solve(to_scalar<Matrix>(y));
}

// Ridge solve through whichever Gram side is smaller:
//   N >= m:  c = A^* (A A^* + m lambda I_m)^-1 y
//   N <  m:  c = (A^* A + m lambda I_N)^-1 A^* y
// The two coincide for lambda > 0; the shifted matrix is positive definite,
// so a Cholesky factorization suffices.
template <typename Matrix>
VectorOf<Matrix> ridge_solve(const Matrix& a, const Eigen::VectorXd& y, double shift) {
  if (a.cols() >= a.rows()) {
    Matrix gram = a * a.adjoint();
    gram.diagonal().array() += shift;
    return a.adjoint() * gram.llt().solve(to_scalar<Matrix>(y));
  }
  Matrix gram = a.adjoint() * a;
  gram.diagonal().array() += shift;
  return gram.llt().solve(a.adjoint() * to_scalar<Matrix>(y));
}

template <typename Matrix>
VectorOf<Matrix> kaczmarz_impl(const Matrix& a, const Eigen::VectorXd& y,
                               std::int64_t iterations, Rng& rng,
                               std::int64_t* skipped) {
  const Index m = a.rows();
  VectorOf<Matrix> c = VectorOf<Matrix>::Zero(a.cols());
  Eigen::VectorXd row_norms_sq(m);
  for (Index j = 0; j < m; ++j) row_norms_sq[j] = a.row(j).squaredNorm();

  for (std::int64_t t = 0; t < iterations; ++t) {
    const Index j = rng.index(m);
    if (row_norms_sq[j] == 0.0) {
      ++*skipped;  // cannot project onto a degenerate hyperplane
      continue;
    }
    const typename Matrix::Scalar residual =
        static_cast<typename Matrix::Scalar>(y[j]) - (a.row(j) * c).value();
    c += (residual / row_norms_sq[j]) * a.row(j).adjoint();
  }
  return c;
}

template <typename Matrix>
VectorOf<Matrix> sgd_impl(const Matrix& a, const Eigen::VectorXd& y,
                          double learning_rate, std::int64_t iterations, Rng& rng) {
  const Index m = a.rows();
  VectorOf<Matrix> c = VectorOf<Matrix>::Zero(a.cols());
  for (std::int64_t t = 0; t < iterations; ++t) {
    const Index j = rng.index(m);
    const typename Matrix::Scalar err =
        (a.row(j) * c).value() - static_cast<typename Matrix::Scalar>(y[j]);
    c -= (2.0 * learning_rate * err) * a.row(j).adjoint();
  }
  return c;
}

Eigen::VectorXcd embed(const Eigen::VectorXd& v) {
  return v.cast<Complex>();
}

void check_dimensions(const DesignMatrix& a, const Eigen::VectorXd& y) {
  if (a.rows() != y.size()) {
    throw std::invalid_argument("solver: label length " + std::to_string(y.size()) +
                                " does not match sample count " +
                                std::to_string(a.rows()));
  }
}

}  // namespace

Coefficients solve_min_norm(const DesignMatrix& a, const Eigen::VectorXd& y,
                            MinNormMethod method, double tol) {
  check_dimensions(a, y);
  if (a.cols() < a.rows()) {
    throw std::invalid_argument(
        "solve_min_norm: over-parametrized regime required (N >= m), got N=" +
        std::to_string(a.cols()) + " m=" + std::to_string(a.rows()));
  }

  Coefficients out;
  out.kind = a.kind;
  out.provenance = method == MinNormMethod::kGram ? Provenance::kMinNormGram
                                                  : Provenance::kMinNormSvd;
  out.meta.tolerance = tol;
  if (a.kind == FeatureKind::kFourier) {
    out.values = method == MinNormMethod::kGram
                     ? gram_solve(a.fourier, y, tol)
                     : svd_solve(a.fourier, y, tol);
    out.meta.relative_residual = relative_residual(a.fourier, out.values, y);
  } else {
    const Eigen::VectorXd c = method == MinNormMethod::kGram
                                  ? gram_solve(a.cosine, y, tol)
                                  : svd_solve(a.cosine, y, tol);
    out.meta.relative_residual = relative_residual(a.cosine, c, y);
    out.values = embed(c);
  }
  return out;
}

Coefficients solve_kaczmarz(const DesignMatrix& a, const Eigen::VectorXd& y,
                            std::int64_t iterations, std::uint64_t seed) {
  check_dimensions(a, y);
  if (iterations < 1) {
    throw std::invalid_argument("solve_kaczmarz: iterations must be >= 1");
  }
  Rng rng(seed);
  Coefficients out;
  out.kind = a.kind;
  out.provenance = Provenance::kKaczmarz;
  out.meta.iterations = iterations;
  if (a.kind == FeatureKind::kFourier) {
    out.values = kaczmarz_impl(a.fourier, y, iterations, rng, &out.meta.skipped_rows);
    out.meta.relative_residual = relative_residual(a.fourier, out.values, y);
  } else {
    const Eigen::VectorXd c =
        kaczmarz_impl(a.cosine, y, iterations, rng, &out.meta.skipped_rows);
    out.meta.relative_residual = relative_residual(a.cosine, c, y);
    out.values = embed(c);
  }
  return out;
}

Coefficients solve_sgd(const DesignMatrix& a, const Eigen::VectorXd& y,
                       const SgdOptions& options, std::uint64_t seed) {
  check_dimensions(a, y);
  const Index m = a.rows();
  const double lr = options.learning_rate.value_or(1.0 / static_cast<double>(m));
  const std::int64_t iters = options.iterations.value_or(m);
  if (lr < 0.0) {
    throw std::invalid_argument("solve_sgd: learning rate must be nonnegative");
  }
  if (iters < 1) {
    throw std::invalid_argument("solve_sgd: iterations must be >= 1");
  }

  Rng rng(seed);
  Coefficients out;
  out.kind = a.kind;
  out.provenance = Provenance::kSgd;
  out.meta.iterations = iters;
  out.meta.regularization = lr;
  if (a.kind == FeatureKind::kFourier) {
    out.values = sgd_impl(a.fourier, y, lr, iters, rng);
    out.meta.relative_residual = relative_residual(a.fourier, out.values, y);
  } else {
    const Eigen::VectorXd c = sgd_impl(a.cosine, y, lr, iters, rng);
    out.meta.relative_residual = relative_residual(a.cosine, c, y);
    out.values = embed(c);
  }
  return out;
}

Coefficients solve_ridge(const DesignMatrix& a, const Eigen::VectorXd& y,
                         double lambda, double tol) {
  check_dimensions(a, y);
  if (lambda < 0.0) {
    throw std::invalid_argument("solve_ridge: lambda must be nonnegative");
  }
  if (lambda == 0.0) {
    Coefficients out = solve_min_norm(a, y, MinNormMethod::kGram, tol);
    out.provenance = Provenance::kRidge;
    return out;
  }

  const double shift = static_cast<double>(a.rows()) * lambda;
  Coefficients out;
  out.kind = a.kind;
  out.provenance = Provenance::kRidge;
  out.meta.regularization = lambda;
  out.meta.tolerance = tol;
  if (a.kind == FeatureKind::kFourier) {
    out.values = ridge_solve(a.fourier, y, shift);
    out.meta.relative_residual = relative_residual(a.fourier, out.values, y);
  } else {
    const Eigen::VectorXd c = ridge_solve(a.cosine, y, shift);
    out.meta.relative_residual = relative_residual(a.cosine, c, y);
    out.values = embed(c);
  }
  return out;
}

}  // namespace dprf
