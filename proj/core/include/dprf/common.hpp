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

#ifndef DPRF_COMMON_HPP_
#define DPRF_COMMON_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dprf {

inline constexpr const char* kVersion = "0.1.0";

using Index = Eigen::Index;
using Complex = std::complex<double>;

// Thrown by the min-norm / ridge solvers when the Gram matrix AA* fails the
// relative eigenvalue-gap check lambda_min >= tol * lambda_max.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(double lambda_min, double lambda_max, double tol)
      : std::runtime_error("Gram matrix numerically singular: lambda_min=" +
                           std::to_string(lambda_min) +
                           ", lambda_max=" + std::to_string(lambda_max) +
                           ", relative gap " +
                           std::to_string(lambda_max > 0 ? lambda_min / lambda_max
                                                         : 0.0) +
                           " below tolerance " + std::to_string(tol)),
        lambda_min_(lambda_min),
        lambda_max_(lambda_max) {}

  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

 private:
  double lambda_min_;
  double lambda_max_;
};

// Configuration / experiment-file errors; the CLI maps these to exit code 1.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dprf

#endif  // DPRF_COMMON_HPP_
