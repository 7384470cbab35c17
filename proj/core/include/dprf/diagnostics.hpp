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

#ifndef DPRF_DIAGNOSTICS_HPP_
#define DPRF_DIAGNOSTICS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "dprf/common.hpp"
#include "dprf/data.hpp"
#include "dprf/features.hpp"
#include "dprf/privacy.hpp"
#include "dprf/rng.hpp"

namespace dprf {

struct ConcentrationResult {
  double spectral_deviation = 0.0;  // ||(1/N) A A* - I_m||_2
  double lambda_min = 0.0;          // extreme eigenvalues of (1/N) A A*
  double lambda_max = 0.0;
};

// Hermitian eigendecomposition of (1/N) A A*.
ConcentrationResult concentration_check(const DesignMatrix& a);

enum class NeighborMode { kSwap, kRemove };

struct AuditResult {
  double empirical_max = 0.0;
  double theoretical_bound = 0.0;  // 2 / sqrt(N (1 - 2 eta))
  std::int64_t trials = 0;
  NeighborMode mode = NeighborMode::kSwap;
  bool violated = false;  // empirical_max > theoretical_bound
  std::int64_t excluded_trials = 0;  // neighbors with singular Gram, skipped
};

// Draws a replacement sample (x, y) "from the same distribution" for swap
// mode; synthetic audits resample from the generator, CSV audits should draw
// from a held-out row pool.
using ReplacementSampler = std::function<std::pair<Eigen::VectorXd, double>(Rng&)>;

// Brute-force l2-sensitivity audit of the min-norm training map (solved via
// the truncated pseudoinverse, so degenerate neighbors such as duplicated
// rows stay well-defined). The random features stay fixed across D and its
// neighbors (sensitivity ranges over datasets, not feature draws, even
// though the bound's probability statement is over the feature draw). Labels
// are rescaled to ||y||_2 <= 1 after each removal/swap so the bound's
// precondition holds on both sides. Remove mode enumerates each of the m
// neighbors at most once (trials capped at m).
AuditResult sensitivity_audit(const Dataset& data, const FeatureSample& features,
                              NeighborMode mode, std::int64_t trials, double eta,
                              std::uint64_t rng_seed,
                              const ReplacementSampler& sampler = nullptr);

// Moment and tail statistics of a mechanism's noise against the closed-form
// reference bounds. `dimension` is the real dimension of the sampled vectors
// and plays the role of N in the reference formulas. Gaussian draws report
// the empirical (1 - delta) quantile of ||z||^2; Gamma draws the
// (1 - delta/2) quantile of ||z||_2.
struct NoiseCalibrationReport {
  MechanismKind kind = MechanismKind::kGaussian;
  Index dimension = 0;
  std::int64_t draws = 0;
  double delta = 0.0;
  double per_coordinate_variance = 0.0;
  double expected_per_coordinate_variance = 0.0;
  double mean_norm = 0.0;
  double expected_mean_norm = 0.0;
  double empirical_quantile = 0.0;
  double quantile_bound = 0.0;
  bool quantile_within_bound = false;
};

NoiseCalibrationReport noise_calibration(const MechanismSpec& mechanism,
                                         Index dimension, std::int64_t draws,
                                         double delta, std::uint64_t rng_seed);

// Closed-form generalization error bound of the private model: the three
// non-private summands scaled by ||f||_rho plus the privacy term. Published
// renderings of the privacy term disagree on the denominators ((1 - eta) vs
// (1 - 2 eta)); the (1 - 2 eta) version, consistent with the tail bound it
// derives from, is used for `privacy_term` and the other variant is reported
// alongside, with `denominator_note` flagging the discrepancy.
struct GeneralizationBound {
  double approximation_term = 0.0;  // 14 log(2/delta) / sqrt(N) * ||f||
  double estimation_term = 0.0;     // remaining two non-private summands
  double non_private_term = 0.0;
  double privacy_term = 0.0;
  double privacy_term_relaxed = 0.0;  // (1 - eta) denominators
  double total = 0.0;                 // non_private_term + privacy_term
  std::string denominator_note;
};

GeneralizationBound eval_generalization_bound(Index n_features, Index m, double eta,
                                              double delta, double epsilon,
                                              double delta_p, double f_norm);

}  // namespace dprf

#endif  // DPRF_DIAGNOSTICS_HPP_
