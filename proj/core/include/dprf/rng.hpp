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

#ifndef DPRF_RNG_HPP_
#define DPRF_RNG_HPP_

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dprf {

// Seeded random source used everywhere in the library. The engine is
// mt19937_64 (bit-exact across platforms); all distributions are implemented
// here rather than taken from <random> so that sampled streams are identical
// for a given seed regardless of the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  // Uniform index in [0, n). n must be positive.
  Eigen::Index index(Eigen::Index n);

  // Standard normal via Box-Muller; the second deviate of each pair is cached.
  double normal();
  double normal(double mean, double stddev);

  // Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang squeeze).
  double gamma(double shape);

  Eigen::VectorXd normal_vector(Eigen::Index n, double stddev = 1.0);

  // Uniform direction on the unit sphere of R^n.
  Eigen::VectorXd sphere_direction(Eigen::Index n);

  // Child stream derived from the original seed and a stream id; independent
  // of how much of the parent stream has been consumed. Used to hand each
  // repetition of an experiment its own deterministic source.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// 64-bit seed mixer (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace dprf

#endif  // DPRF_RNG_HPP_
