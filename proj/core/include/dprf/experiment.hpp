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

#ifndef DPRF_EXPERIMENT_HPP_
#define DPRF_EXPERIMENT_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "dprf/config.hpp"

namespace dprf {

enum class ExperimentKind {
  kCurvesVsN,
  kSampleSizeSweep,
  kRealData,
  kFairnessErg,
  kFairnessSp,
  kAudit,
  kBound,
};

ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

// A validated experiment description: the typed common fields plus the raw
// key-value map each runner draws its parameters from. Numeric parameters are
// range-checked before any work starts.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kCurvesVsN;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool svg = false;
  KeyValueConfig raw;

  // Loads a config file; `overrides` (e.g. from command-line flags) replace
  // file keys before parsing.
  static ExperimentConfig load(const std::string& path,
                               const std::map<std::string, std::string>& overrides = {});
  static ExperimentConfig from_config(KeyValueConfig raw);
};

// Executes the configured protocol, writing result CSVs, an optional SVG and
// a manifest (config echo + seed + versions + warnings) into out_dir. The
// manifest is first written with status "running" and finalized to
// "complete"; aborted runs leave it marked with the failure, so partial
// outputs are identifiable. ConfigError signals an invalid configuration,
// any other exception a runtime failure.
void run_experiment(const ExperimentConfig& config);

}  // namespace dprf

#endif  // DPRF_EXPERIMENT_HPP_
