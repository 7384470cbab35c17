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

#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "dprf/common.hpp"
#include "dprf/experiment.hpp"

namespace {

struct SubcommandArgs {
  std::string config_path;
  std::string seed;
  std::string out_dir;
  bool svg = false;
};

void add_common_options(CLI::App* cmd, SubcommandArgs* args) {
  // Existence is checked by the config loader so a missing file maps to
  // exit code 1 like every other configuration error.
  cmd->add_option("config", args->config_path, "experiment config file")->required();
  cmd->add_option("--seed", args->seed, "override the config seed");
  cmd->add_option("--out", args->out_dir, "override the output directory");
  cmd->add_flag("--svg", args->svg, "also emit SVG line plots");
}

int execute(const SubcommandArgs& args, const std::string& forced_experiment) {
  std::map<std::string, std::string> overrides;
  if (!args.seed.empty()) overrides["seed"] = args.seed;
  if (!args.out_dir.empty()) overrides["out_dir"] = args.out_dir;
  if (args.svg) overrides["svg"] = "true";
  if (!forced_experiment.empty()) overrides["experiment"] = forced_experiment;

  try {
    const dprf::ExperimentConfig config = dprf::ExperimentConfig::load(args.config_path, overrides);
    dprf::run_experiment(config);
  } catch (const dprf::ConfigError& error) {
    std::fprintf(stderr, "config error: %s\n", error.what());
    return 1;
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentially private random feature regression experiments"};
  app.require_subcommand(1);

  SubcommandArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run the experiment named in the config");
  add_common_options(run, &run_args);

  SubcommandArgs audit_args;
  CLI::App* audit = app.add_subcommand(
      "audit", "concentration, sensitivity and noise-calibration diagnostics");
  add_common_options(audit, &audit_args);

  SubcommandArgs bound_args;
  CLI::App* bound =
      app.add_subcommand("bound", "tabulate the closed-form generalization bound");
  add_common_options(bound, &bound_args);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return execute(run_args, "");
  if (audit->parsed()) return execute(audit_args, "audit");
  if (bound->parsed()) return execute(bound_args, "bound");
  return 0;
}
