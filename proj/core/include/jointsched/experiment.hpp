/* Copyright 2026 The jointsched Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jointsched/error.hpp"
#include "jointsched/planners.hpp"
#include "jointsched/profile.hpp"
#include "jointsched/simulator.hpp"
#include "jointsched/types.hpp"

namespace jointsched {

struct ExperimentConfig {
  // Either a workload file or a generator preset.
  std::optional<std::filesystem::path> workload_path;
  std::string preset = "wikitext_mirror";
  int nodes = 1;
  std::uint64_t seed = 7;

  std::vector<PlannerSpec> planners;
  std::optional<std::filesystem::path> profiles_path;  // synthetic when unset
  // Defaults to a tenth of each planner's predicted makespan.
  std::optional<double> introspection_interval;
  double checkpoint_overhead = 30.0;
  SaturnOptions saturn;
};

struct PlannerOutcome {
  PlannerSpec spec;
  std::optional<SimReport> report;
  std::optional<Errc> error;
  std::string message;
};

struct ExperimentResult {
  std::string label;
  Workload workload;
  ProfileTable table;
  std::vector<PlannerOutcome> outcomes;  // in config order

  bool ok() const;
  std::vector<SimReport> reports() const;
};

Workload experiment_workload(const ExperimentConfig& config);
ProfileTable experiment_profiles(const ExperimentConfig& config, const Workload& workload);

// Plans with `spec`, simulates (replanning with the same planner when it
// uses introspection) and checks the report invariants.
SimReport run_planner(const Workload& workload, const ProfileTable& table,
                      const PlannerSpec& spec, const ExperimentConfig& config);

// Workload and profile errors propagate; a failing planner is recorded in
// its outcome and does not stop the others. Planners run concurrently.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct OutputFormats {
  bool csv = true;
  bool json = true;
  bool markdown = true;
};

// <planner>.json, <planner>_timeline.csv, comparison.csv and comparison.md.
// Throws Error{kIoError}.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir,
                   const OutputFormats& formats = {});

}  // namespace jointsched
