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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jointsched/types.hpp"

namespace jointsched {

struct PlanEntry {
  std::size_t job = 0;  // index into Workload::jobs
  Config config;
  std::size_t node = 0;  // index into ClusterSpec::nodes
  double start_time = 0.0;
  double duration = 0.0;  // predicted runtime of this assignment

  double end_time() const { return start_time + duration; }

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

// Per-job gang assignments. Start times are relative to the moment the plan
// was produced (0 for an initial plan, the replan instant for introspection).
struct Plan {
  std::vector<PlanEntry> entries;
  double predicted_makespan = 0.0;

  const PlanEntry* find(std::size_t job) const;

  // max(start + duration) over entries.
  double span() const;

  friend bool operator==(const Plan&, const Plan&) = default;
};

// A reserved block of GPUs on a node over [start, end).
struct Occupation {
  std::size_t node = 0;
  int gpus = 0;
  double start = 0.0;
  double end = 0.0;
};

// Event sweep over occupations: intervals are half-open, so releases at t
// are applied before acquisitions at t. Returns the first overloaded node
// (if any).
std::optional<std::size_t> find_capacity_violation(std::span<const Occupation> blocks,
                                                   const ClusterSpec& cluster);

// Throws Error{kInvalidPlan} unless `plan` assigns each job in `jobs` exactly
// once to a node able to host its config, and Error{kCapacityViolation} if
// the per-node sweep ever exceeds capacity.
void check_plan(const Plan& plan, const Workload& workload, std::span<const std::size_t> jobs);

// Same as above for a plan covering every job of the workload.
void check_plan(const Plan& plan, const Workload& workload);

}  // namespace jointsched
