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

#include <span>
#include <string>

#include "jointsched/simulator.hpp"
#include "jointsched/types.hpp"

namespace jointsched {

// Fixed three-decimal rendering used by every output format.
std::string format_seconds(double seconds);

// Plan rows "job,technique,gpus,node,start_s,duration_s" and equivalents.
std::string plan_csv(const Plan& plan, const Workload& workload);
std::string plan_json(const Plan& plan, const Workload& workload, PlannerKind planner);
std::string plan_markdown(const Plan& plan, const Workload& workload, PlannerKind planner);

std::string report_json(const SimReport& report, const Workload& workload);

// Run segments as "job,technique,gpus,node,start_s,end_s,batches".
std::string timeline_csv(const SimReport& report, const Workload& workload);

// "planner,makespan_s,speedup_vs_current_practice"; rows follow planner
// order, and the speedup column is dropped when Current Practice is absent.
// Throws Error{kInvariantViolation} on an empty list.
std::string comparison_csv(std::span<const SimReport> reports);

// One row per workload, columns Current Practice, Random, Optimus,
// Optimus-Dynamic, Saturn (those present), makespans in seconds.
std::string comparison_markdown(std::span<const SimReport> reports, const std::string& label);

}  // namespace jointsched
