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
#include <optional>
#include <string>
#include <string_view>

#include "jointsched/milp.hpp"
#include "jointsched/plan.hpp"
#include "jointsched/schedule_builder.hpp"

namespace jointsched {

enum class PlannerKind { kSaturn, kCurrentPractice, kRandom, kOptimus, kOptimusDynamic };

struct PlannerSpec {
  PlannerKind kind = PlannerKind::kSaturn;
  std::uint64_t seed = 0;  // only meaningful for kRandom

  friend bool operator==(const PlannerSpec&, const PlannerSpec&) = default;
};

// Machine name ("saturn", "current-practice", "random", "optimus",
// "optimus-dynamic") and display name ("Current Practice", ...).
std::string_view planner_name(PlannerKind kind);
std::string_view planner_display_name(PlannerKind kind);
// Accepts a machine name, optionally "random:<seed>".
std::optional<PlannerSpec> parse_planner(std::string_view text, std::uint64_t default_seed);

// Planners that re-solve on introspection ticks.
bool uses_introspection(PlannerKind kind);

struct SaturnOptions {
  milp::DeltaOptions delta;
  milp::BranchAndBoundOptions search;
  // Node budget when replanning mid-run; the running plan stays in force
  // unless the search finds something better.
  std::int64_t replan_node_limit = 100;
};

struct SaturnDiagnostics {
  double delta = 0.0;
  int horizon = 0;
  std::size_t variables = 0;
  milp::Solution solution;
  Plan decoded;  // grid-aligned plan straight from the solver
};

// Solves the joint program, decodes it and left-shifts the decoded plan onto
// exact runtimes (never delaying any job past its decoded slot).
Plan plan_saturn(const PlanningInput& input, const SaturnOptions& options = {},
                 SaturnDiagnostics* diagnostics = nullptr);

// One job per node at a time, full-node gangs, jobs chained in id order on
// the earliest-available node.
Plan plan_current_practice(const PlanningInput& input);

// Uniform random feasible config per job, random submission order, earliest
// fit list scheduling. Deterministic in `seed`.
Plan plan_random(const PlanningInput& input, std::uint64_t seed);

// best_runtime(g) - best_runtime(g + 1), clamped at 0; 0 when g + 1 GPUs are
// unusable.
double optimus_marginal_gain(const LatencyIndex& index, std::size_t job, int gpus,
                             std::int64_t remaining_batches);

// FIFO waves with greedy one-GPU-at-a-time growth by marginal gain.
Plan plan_optimus(const PlanningInput& input);

Plan make_plan(const PlannerSpec& spec, const PlanningInput& input,
               const SaturnOptions& saturn = {});

}  // namespace jointsched
