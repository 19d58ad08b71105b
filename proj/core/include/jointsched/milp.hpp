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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jointsched/lp.hpp"
#include "jointsched/plan.hpp"
#include "jointsched/profile.hpp"
#include "jointsched/replan_context.hpp"
#include "jointsched/types.hpp"

namespace jointsched::milp {

// One binary x[j,c,n,i]: job j runs config c on node n from interval i for
// `duration` intervals.
struct Variable {
  std::size_t job = 0;  // workload job index
  Config config;
  std::size_t node = 0;
  int start = 0;
  int duration = 1;
  double runtime = 0.0;       // seconds, before rounding to intervals
  bool keeps_running = false;  // continues a running job without a checkpoint

  int completion() const { return start + duration; }
};

enum class RowKind {
  kAssign,    // each job gets exactly one variable
  kCapacity,  // per (node, interval) GPU capacity
  kMakespan,  // M >= completion of each job
  kArea,      // M >= total GPU-intervals used / cluster GPUs
};

struct Row {
  RowKind kind = RowKind::kAssign;
  std::size_t job = 0;   // kAssign, kMakespan
  std::size_t node = 0;  // kCapacity
  int interval = 0;      // kCapacity
  lp::Row row;           // column `makespan_col()` is M
};

// Time-indexed joint program. Immutable once built.
struct Instance {
  double delta = 1.0;
  int horizon = 1;
  std::vector<std::size_t> jobs;  // workload job indices, instance order
  std::vector<Variable> vars;
  std::vector<std::vector<int>> job_vars;  // per instance job, var indices
  std::vector<Row> rows;
  // Sparse columns: for each var, (row index, coefficient) in capacity rows only.
  std::vector<std::vector<std::pair<int, double>>> capacity_terms;

  // All nodes identical and nothing pinned to one of them, so relabeling
  // nodes maps schedules onto schedules.
  bool nodes_interchangeable = false;

  int makespan_col() const { return static_cast<int>(vars.size()); }
  int num_cols() const { return static_cast<int>(vars.size()) + 1; }
};

struct DeltaOptions {
  std::optional<double> delta;  // explicit interval length
  int max_intervals = 48;      // K_max
};

// delta = max(sum of best runtimes / K_max, shortest best runtime / 4).
double choose_delta(const std::vector<double>& best_runtimes, int max_intervals);

// Builds the program over every job of the workload (or, with `context`,
// over its unfinished jobs using remaining work and checkpoint charges).
// Throws Error{kNoFeasibleConfig} or Error{kHorizonOverflow}.
Instance build(const LatencyIndex& index, const DeltaOptions& options,
               const ReplanContext* context = nullptr);

// Per-variable fixing: -1 free, 0 or 1 fixed.
using Fixings = std::vector<signed char>;

struct Relaxation {
  lp::Status status = lp::Status::kInfeasible;
  double value = 0.0;  // seconds
  std::vector<double> x;  // one entry per variable
};

// LP relaxation with 0 <= x <= 1 under `fixings` (empty = none). Status
// kInfeasible signals a prunable node. Throws Error{kInvariantViolation} if
// a job is fixed to two variables.
Relaxation solve_relaxation(const Instance& instance, const Fixings& fixings = {},
                            const lp::Options& options = {});

enum class Status { kOptimal, kFeasible, kInfeasible };

std::string_view status_name(Status s);

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<int> assignment;  // per instance job: chosen variable index
  double objective = 0.0;       // seconds
  double gap = 0.0;             // relative, 0 when optimal
  std::int64_t node_count = 0;
};

struct BranchAndBoundOptions {
  double abs_gap = 1e-6;
  double rel_gap = 1e-6;
  std::int64_t node_limit = 500;
  lp::Options lp;
};

// LP-based branch and bound: most-fractional branching, depth-first dives
// with best-bound selection among open nodes, greedy-rounding incumbents.
Solution branch_and_bound(const Instance& instance, const BranchAndBoundOptions& options = {});

// Exhaustive oracle for tiny instances (<= 4 jobs, <= 5000 variables);
// throws Error{kTooLarge} otherwise. Ties keep the lexicographically first
// assignment.
Solution brute_force(const Instance& instance, const Fixings& fixings = {});

// Checks every row for an integral assignment and returns its makespan in seconds,
// or nullopt if a capacity row is violated.
std::optional<double> evaluate(const Instance& instance, const std::vector<int>& assignment);

// Plan with start = i * delta and duration = d * delta per job. Throws
// Error{kCapacityViolation} if the decoded plan fails the capacity sweep.
Plan decode_plan(const Instance& instance, const Solution& solution, const Workload& workload);

// Fixings that pin every job to the variable matching a plan entry.
Fixings fixings_from_plan(const Instance& instance, const Plan& plan);

// Human-readable dump: "min M" objective line, then one constraint per line
// using x[job,technique/g,node,i] names.
std::string dump(const Instance& instance, const Workload& workload);

}  // namespace jointsched::milp
