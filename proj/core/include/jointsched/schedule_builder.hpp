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
#include <vector>

#include "jointsched/plan.hpp"
#include "jointsched/profile.hpp"
#include "jointsched/replan_context.hpp"
#include "jointsched/types.hpp"

namespace jointsched {

// What every planner sees: the workload, its latency view, and (for
// introspection replans) the progress of unfinished jobs.
struct PlanningInput {
  const Workload& workload;
  const LatencyIndex& index;
  const ReplanContext* context = nullptr;

  // Jobs to plan, sorted by id.
  std::vector<std::size_t> jobs() const;
  std::int64_t remaining_batches(std::size_t job) const;
  const JobProgress* progress(std::size_t job) const {
    return context ? context->find(job) : nullptr;
  }
};

// Per-node reservation calendar used by list schedulers.
class NodeCalendar {
 public:
  explicit NodeCalendar(const ClusterSpec& cluster);

  void reserve(const Occupation& block);

  bool fits(std::size_t node, int gpus, double start, double duration) const;

  // Earliest t >= release at which `gpus` stay free on `node` for `duration`.
  double earliest_fit(std::size_t node, int gpus, double duration, double release) const;

  const std::vector<Occupation>& blocks() const { return blocks_; }

 private:
  const ClusterSpec* cluster_;
  std::vector<Occupation> blocks_;
};

enum class StartPolicy {
  kLeftShift,   // start as early as capacity allows, in proposal order
  kNotBefore,   // never earlier than the proposed start
};

// Converts a proposal (per-job config, node and start order) into an
// executable plan with exact durations. Under a replan context, running jobs
// whose proposed (technique, g, node) is unchanged and that start at 0 keep
// running; all other running jobs drain to a batch boundary and hold their
// old GPUs for the checkpoint before they may restart.
Plan realize_plan(const Plan& proposal, const PlanningInput& input, StartPolicy policy);

}  // namespace jointsched
