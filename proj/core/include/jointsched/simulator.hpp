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
#include <queue>
#include <vector>

#include "jointsched/plan.hpp"
#include "jointsched/planners.hpp"
#include "jointsched/profile.hpp"
#include "jointsched/replan_context.hpp"
#include "jointsched/types.hpp"

namespace jointsched {

struct SimOptions {
  double introspection_interval = 0.0;  // R; 0 disables replanning
  double checkpoint_overhead = 30.0;    // rho
  std::optional<PlannerSpec> replanner;
  SaturnOptions saturn;
};

enum class SegmentKind { kRun, kCheckpoint };

struct Segment {
  SegmentKind kind = SegmentKind::kRun;
  Config config;
  std::size_t node = 0;
  double start = 0.0;
  double end = 0.0;
  double batches = 0.0;  // 0 for checkpoints

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct SimReport {
  PlannerKind planner = PlannerKind::kSaturn;
  std::uint64_t seed = 0;  // Random planner seed, 0 otherwise
  Provenance provenance = Provenance::kSynthetic;
  double makespan = 0.0;
  double predicted_makespan = 0.0;  // of the initial plan
  std::int64_t replan_count = 0;    // ticks at which the replanner ran
  std::int64_t plans_adopted = 0;
  std::int64_t replan_failures = 0;
  std::int64_t checkpoint_count = 0;
  double checkpoint_time_total = 0.0;
  double profiling_time_total = 0.0;
  Plan initial_plan;
  std::vector<std::vector<Segment>> timelines;  // per workload job index

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

// total - floor(batches_done), clamped at 0.
std::int64_t remaining_batches(std::int64_t total_batches, double batches_done);

// Event-driven execution of a plan. Time advances in the order
// finish/checkpoint-done, introspection tick, start; ties by job id.
class Simulation {
 public:
  Simulation(const Workload& workload, const ProfileTable& table, const Plan& plan0,
             SimOptions options);

  double clock() const { return clock_; }
  bool finished() const;

  // Processes every event at or before `t`, then moves the clock to `t`.
  void run_until(double t);
  SimReport run();

  // Unfinished jobs as the replanner sees them at the current clock.
  ReplanContext snapshot() const;

  // Follows `plan` (times relative to the clock) from now on. Running jobs
  // whose config or node changes, or whose start is pushed back, finish
  // their current batch and then checkpoint for rho while holding their GPUs.
  void apply_replan(const Plan& plan);

  // Makespan the simulation is heading for under the plan it follows.
  double projected_makespan() const;

  const SimReport& report() const { return report_; }

 private:
  enum class Phase { kPending, kRunning, kDraining, kCheckpointing, kDone };
  enum class EventKind { kFinish = 0, kTick = 1, kStart = 2 };

  struct JobState {
    Phase phase = Phase::kPending;
    PlanEntry next;            // assignment to follow when pending; start is absolute
    Config config;             // current config while running/draining/checkpointing
    std::size_t node = 0;
    double segment_start = 0.0;
    double segment_done = 0.0;  // batches done when the segment began
    double target = 0.0;        // batch count at which the current segment ends
    double latency = 0.0;
    double checkpoint_end = 0.0;
    double finish_time = 0.0;
    bool waiting = false;  // start time passed but GPUs were busy
    std::uint64_t version = 0;
  };

  struct Event {
    double time;
    EventKind kind;
    std::size_t rank;  // job rank by id, 0 for ticks
    std::size_t job;
    std::uint64_t version;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const;
  };

  double batches_done(std::size_t job) const;
  void push(double time, EventKind kind, std::size_t job);
  void schedule_start(std::size_t job);
  void handle(const Event& e);
  void try_start(std::size_t job);
  void retry_waiting();
  void begin_run(std::size_t job);
  void end_segment(std::size_t job);
  void tick();

  const Workload* workload_;
  ProfileTable table_;
  LatencyIndex index_;
  SimOptions options_;
  double clock_ = 0.0;
  std::vector<JobState> jobs_;
  std::vector<std::size_t> rank_;
  std::vector<int> free_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  SimReport report_;
};

SimReport simulate(const Workload& workload, const ProfileTable& table, const Plan& plan0,
                   const SimOptions& options);

// Throws Error{kInvariantViolation} if some job's run segments do not add up
// to its total batches (by count and by duration / latency), and
// Error{kCapacityViolation} if segments overload a node.
void verify_report(const SimReport& report, const Workload& workload, const ProfileTable& table);

}  // namespace jointsched
