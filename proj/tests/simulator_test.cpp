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

#include <gtest/gtest.h>

#include "jointsched/error.hpp"
#include "jointsched/generator.hpp"
#include "jointsched/simulator.hpp"
#include "support/support.hpp"

namespace jointsched {
namespace {

using testing::cluster;
using testing::job;
using testing::technique;
using testing::two_job_workload;

struct Profiled {
  explicit Profiled(Workload w)
      : workload(std::move(w)),
        table(build_profile_table(workload, SyntheticExecutor(workload.cluster))),
        index(workload, table) {}
  PlanningInput input() const { return {workload, index, nullptr}; }

  Workload workload;
  ProfileTable table;
  LatencyIndex index;
};

SimOptions no_replan(double rho = 30.0) {
  SimOptions o;
  o.checkpoint_overhead = rho;
  return o;
}

int count(const std::vector<Segment>& segs, SegmentKind kind) {
  return static_cast<int>(std::count_if(segs.begin(), segs.end(),
                                        [&](const Segment& s) { return s.kind == kind; }));
}

TEST(RemainingBatches, FloorsCompletedBatches) {
  EXPECT_EQ(remaining_batches(500, 0.0), 500);
  // 50 s at 0.5 s per batch.
  EXPECT_EQ(remaining_batches(500, 50.0 / 0.5), 400);
  EXPECT_EQ(remaining_batches(500, 100.7), 400);
  EXPECT_EQ(remaining_batches(500, 500.0), 0);
}

TEST(Simulate, SingleJobRunsVerbatim) {
  Profiled s(Workload{{job("a", 100, 1.0)}, cluster(1, 1), {technique("ddp", Archetype::kReplicated)}});
  const Plan p = plan_saturn(s.input());
  const SimReport r = simulate(s.workload, s.table, p, no_replan());
  EXPECT_NEAR(r.makespan, 100.0, 1e-9);
  EXPECT_EQ(r.replan_count, 0);
  ASSERT_EQ(r.timelines[0].size(), 1u);
  EXPECT_EQ(r.timelines[0][0].batches, 100.0);
  EXPECT_NO_THROW(verify_report(r, s.workload, s.table));
}

TEST(Simulate, TwoJobExampleUnderCurrentPracticeAndSaturn) {
  Profiled s(two_job_workload());
  SaturnOptions opts;
  opts.delta.delta = 1.0;
  EXPECT_NEAR(simulate(s.workload, s.table, plan_current_practice(s.input()), no_replan()).makespan,
              12.0, 1e-9);
  EXPECT_NEAR(simulate(s.workload, s.table, plan_saturn(s.input(), opts), no_replan()).makespan,
              10.0, 1e-9);
}

TEST(Simulate, WaitingJobStartsWhenGpusFree) {
  // Second job is planned at t=0 but the first holds the node until t=6.
  Profiled s(two_job_workload());
  Plan p;
  p.entries = {{0, {0, 2}, 0, 0.0, 6.0}, {1, {0, 2}, 0, 6.0, 6.0}};
  p.predicted_makespan = 12.0;
  const SimReport r = simulate(s.workload, s.table, p, no_replan());
  EXPECT_NEAR(r.timelines[1][0].start, 6.0, 1e-9);
  EXPECT_NEAR(r.makespan, 12.0, 1e-9);
}

TEST(Simulate, IntrospectionWithExactProfilesDoesNotRegress) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Profiled s(random_workload(seed));
    SaturnDiagnostics diag;
    const Plan p = plan_saturn(s.input(), {}, &diag);
    SimOptions o;
    o.checkpoint_overhead = 0.0;
    o.introspection_interval = p.predicted_makespan / 10;
    o.replanner = PlannerSpec{PlannerKind::kSaturn, 0};
    const SimReport r = simulate(s.workload, s.table, p, o);
    EXPECT_GT(r.replan_count, 0);
    EXPECT_LE(r.makespan, p.predicted_makespan + diag.delta) << seed;
    EXPECT_NO_THROW(verify_report(r, s.workload, s.table));
  }
}

TEST(Simulate, DeterministicReports) {
  Profiled s(generate_workload("wikitext_mirror", 1, 7));
  const Plan p = plan_optimus(s.input());
  SimOptions o;
  o.introspection_interval = p.predicted_makespan / 10;
  o.replanner = PlannerSpec{PlannerKind::kOptimusDynamic, 0};
  const SimReport a = simulate(s.workload, s.table, p, o);
  const SimReport b = simulate(s.workload, s.table, p, o);
  EXPECT_EQ(a, b);
  EXPECT_NO_THROW(verify_report(a, s.workload, s.table));
}

TEST(Simulate, RejectsNegativeOptions) {
  Profiled s(two_job_workload());
  SimOptions o;
  o.checkpoint_overhead = -1.0;
  try {
    simulate(s.workload, s.table, plan_current_practice(s.input()), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInvariantViolation);
  }
}

TEST(ApplyReplan, IdenticalPlanIsAFixedPoint) {
  Profiled s(two_job_workload());
  const Plan p = plan_current_practice(s.input());
  Simulation sim(s.workload, s.table, p, no_replan());
  sim.run_until(3.0);
  Plan same = p;
  // a keeps running with 3 s left; b still starts at t=6.
  same.entries[0].duration = 3.0;
  same.entries[1].start_time = 3.0;
  sim.apply_replan(same);
  const SimReport r = sim.run();
  EXPECT_EQ(r.checkpoint_count, 0);
  EXPECT_NEAR(r.makespan, 12.0, 1e-9);
}

TEST(ApplyReplan, GrowingAJobChargesOneCheckpoint) {
  Profiled s(Workload{{job("a", 100, 1.0)}, cluster(1, 4), {technique("ddp", Archetype::kReplicated)}});
  Plan p;
  p.entries = {{0, {0, 2}, 0, 0.0, 50.0}};
  p.predicted_makespan = 50.0;
  Simulation sim(s.workload, s.table, p, no_replan(7.0));
  sim.run_until(10.2);  // mid-batch: 20.4 batches done at 0.5 s each
  Plan grow;
  grow.entries = {{0, {0, 4}, 0, 0.0, 0.0}};
  sim.apply_replan(grow);
  const SimReport r = sim.run();
  EXPECT_EQ(r.checkpoint_count, 1);
  EXPECT_NEAR(r.checkpoint_time_total, 7.0, 1e-9);
  const auto& t = r.timelines[0];
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].kind, SegmentKind::kRun);
  EXPECT_EQ(t[0].batches, 21.0);
  EXPECT_NEAR(t[0].end, 10.5, 1e-9);
  EXPECT_EQ(t[1].kind, SegmentKind::kCheckpoint);
  EXPECT_NEAR(t[1].end - t[1].start, 7.0, 1e-9);
  EXPECT_EQ(t[2].config.gpus, 4);
  EXPECT_NEAR(t[2].start, 17.5, 1e-9);
  EXPECT_EQ(t[2].batches, 79.0);
  EXPECT_NEAR(r.makespan, 17.5 + 79 * 0.25, 1e-9);
  EXPECT_NO_THROW(verify_report(r, s.workload, s.table));
}

TEST(ApplyReplan, ZeroCostCheckpointIsStillRecorded) {
  Profiled s(Workload{{job("a", 100, 1.0)}, cluster(1, 4), {technique("ddp", Archetype::kReplicated)}});
  Plan p;
  p.entries = {{0, {0, 2}, 0, 0.0, 50.0}};
  p.predicted_makespan = 50.0;
  Simulation sim(s.workload, s.table, p, no_replan(0.0));
  sim.run_until(10.0);
  Plan grow;
  grow.entries = {{0, {0, 4}, 0, 0.0, 0.0}};
  sim.apply_replan(grow);
  const SimReport r = sim.run();
  EXPECT_EQ(r.checkpoint_count, 1);
  EXPECT_EQ(count(r.timelines[0], SegmentKind::kCheckpoint), 1);
  for (const auto& seg : r.timelines[0]) {
    if (seg.kind == SegmentKind::kCheckpoint) EXPECT_EQ(seg.end, seg.start);
  }
  EXPECT_NEAR(r.makespan, 10.0 + 80 * 0.25, 1e-9);
}

TEST(ApplyReplan, PlanMustCoverTheUnfinishedJobs) {
  Profiled s(two_job_workload());
  Simulation sim(s.workload, s.table, plan_current_practice(s.input()), no_replan());
  sim.run_until(1.0);
  Plan partial;
  partial.entries = {{0, {0, 2}, 0, 0.0, 6.0}};
  try {
    sim.apply_replan(partial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInvalidPlan);
  }
}

TEST(Snapshot, RunningJobsReportExactProgress) {
  Profiled s(two_job_workload());
  Simulation sim(s.workload, s.table, plan_current_practice(s.input()), no_replan());
  sim.run_until(3.3);
  const auto ctx = sim.snapshot();
  ASSERT_EQ(ctx.jobs.size(), 2u);
  const auto* a = ctx.find(0);
  ASSERT_TRUE(a && a->running);
  EXPECT_NEAR(a->running->batches_done, 3.3 / 0.6, 1e-9);
  EXPECT_EQ(a->remaining_batches, 10 - 5);
  EXPECT_FALSE(ctx.find(1)->running);
  EXPECT_EQ(ctx.find(1)->remaining_batches, 10);
}

TEST(VerifyReport, CatchesLostBatchesAndOverload) {
  Profiled s(two_job_workload());
  SimReport r = simulate(s.workload, s.table, plan_current_practice(s.input()), no_replan());
  SimReport lost = r;
  lost.timelines[0][0].batches -= 1;
  try {
    verify_report(lost, s.workload, s.table);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInvariantViolation);
  }
  SimReport overlap = r;
  overlap.timelines[1][0].start -= 1.0;
  overlap.timelines[1][0].end -= 1.0;
  overlap.makespan -= 1.0;
  try {
    verify_report(overlap, s.workload, s.table);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kCapacityViolation);
  }
}

}  // namespace
}  // namespace jointsched
