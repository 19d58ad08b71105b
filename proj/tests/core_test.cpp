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
#include "jointsched/feasibility.hpp"
#include "jointsched/generator.hpp"
#include "jointsched/plan.hpp"
#include "jointsched/workload_io.hpp"
#include "support/support.hpp"

namespace jointsched {
namespace {

using testing::cluster;
using testing::job;
using testing::technique;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::kIoError;
}

TEST(ValidateWorkload, MinimalWorkloadIsAccepted) {
  Workload w{{job("a", 1, 1.0)}, cluster(1, 1), {technique("ddp", Archetype::kReplicated)}};
  EXPECT_EQ(validate_workload(w), w);
}

TEST(ValidateWorkload, ReplicationCannotHoldAnOversizedModel) {
  Workload w{{job("big", 1, 1.0, 200.0)}, cluster(1, 8), {technique("ddp", Archetype::kReplicated)}};
  EXPECT_EQ(code_of([&] { validate_workload(w); }), Errc::kNoFeasibleConfig);
}

TEST(ValidateWorkload, RejectsDuplicatesAndBrokenFields) {
  Workload w{{job("a", 1, 1.0), job("a", 2, 1.0)}, cluster(1, 1),
             {technique("ddp", Archetype::kReplicated)}};
  EXPECT_EQ(code_of([&] { validate_workload(w); }), Errc::kDuplicateId);

  w.jobs[1].id = "b";
  w.jobs[1].total_batches = 0;
  EXPECT_EQ(code_of([&] { validate_workload(w); }), Errc::kInvariantViolation);

  w.jobs[1].total_batches = 1;
  w.techniques[0].offload_multiplier = 2.0;  // only offloaded techniques may slow down
  EXPECT_EQ(code_of([&] { validate_workload(w); }), Errc::kInvariantViolation);

  w.techniques[0].offload_multiplier = 1.0;
  w.techniques[0].serial_fraction = 1.0;
  EXPECT_EQ(code_of([&] { validate_workload(w); }), Errc::kInvariantViolation);

  w.techniques[0].serial_fraction = 0.0;
  w.cluster.nodes.push_back(w.cluster.nodes[0]);
  EXPECT_EQ(code_of([&] { validate_workload(w); }), Errc::kDuplicateId);

  w.cluster.nodes.clear();
  EXPECT_EQ(code_of([&] { validate_workload(w); }), Errc::kInvariantViolation);
}

TEST(ValidateWorkload, MirrorPresetsValidateAndAreIdempotent) {
  for (auto preset : preset_names()) {
    for (int nodes : {1, 2}) {
      const Workload w = generate_workload(preset, nodes, 7);
      EXPECT_EQ(w.jobs.size(), 12u);
      EXPECT_EQ(w.techniques.size(), 4u);
      EXPECT_EQ(validate_workload(validate_workload(w)), w);
    }
  }
}

TEST(MemoryFeasible, ShardFactorRule) {
  const JobSpec j = job("j", 1, 1.0, 32.0, 4.0);
  EXPECT_TRUE(memory_feasible(j, technique("s", Archetype::kSharded), 4, 12.0));
  EXPECT_FALSE(memory_feasible(j, technique("s", Archetype::kSharded), 3, 12.0));
  EXPECT_TRUE(memory_feasible(j, technique("p", Archetype::kPipelined), 4, 12.0));
  EXPECT_FALSE(memory_feasible(j, technique("r", Archetype::kReplicated), 8, 12.0));
  EXPECT_TRUE(memory_feasible(job("huge", 1, 1.0, 500.0), technique("o", Archetype::kOffloaded),
                              1, 12.0));
}

TEST(FeasibleConfigs, RegistrationOrderThenAscendingGpus) {
  const JobSpec small = job("j", 1, 1.0, 1.0);
  const std::vector<TechniqueSpec> one{technique("ddp", Archetype::kReplicated)};
  EXPECT_EQ(feasible_configs(small, cluster(1, 2), one),
            (std::vector<Config>{{0, 1}, {0, 2}}));
  EXPECT_TRUE(feasible_configs(small, cluster(1, 2), {}).empty());

  // 30 GiB over 8 GiB GPUs needs g >= 4 once the 0.5 GiB working set is added.
  const JobSpec big = job("big", 1, 1.0, 30.0, 0.5);
  const std::vector<TechniqueSpec> sharded{technique("fsdp", Archetype::kSharded)};
  std::vector<Config> expected;
  for (int g = 1; g <= 8; ++g) {
    if (30.0 / g + 0.5 <= 8.0) expected.push_back({0, g});
  }
  ASSERT_EQ(expected.front().gpus, 4);
  EXPECT_EQ(feasible_configs(big, cluster(1, 8, 8.0), sharded), expected);
}

TEST(FeasibleConfigs, ShardedFeasibilityIsMonotoneInGpus) {
  for (auto arch : {Archetype::kSharded, Archetype::kPipelined}) {
    const auto t = technique("t", arch);
    for (double model = 1.0; model < 200.0; model *= 1.7) {
      bool seen = false;
      for (int g = 1; g <= 8; ++g) {
        const bool ok = memory_feasible(job("j", 1, 1.0, model, 2.0), t, g, 24.0);
        if (seen) EXPECT_TRUE(ok) << model << " GiB at g=" << g;
        seen = seen || ok;
      }
    }
  }
}

TEST(FeasibleConfigs, MinGpusAndNodeSizeBoundTheRange) {
  const std::vector<TechniqueSpec> t{technique("pipe", Archetype::kPipelined, 0.1, 0.0, 1.0, 2)};
  ClusterSpec c;
  c.nodes = {{"small", 2, 40.0}, {"large", 4, 40.0}};
  EXPECT_EQ(feasible_configs(job("j", 1, 1.0), c, t),
            (std::vector<Config>{{0, 2}, {0, 3}, {0, 4}}));
}

TEST(CapacitySweep, ReleasesComeBeforeAcquisitions) {
  const ClusterSpec c = cluster(1, 2);
  std::vector<Occupation> ok{{0, 2, 0.0, 5.0}, {0, 2, 5.0, 9.0}};
  EXPECT_FALSE(find_capacity_violation(ok, c));
  std::vector<Occupation> bad{{0, 2, 0.0, 5.0}, {0, 1, 4.0, 9.0}};
  EXPECT_EQ(find_capacity_violation(bad, c), std::optional<std::size_t>(0));
}

TEST(CapacitySweep, CheckPlanRejectsOverlapAndMissingJobs) {
  const Workload w = testing::two_job_workload();
  Plan plan;
  plan.entries = {{0, {0, 2}, 0, 0.0, 6.0}, {1, {0, 1}, 0, 3.0, 10.0}};
  EXPECT_EQ(code_of([&] { check_plan(plan, w); }), Errc::kCapacityViolation);
  plan.entries[1].start_time = 6.0;
  EXPECT_NO_THROW(check_plan(plan, w));
  plan.entries.pop_back();
  EXPECT_EQ(code_of([&] { check_plan(plan, w); }), Errc::kInvalidPlan);
}

TEST(WorkloadFile, RoundTripsAndRejectsUnknownKeys) {
  const Workload w = generate_workload("imagenet_mirror", 2, 3);
  EXPECT_EQ(parse_workload(dump_workload(w)), w);

  const std::string text = dump_workload(testing::two_job_workload());
  std::string extra = text;
  extra.insert(extra.find('{') + 1, "\"comment\": 1,");
  EXPECT_EQ(code_of([&] { parse_workload(extra); }), Errc::kParseError);
  EXPECT_EQ(code_of([&] { parse_workload("[1, 2]"); }), Errc::kParseError);
  EXPECT_EQ(code_of([&] { parse_workload("{"); }), Errc::kParseError);
}

}  // namespace
}  // namespace jointsched
