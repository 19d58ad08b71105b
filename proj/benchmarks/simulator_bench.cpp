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

#include <benchmark/benchmark.h>

#include "jointsched/generator.hpp"
#include "jointsched/planners.hpp"
#include "jointsched/simulator.hpp"

namespace js = jointsched;

namespace {

// Static execution of a baseline plan: pure event processing.
void BM_SimulateStatic(benchmark::State& state) {
  const auto w = js::generate_workload("imagenet_mirror", 2, 7);
  const auto t = js::build_profile_table(w, js::SyntheticExecutor(w.cluster));
  const js::LatencyIndex index(w, t);
  const auto plan = js::plan_optimus({w, index, nullptr});
  js::SimOptions o;
  for (auto _ : state) {
    benchmark::DoNotOptimize(js::simulate(w, t, plan, o));
  }
}
BENCHMARK(BM_SimulateStatic)->Unit(benchmark::kMicrosecond);

// Optimus-Dynamic with introspection every predicted/R_div seconds.
void BM_SimulateIntrospection(benchmark::State& state) {
  const auto w = js::generate_workload("wikitext_mirror", 1, 7);
  const auto t = js::build_profile_table(w, js::SyntheticExecutor(w.cluster));
  const js::LatencyIndex index(w, t);
  const auto plan = js::plan_optimus({w, index, nullptr});
  js::SimOptions o;
  o.introspection_interval = plan.predicted_makespan / static_cast<double>(state.range(0));
  o.replanner = js::PlannerSpec{js::PlannerKind::kOptimusDynamic, 0};
  std::int64_t ticks = 0;
  for (auto _ : state) {
    const auto r = js::simulate(w, t, plan, o);
    ticks = r.replan_count;
    benchmark::DoNotOptimize(r);
  }
  state.counters["ticks"] = static_cast<double>(ticks);
}
BENCHMARK(BM_SimulateIntrospection)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

// Saturn replanning on small random workloads.
void BM_SimulateSaturnReplan(benchmark::State& state) {
  const auto w = js::random_workload(static_cast<std::uint64_t>(state.range(0)));
  const auto t = js::build_profile_table(w, js::SyntheticExecutor(w.cluster));
  const js::LatencyIndex index(w, t);
  const auto plan = js::plan_saturn({w, index, nullptr});
  js::SimOptions o;
  o.checkpoint_overhead = 0.0;
  o.introspection_interval = plan.predicted_makespan / 10;
  o.replanner = js::PlannerSpec{js::PlannerKind::kSaturn, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(js::simulate(w, t, plan, o));
  }
}
BENCHMARK(BM_SimulateSaturnReplan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
