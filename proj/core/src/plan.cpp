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

#include "jointsched/plan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "jointsched/error.hpp"
#include "jointsched/feasibility.hpp"

namespace jointsched {

const PlanEntry* Plan::find(std::size_t job) const {
  for (const auto& e : entries) {
    if (e.job == job) return &e;
  }
  return nullptr;
}

double Plan::span() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.end_time());
  return m;
}

std::optional<std::size_t> find_capacity_violation(std::span<const Occupation> blocks,
                                                   const ClusterSpec& cluster) {
  struct Event {
    double time;
    int delta;
    std::size_t node;
  };
  std::vector<Event> events;
  events.reserve(blocks.size() * 2);
  for (const auto& b : blocks) {
    if (b.node >= cluster.nodes.size()) return b.node;
    if (b.end <= b.start || b.gpus <= 0) continue;
    events.push_back({b.start, b.gpus, b.node});
    events.push_back({b.end, -b.gpus, b.node});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.time < b.time; });
  // Times that differ only by rounding (start + duration vs. a recomputed
  // boundary) count as the same instant, so releases still go first.
  for (std::size_t i = 1; i < events.size(); ++i) {
    const double prev = events[i - 1].time;
    if (events[i].time - prev <= 1e-9 * std::max(1.0, std::abs(prev))) events[i].time = prev;
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.delta < b.delta;
  });
  std::vector<int> load(cluster.nodes.size(), 0);
  for (const auto& e : events) {
    load[e.node] += e.delta;
    if (load[e.node] > cluster.nodes[e.node].gpu_count) return e.node;
  }
  return std::nullopt;
}

void check_plan(const Plan& plan, const Workload& workload, std::span<const std::size_t> jobs) {
  std::vector<int> count(workload.jobs.size(), 0);
  std::vector<Occupation> blocks;
  for (const auto& e : plan.entries) {
    if (e.job >= workload.jobs.size()) throw Error(Errc::kInvalidPlan, "unknown job index");
    const auto& job = workload.jobs[e.job];
    if (e.node >= workload.cluster.nodes.size() ||
        e.config.technique >= workload.techniques.size()) {
      throw Error(Errc::kInvalidPlan, "job " + job.id + " references unknown node/technique");
    }
    if (!config_fits_node(job, workload.techniques[e.config.technique], e.config.gpus,
                          workload.cluster.nodes[e.node])) {
      throw Error(Errc::kInvalidPlan, "job " + job.id + " config does not fit its node");
    }
    if (e.start_time < 0.0 || e.duration < 0.0) {
      throw Error(Errc::kInvalidPlan, "job " + job.id + " has negative time");
    }
    ++count[e.job];
    blocks.push_back({e.node, e.config.gpus, e.start_time, e.end_time()});
  }
  std::vector<int> expected(workload.jobs.size(), 0);
  for (auto j : jobs) expected[j] = 1;
  for (std::size_t j = 0; j < count.size(); ++j) {
    if (count[j] != expected[j]) {
      throw Error(Errc::kInvalidPlan, "job " + workload.jobs[j].id + " appears " +
                                          std::to_string(count[j]) + " times");
    }
  }
  if (auto node = find_capacity_violation(blocks, workload.cluster)) {
    throw Error(Errc::kCapacityViolation, "node " + workload.cluster.nodes[*node].id);
  }
}

void check_plan(const Plan& plan, const Workload& workload) {
  std::vector<std::size_t> all(workload.jobs.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  check_plan(plan, workload, all);
}

}  // namespace jointsched
