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

#include "jointsched/schedule_builder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jointsched/error.hpp"

namespace jointsched {

std::vector<std::size_t> PlanningInput::jobs() const {
  if (!context) return workload.jobs_by_id();
  std::vector<std::size_t> out;
  for (const auto& p : context->jobs) out.push_back(p.job);
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    return workload.jobs[a].id < workload.jobs[b].id;
  });
  return out;
}

std::int64_t PlanningInput::remaining_batches(std::size_t job) const {
  if (const auto* p = progress(job)) return p->remaining_batches;
  return workload.jobs[job].total_batches;
}

NodeCalendar::NodeCalendar(const ClusterSpec& cluster) : cluster_(&cluster) {}

void NodeCalendar::reserve(const Occupation& block) {
  if (block.end > block.start && block.gpus > 0) blocks_.push_back(block);
}

bool NodeCalendar::fits(std::size_t node, int gpus, double start, double duration) const {
  const double end = start + duration;
  const int capacity = cluster_->nodes[node].gpu_count;
  if (gpus > capacity) return false;
  // Peak load over [start, end) is reached at start or at some block start
  // inside the window.
  auto load_at = [&](double t) {
    int load = 0;
    for (const auto& b : blocks_) {
      if (b.node == node && b.start <= t && t < b.end) load += b.gpus;
    }
    return load;
  };
  if (load_at(start) + gpus > capacity) return false;
  for (const auto& b : blocks_) {
    if (b.node == node && b.start > start && b.start < end && load_at(b.start) + gpus > capacity) {
      return false;
    }
  }
  return true;
}

double NodeCalendar::earliest_fit(std::size_t node, int gpus, double duration,
                                  double release) const {
  std::vector<double> candidates{release};
  for (const auto& b : blocks_) {
    if (b.node == node && b.end > release) candidates.push_back(b.end);
  }
  std::sort(candidates.begin(), candidates.end());
  for (double t : candidates) {
    if (fits(node, gpus, t, duration)) return t;
  }
  // The last block end always fits: nothing is reserved after it.
  throw Error(Errc::kCapacityViolation, "no slot for " + std::to_string(gpus) + " GPUs");
}

namespace {

struct Pending {
  std::size_t job;
  Config config;
  std::size_t node;
  double proposed_start;
  double release;
  double duration;
};

}  // namespace

Plan realize_plan(const Plan& proposal, const PlanningInput& input, StartPolicy policy) {
  const Workload& w = input.workload;
  const auto jobs = input.jobs();
  check_plan(proposal, w, jobs);

  NodeCalendar calendar(w.cluster);
  Plan plan;
  std::vector<Pending> queue;
  const double rho = input.context ? input.context->checkpoint_overhead : 0.0;

  for (auto j : jobs) {
    const PlanEntry& e = *proposal.find(j);
    const auto& spec = w.jobs[j];
    const auto latency = input.index.latency(j, e.config);
    if (!latency) throw Error(Errc::kInvalidPlan, "unusable config for " + spec.id);
    const JobProgress* p = input.progress(j);
    const double total = static_cast<double>(spec.total_batches);

    if (p && p->running) {
      const auto& run = *p->running;
      const double run_latency = *input.index.latency(j, run.config);
      const double done_ceil = std::ceil(run.batches_done - 1e-9);
      const bool same = e.config == run.config && e.node == run.node;
      const bool movable = done_ceil < total;
      if (!movable || (same && e.start_time <= 1e-9)) {
        const double duration = std::max(0.0, total - run.batches_done) * run_latency;
        plan.entries.push_back({j, run.config, run.node, 0.0, duration});
        calendar.reserve({run.node, run.config.gpus, 0.0, duration});
        continue;
      }
      const double drain = std::max(0.0, done_ceil - run.batches_done) * run_latency;
      calendar.reserve({run.node, run.config.gpus, 0.0, drain + rho});
      queue.push_back({j, e.config, e.node, e.start_time, drain + rho,
                       (total - done_ceil) * *latency});
      continue;
    }
    double release = 0.0;
    if (p && p->hold) {
      calendar.reserve({p->hold->node, p->hold->gpus, 0.0, p->hold->until});
      release = p->hold->until;
    }
    const double remaining = static_cast<double>(input.remaining_batches(j));
    queue.push_back({j, e.config, e.node, e.start_time, release, remaining * *latency});
  }

  std::stable_sort(queue.begin(), queue.end(), [&](const Pending& a, const Pending& b) {
    if (a.proposed_start != b.proposed_start) return a.proposed_start < b.proposed_start;
    return w.jobs[a.job].id < w.jobs[b.job].id;
  });
  for (const auto& q : queue) {
    double release = q.release;
    if (policy == StartPolicy::kNotBefore) release = std::max(release, q.proposed_start);
    const double start = calendar.earliest_fit(q.node, q.config.gpus, q.duration, release);
    calendar.reserve({q.node, q.config.gpus, start, start + q.duration});
    plan.entries.push_back({q.job, q.config, q.node, start, q.duration});
  }

  std::sort(plan.entries.begin(), plan.entries.end(), [&](const PlanEntry& a, const PlanEntry& b) {
    return w.jobs[a.job].id < w.jobs[b.job].id;
  });
  plan.predicted_makespan = plan.span();
  return plan;
}

}  // namespace jointsched
