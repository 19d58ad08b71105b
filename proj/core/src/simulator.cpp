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

#include "jointsched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jointsched/error.hpp"
#include "jointsched/schedule_builder.hpp"

namespace jointsched {

namespace {

constexpr std::size_t kNoJob = std::numeric_limits<std::size_t>::max();
constexpr double kEps = 1e-9;

}  // namespace

std::int64_t remaining_batches(std::int64_t total_batches, double batches_done) {
  const auto done = static_cast<std::int64_t>(std::floor(batches_done + kEps));
  return std::max<std::int64_t>(0, total_batches - done);
}

bool Simulation::Later::operator()(const Event& a, const Event& b) const {
  if (a.time != b.time) return a.time > b.time;
  if (a.kind != b.kind) return a.kind > b.kind;
  if (a.rank != b.rank) return a.rank > b.rank;
  return a.version > b.version;
}

Simulation::Simulation(const Workload& workload, const ProfileTable& table, const Plan& plan0,
                       SimOptions options)
    : workload_(&workload),
      table_(table),
      index_(workload, table_),
      options_(std::move(options)) {
  if (options_.introspection_interval < 0.0 || options_.checkpoint_overhead < 0.0) {
    throw Error(Errc::kInvariantViolation, "introspection interval and checkpoint cost must be >= 0");
  }
  check_plan(plan0, workload);
  jobs_.resize(workload.jobs.size());
  rank_.resize(workload.jobs.size());
  const auto by_id = workload.jobs_by_id();
  for (std::size_t r = 0; r < by_id.size(); ++r) rank_[by_id[r]] = r;
  for (const auto& n : workload.cluster.nodes) free_.push_back(n.gpu_count);

  report_.provenance = table.provenance();
  report_.profiling_time_total = table.profiling_seconds();
  report_.initial_plan = plan0;
  report_.predicted_makespan = plan0.predicted_makespan;
  report_.timelines.resize(workload.jobs.size());

  for (const auto& e : plan0.entries) {
    if (!index_.latency(e.job, e.config)) {
      throw Error(Errc::kInvalidPlan, "no latency for " + workload.jobs[e.job].id);
    }
    jobs_[e.job].next = e;
    schedule_start(e.job);
  }
  if (options_.introspection_interval > 0.0) {
    events_.push({options_.introspection_interval, EventKind::kTick, 0, kNoJob, 0});
  }
}

bool Simulation::finished() const {
  return std::all_of(jobs_.begin(), jobs_.end(),
                     [](const JobState& s) { return s.phase == Phase::kDone; });
}

double Simulation::batches_done(std::size_t job) const {
  const auto& s = jobs_[job];
  if (s.phase != Phase::kRunning && s.phase != Phase::kDraining) return s.segment_done;
  const double done = s.segment_done + (clock_ - s.segment_start) / s.latency;
  return std::min(done, s.target);
}

void Simulation::push(double time, EventKind kind, std::size_t job) {
  events_.push({time, kind, rank_[job], job, jobs_[job].version});
}

void Simulation::schedule_start(std::size_t job) {
  auto& s = jobs_[job];
  ++s.version;
  s.waiting = false;
  push(std::max(clock_, s.next.start_time), EventKind::kStart, job);
}

void Simulation::begin_run(std::size_t job) {
  auto& s = jobs_[job];
  s.phase = Phase::kRunning;
  s.config = s.next.config;
  s.node = s.next.node;
  s.latency = *index_.latency(job, s.config);
  s.segment_start = clock_;
  s.target = static_cast<double>(workload_->jobs[job].total_batches);
  s.waiting = false;
  free_[s.node] -= s.config.gpus;
  ++s.version;
  push(clock_ + (s.target - s.segment_done) * s.latency, EventKind::kFinish, job);
}

void Simulation::try_start(std::size_t job) {
  auto& s = jobs_[job];
  if (s.phase != Phase::kPending) return;
  if (free_[s.next.node] >= s.next.config.gpus) {
    begin_run(job);
  } else {
    s.waiting = true;
  }
}

void Simulation::retry_waiting() {
  std::vector<std::size_t> waiting;
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    if (jobs_[j].phase == Phase::kPending && jobs_[j].waiting) waiting.push_back(j);
  }
  std::sort(waiting.begin(), waiting.end(), [&](std::size_t a, std::size_t b) {
    if (jobs_[a].next.start_time != jobs_[b].next.start_time) {
      return jobs_[a].next.start_time < jobs_[b].next.start_time;
    }
    return rank_[a] < rank_[b];
  });
  for (auto j : waiting) try_start(j);
}

void Simulation::end_segment(std::size_t job) {
  auto& s = jobs_[job];
  report_.timelines[job].push_back(
      {SegmentKind::kRun, s.config, s.node, s.segment_start, clock_, s.target - s.segment_done});
  s.segment_done = s.target;
}

void Simulation::handle(const Event& e) {
  clock_ = std::max(clock_, e.time);
  if (e.kind == EventKind::kTick) {
    tick();
    return;
  }
  auto& s = jobs_[e.job];
  if (e.version != s.version) return;
  if (e.kind == EventKind::kStart) {
    try_start(e.job);
    return;
  }
  switch (s.phase) {
    case Phase::kRunning:
      end_segment(e.job);
      s.phase = Phase::kDone;
      s.finish_time = clock_;
      free_[s.node] += s.config.gpus;
      retry_waiting();
      break;
    case Phase::kDraining:
      end_segment(e.job);
      s.phase = Phase::kCheckpointing;
      s.segment_start = clock_;
      s.checkpoint_end = clock_ + options_.checkpoint_overhead;
      ++report_.checkpoint_count;
      report_.checkpoint_time_total += options_.checkpoint_overhead;
      ++s.version;
      push(s.checkpoint_end, EventKind::kFinish, e.job);
      break;
    case Phase::kCheckpointing:
      report_.timelines[e.job].push_back(
          {SegmentKind::kCheckpoint, s.config, s.node, s.segment_start, clock_, 0.0});
      free_[s.node] += s.config.gpus;
      s.phase = Phase::kPending;
      schedule_start(e.job);
      retry_waiting();
      break;
    default:
      throw Error(Errc::kInvariantViolation, "finish event for idle job");
  }
}

void Simulation::tick() {
  if (finished()) return;
  if (options_.replanner) {
    ++report_.replan_count;
    const auto context = snapshot();
    try {
      const PlanningInput input{*workload_, index_, &context};
      const Plan plan = make_plan(*options_.replanner, input, options_.saturn);
      double heading = clock_ + plan.predicted_makespan;
      for (const auto& s : jobs_) {
        if (s.phase == Phase::kDone) heading = std::max(heading, s.finish_time);
      }
      // Adopt only strict improvements, so replanning can never regress.
      if (heading < projected_makespan() - 1e-6) {
        apply_replan(plan);
        ++report_.plans_adopted;
      }
    } catch (const Error&) {
      ++report_.replan_failures;
    }
  }
  events_.push({clock_ + options_.introspection_interval, EventKind::kTick, 0, kNoJob, 0});
}

ReplanContext Simulation::snapshot() const {
  ReplanContext ctx;
  ctx.checkpoint_overhead = options_.checkpoint_overhead;
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    const auto& s = jobs_[j];
    const auto total = workload_->jobs[j].total_batches;
    JobProgress p;
    p.job = j;
    switch (s.phase) {
      case Phase::kDone:
        continue;
      case Phase::kPending:
        p.remaining_batches = remaining_batches(total, s.segment_done);
        break;
      case Phase::kRunning: {
        const double done = batches_done(j);
        p.remaining_batches = remaining_batches(total, done);
        p.running = JobProgress::Running{s.config, s.node, done};
        break;
      }
      case Phase::kDraining: {
        const double drain_end = s.segment_start + (s.target - s.segment_done) * s.latency;
        p.remaining_batches = remaining_batches(total, s.target);
        p.hold = JobProgress::Hold{s.node, s.config.gpus,
                                   std::max(0.0, drain_end - clock_) + options_.checkpoint_overhead};
        break;
      }
      case Phase::kCheckpointing:
        p.remaining_batches = remaining_batches(total, s.segment_done);
        p.hold = JobProgress::Hold{s.node, s.config.gpus, s.checkpoint_end - clock_};
        break;
    }
    ctx.jobs.push_back(p);
  }
  return ctx;
}

void Simulation::apply_replan(const Plan& plan) {
  std::vector<std::size_t> open;
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    if (jobs_[j].phase != Phase::kDone) open.push_back(j);
  }
  check_plan(plan, *workload_, open);
  for (auto j : open) {
    auto& s = jobs_[j];
    PlanEntry e = *plan.find(j);
    if (!index_.latency(j, e.config)) {
      throw Error(Errc::kInvalidPlan, "no latency for " + workload_->jobs[j].id);
    }
    e.start_time += clock_;
    const double total = static_cast<double>(workload_->jobs[j].total_batches);
    switch (s.phase) {
      case Phase::kRunning: {
        const double boundary = std::ceil(batches_done(j) - kEps);
        const bool same = e.config == s.config && e.node == s.node && e.start_time <= clock_ + kEps;
        if (same || boundary >= total) break;
        s.phase = Phase::kDraining;
        s.target = std::max(boundary, s.segment_done);
        s.next = e;
        ++s.version;
        push(std::max(clock_, s.segment_start + (s.target - s.segment_done) * s.latency),
             EventKind::kFinish, j);
        break;
      }
      case Phase::kDraining:
      case Phase::kCheckpointing:
        s.next = e;
        break;
      case Phase::kPending:
        s.next = e;
        schedule_start(j);
        break;
      case Phase::kDone:
        break;
    }
  }
}

double Simulation::projected_makespan() const {
  double out = 0.0;
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    const auto& s = jobs_[j];
    const double total = static_cast<double>(workload_->jobs[j].total_batches);
    auto follow = [&](double ready, double done) {
      const double latency = *index_.latency(j, s.next.config);
      return std::max(ready, s.next.start_time) + (total - done) * latency;
    };
    double end = 0.0;
    switch (s.phase) {
      case Phase::kDone: end = s.finish_time; break;
      case Phase::kRunning:
        end = s.segment_start + (s.target - s.segment_done) * s.latency;
        break;
      case Phase::kDraining: {
        const double drain_end = s.segment_start + (s.target - s.segment_done) * s.latency;
        end = follow(drain_end + options_.checkpoint_overhead, s.target);
        break;
      }
      case Phase::kCheckpointing: end = follow(s.checkpoint_end, s.segment_done); break;
      case Phase::kPending: end = follow(clock_, s.segment_done); break;
    }
    out = std::max(out, end);
  }
  return out;
}

void Simulation::run_until(double t) {
  while (!events_.empty() && events_.top().time <= t) {
    const Event e = events_.top();
    events_.pop();
    handle(e);
  }
  clock_ = std::max(clock_, t);
}

SimReport Simulation::run() {
  while (!events_.empty()) {
    const Event e = events_.top();
    events_.pop();
    handle(e);
  }
  if (!finished()) throw Error(Errc::kInvariantViolation, "simulation stalled");
  report_.makespan = 0.0;
  for (const auto& s : jobs_) report_.makespan = std::max(report_.makespan, s.finish_time);
  return report_;
}

SimReport simulate(const Workload& workload, const ProfileTable& table, const Plan& plan0,
                   const SimOptions& options) {
  return Simulation(workload, table, plan0, options).run();
}

void verify_report(const SimReport& report, const Workload& workload, const ProfileTable& table) {
  if (report.timelines.size() != workload.jobs.size()) {
    throw Error(Errc::kInvariantViolation, "timeline count differs from job count");
  }
  const LatencyIndex index(workload, table);
  std::vector<Occupation> blocks;
  double last_end = 0.0;
  for (std::size_t j = 0; j < workload.jobs.size(); ++j) {
    double batches = 0.0;
    double by_time = 0.0;
    for (const auto& seg : report.timelines[j]) {
      blocks.push_back({seg.node, seg.config.gpus, seg.start, seg.end});
      last_end = std::max(last_end, seg.end);
      if (seg.kind != SegmentKind::kRun) continue;
      const auto latency = index.latency(j, seg.config);
      if (!latency) throw Error(Errc::kInvariantViolation, "segment without latency");
      batches += seg.batches;
      by_time += (seg.end - seg.start) / *latency;
    }
    const auto total = workload.jobs[j].total_batches;
    if (std::llround(batches) != total || std::abs(batches - static_cast<double>(total)) > 1e-6 ||
        std::llround(by_time) != total) {
      throw Error(Errc::kInvariantViolation, "batches of " + workload.jobs[j].id +
                                                 " do not add up to " + std::to_string(total));
    }
  }
  if (std::abs(last_end - report.makespan) > 1e-6 * std::max(1.0, report.makespan)) {
    throw Error(Errc::kInvariantViolation, "makespan differs from the last segment end");
  }
  if (auto node = find_capacity_violation(blocks, workload.cluster)) {
    throw Error(Errc::kCapacityViolation, "node " + workload.cluster.nodes[*node].id);
  }
}

}  // namespace jointsched
