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

#include "jointsched/report.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "json.hpp"
#include "jointsched/error.hpp"

namespace jointsched {

namespace {

using nlohmann::ordered_json;

double round3(double x) {
  const double r = std::round(x * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;  // no "-0"
}

std::vector<const SimReport*> sorted(std::span<const SimReport> reports) {
  if (reports.empty()) throw Error(Errc::kInvariantViolation, "no reports to emit");
  std::vector<const SimReport*> out;
  for (const auto& r : reports) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(), [](const SimReport* a, const SimReport* b) {
    return a->planner < b->planner;
  });
  return out;
}

std::vector<PlanEntry> by_id(const Plan& plan, const Workload& w) {
  auto entries = plan.entries;
  std::sort(entries.begin(), entries.end(), [&](const PlanEntry& a, const PlanEntry& b) {
    return w.jobs[a.job].id < w.jobs[b.job].id;
  });
  return entries;
}

ordered_json plan_entries(const Plan& plan, const Workload& w) {
  ordered_json out = ordered_json::array();
  for (const auto& e : by_id(plan, w)) {
    out.push_back({{"job", w.jobs[e.job].id},
                   {"technique", w.techniques[e.config.technique].name},
                   {"gpus", e.config.gpus},
                   {"node", w.cluster.nodes[e.node].id},
                   {"start_s", round3(e.start_time)},
                   {"duration_s", round3(e.duration)}});
  }
  return out;
}

}  // namespace

std::string format_seconds(double seconds) { return fmt::format("{:.3f}", round3(seconds)); }

std::string plan_csv(const Plan& plan, const Workload& w) {
  std::string out = "job,technique,gpus,node,start_s,duration_s\n";
  for (const auto& e : by_id(plan, w)) {
    out += fmt::format("{},{},{},{},{},{}\n", w.jobs[e.job].id,
                       w.techniques[e.config.technique].name, e.config.gpus,
                       w.cluster.nodes[e.node].id, format_seconds(e.start_time),
                       format_seconds(e.duration));
  }
  return out;
}

std::string plan_json(const Plan& plan, const Workload& w, PlannerKind planner) {
  ordered_json j;
  j["planner"] = planner_name(planner);
  j["predicted_makespan_s"] = round3(plan.predicted_makespan);
  j["entries"] = plan_entries(plan, w);
  return j.dump(2) + "\n";
}

std::string plan_markdown(const Plan& plan, const Workload& w, PlannerKind planner) {
  std::string out = fmt::format("{} plan, predicted makespan {} s\n\n", planner_display_name(planner),
                                format_seconds(plan.predicted_makespan));
  out += "| Job | Technique | GPUs | Node | Start (s) | Duration (s) |\n";
  out += "|---|---|---:|---|---:|---:|\n";
  for (const auto& e : by_id(plan, w)) {
    out += fmt::format("| {} | {} | {} | {} | {} | {} |\n", w.jobs[e.job].id,
                       w.techniques[e.config.technique].name, e.config.gpus,
                       w.cluster.nodes[e.node].id, format_seconds(e.start_time),
                       format_seconds(e.duration));
  }
  return out;
}

std::string report_json(const SimReport& report, const Workload& w) {
  ordered_json j;
  j["planner"] = planner_name(report.planner);
  j["seed"] = report.seed;
  j["provenance"] = std::string(provenance_name(report.provenance)) + " profile";
  j["makespan_s"] = round3(report.makespan);
  j["predicted_makespan_s"] = round3(report.predicted_makespan);
  j["replan_count"] = report.replan_count;
  j["plans_adopted"] = report.plans_adopted;
  j["replan_failures"] = report.replan_failures;
  j["checkpoint_count"] = report.checkpoint_count;
  j["checkpoint_time_total_s"] = round3(report.checkpoint_time_total);
  j["profiling_time_total_s"] = round3(report.profiling_time_total);

  j["initial_plan"] = plan_entries(report.initial_plan, w);

  ordered_json timeline = ordered_json::array();
  for (auto job : w.jobs_by_id()) {
    ordered_json segs = ordered_json::array();
    for (const auto& s : report.timelines[job]) {
      segs.push_back({{"kind", s.kind == SegmentKind::kRun ? "run" : "checkpoint"},
                      {"technique", w.techniques[s.config.technique].name},
                      {"gpus", s.config.gpus},
                      {"node", w.cluster.nodes[s.node].id},
                      {"start_s", round3(s.start)},
                      {"end_s", round3(s.end)},
                      {"batches", round3(s.batches)}});
    }
    timeline.push_back({{"job", w.jobs[job].id}, {"segments", std::move(segs)}});
  }
  j["timeline"] = std::move(timeline);
  return j.dump(2) + "\n";
}

std::string timeline_csv(const SimReport& report, const Workload& w) {
  std::string out = "job,technique,gpus,node,start_s,end_s,batches\n";
  for (auto job : w.jobs_by_id()) {
    for (const auto& s : report.timelines[job]) {
      if (s.kind != SegmentKind::kRun) continue;
      out += fmt::format("{},{},{},{},{},{},{}\n", w.jobs[job].id,
                         w.techniques[s.config.technique].name, s.config.gpus,
                         w.cluster.nodes[s.node].id, format_seconds(s.start),
                         format_seconds(s.end), std::llround(s.batches));
    }
  }
  return out;
}

std::string comparison_csv(std::span<const SimReport> reports) {
  const auto rows = sorted(reports);
  const SimReport* baseline = nullptr;
  for (const auto* r : rows) {
    if (r->planner == PlannerKind::kCurrentPractice) baseline = r;
  }
  std::string out = baseline ? "planner,makespan_s,speedup_vs_current_practice\n"
                             : "planner,makespan_s\n";
  for (const auto* r : rows) {
    out += fmt::format("{},{}", planner_name(r->planner), format_seconds(r->makespan));
    if (baseline) {
      const double speedup = r == baseline ? 1.0 : baseline->makespan / r->makespan;
      out += "," + format_seconds(speedup);
    }
    out += "\n";
  }
  return out;
}

std::string comparison_markdown(std::span<const SimReport> reports, const std::string& label) {
  const auto present = sorted(reports);
  static constexpr PlannerKind kColumns[] = {
      PlannerKind::kCurrentPractice, PlannerKind::kRandom, PlannerKind::kOptimus,
      PlannerKind::kOptimusDynamic, PlannerKind::kSaturn};
  std::string header = "| Workload |";
  std::string rule = "|---|";
  std::string row = "| " + label + " |";
  for (auto kind : kColumns) {
    for (const auto* r : present) {
      if (r->planner != kind) continue;
      header += fmt::format(" {} |", planner_display_name(kind));
      rule += "---:|";
      row += fmt::format(" {} |", format_seconds(r->makespan));
      break;
    }
  }
  return "Makespan (seconds)\n\n" + header + "\n" + rule + "\n" + row + "\n";
}

}  // namespace jointsched
