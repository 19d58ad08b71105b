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

#include "jointsched/planners.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>

#include "jointsched/error.hpp"
#include "jointsched/feasibility.hpp"
#include "jointsched/rng.hpp"

namespace jointsched {

std::string_view planner_name(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::kSaturn: return "saturn";
    case PlannerKind::kCurrentPractice: return "current-practice";
    case PlannerKind::kRandom: return "random";
    case PlannerKind::kOptimus: return "optimus";
    case PlannerKind::kOptimusDynamic: return "optimus-dynamic";
  }
  return "unknown";
}

std::string_view planner_display_name(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::kSaturn: return "Saturn";
    case PlannerKind::kCurrentPractice: return "Current Practice";
    case PlannerKind::kRandom: return "Random";
    case PlannerKind::kOptimus: return "Optimus";
    case PlannerKind::kOptimusDynamic: return "Optimus-Dynamic";
  }
  return "Unknown";
}

std::optional<PlannerSpec> parse_planner(std::string_view text, std::uint64_t default_seed) {
  std::string_view name = text;
  std::optional<std::uint64_t> seed;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    name = text.substr(0, colon);
    auto digits = text.substr(colon + 1);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || p != digits.data() + digits.size() || digits.empty()) {
      return std::nullopt;
    }
    seed = v;
  }
  for (auto kind : {PlannerKind::kSaturn, PlannerKind::kCurrentPractice, PlannerKind::kRandom,
                    PlannerKind::kOptimus, PlannerKind::kOptimusDynamic}) {
    if (planner_name(kind) != name) continue;
    if (seed && kind != PlannerKind::kRandom) return std::nullopt;
    return PlannerSpec{kind, kind == PlannerKind::kRandom ? seed.value_or(default_seed) : 0};
  }
  return std::nullopt;
}

bool uses_introspection(PlannerKind kind) {
  return kind == PlannerKind::kSaturn || kind == PlannerKind::kOptimusDynamic;
}

namespace {

// Fastest usable config at exactly g GPUs that fits `node`.
std::optional<Config> best_config_on_node(const PlanningInput& in, std::size_t job, int gpus,
                                          std::size_t node) {
  const auto& w = in.workload;
  std::optional<Config> best;
  double best_latency = 0.0;
  for (const auto& c : in.index.usable_configs(job)) {
    if (c.gpus != gpus ||
        !config_fits_node(w.jobs[job], w.techniques[c.technique], gpus, w.cluster.nodes[node])) {
      continue;
    }
    const double l = *in.index.latency(job, c);
    if (!best || l < best_latency) {
      best = c;
      best_latency = l;
    }
  }
  return best;
}

double runtime_of(const PlanningInput& in, std::size_t job, Config c) {
  return static_cast<double>(in.remaining_batches(job)) * *in.index.latency(job, c);
}

Plan finish(Plan proposal, const PlanningInput& in) {
  if (in.context) return realize_plan(proposal, in, StartPolicy::kNotBefore);
  proposal.predicted_makespan = proposal.span();
  return proposal;
}

}  // namespace

Plan plan_saturn(const PlanningInput& input, const SaturnOptions& options,
                 SaturnDiagnostics* diagnostics) {
  const auto instance = milp::build(input.index, options.delta, input.context);
  auto search = options.search;
  if (input.context) search.node_limit = std::min(search.node_limit, options.replan_node_limit);
  auto solution = milp::branch_and_bound(instance, search);
  if (solution.status == milp::Status::kInfeasible) {
    throw Error(Errc::kNoFeasibleConfig, "joint program has no feasible schedule");
  }
  Plan decoded = milp::decode_plan(instance, solution, input.workload);
  Plan plan = realize_plan(decoded, input, StartPolicy::kLeftShift);
  if (diagnostics) {
    diagnostics->delta = instance.delta;
    diagnostics->horizon = instance.horizon;
    diagnostics->variables = instance.vars.size();
    diagnostics->solution = std::move(solution);
    diagnostics->decoded = std::move(decoded);
  }
  return plan;
}

Plan plan_current_practice(const PlanningInput& input) {
  const auto& w = input.workload;
  std::vector<double> node_free(w.cluster.nodes.size(), 0.0);
  Plan proposal;
  for (auto j : input.jobs()) {
    std::vector<std::size_t> nodes(w.cluster.nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) nodes[n] = n;
    std::stable_sort(nodes.begin(), nodes.end(),
                     [&](std::size_t a, std::size_t b) { return node_free[a] < node_free[b]; });
    bool placed = false;
    for (auto n : nodes) {
      // Full node if possible, otherwise the largest gang that works.
      for (int g = w.cluster.nodes[n].gpu_count; g >= 1 && !placed; --g) {
        auto c = best_config_on_node(input, j, g, n);
        if (!c) continue;
        const double duration = runtime_of(input, j, *c);
        proposal.entries.push_back({j, *c, n, node_free[n], duration});
        node_free[n] += duration;
        placed = true;
      }
      if (placed) break;
    }
    if (!placed) throw Error(Errc::kNoFeasibleConfig, w.jobs[j].id);
  }
  return finish(std::move(proposal), input);
}

Plan plan_random(const PlanningInput& input, std::uint64_t seed) {
  const auto& w = input.workload;
  SplitMix64 rng(seed);
  const auto jobs = input.jobs();
  std::vector<Config> pick(w.jobs.size());
  for (auto j : jobs) {
    const auto& usable = input.index.usable_configs(j);
    if (usable.empty()) throw Error(Errc::kNoFeasibleConfig, w.jobs[j].id);
    pick[j] = usable[rng.below(usable.size())];
  }
  std::vector<std::size_t> order = jobs;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }

  NodeCalendar calendar(w.cluster);
  Plan proposal;
  for (auto j : order) {
    const Config c = pick[j];
    const double duration = runtime_of(input, j, c);
    std::optional<std::pair<double, std::size_t>> best;
    for (std::size_t n = 0; n < w.cluster.nodes.size(); ++n) {
      if (!config_fits_node(w.jobs[j], w.techniques[c.technique], c.gpus, w.cluster.nodes[n])) {
        continue;
      }
      const double t = calendar.earliest_fit(n, c.gpus, duration, 0.0);
      if (!best || t < best->first) best = {t, n};
    }
    calendar.reserve({best->second, c.gpus, best->first, best->first + duration});
    proposal.entries.push_back({j, c, best->second, best->first, duration});
  }
  return finish(std::move(proposal), input);
}

namespace {

std::optional<double> best_runtime(const LatencyIndex& index, std::size_t job, int gpus,
                                   std::int64_t remaining) {
  auto c = index.best_config_at(job, gpus);
  if (!c) return std::nullopt;
  return static_cast<double>(remaining) * *index.latency(job, *c);
}

}  // namespace

double optimus_marginal_gain(const LatencyIndex& index, std::size_t job, int gpus,
                             std::int64_t remaining_batches) {
  if (gpus + 1 > index.workload().cluster.max_gpus_per_node()) return 0.0;
  auto now = best_runtime(index, job, gpus, remaining_batches);
  auto next = best_runtime(index, job, gpus + 1, remaining_batches);
  if (!now || !next) return 0.0;
  return std::max(0.0, *now - *next);
}

Plan plan_optimus(const PlanningInput& input) {
  const auto& w = input.workload;
  const auto& nodes = w.cluster.nodes;

  // Running jobs lead the FIFO so a replan revisits their allocation first.
  std::deque<std::size_t> queue;
  for (auto j : input.jobs()) {
    const auto* p = input.progress(j);
    if (p && p->running) queue.push_back(j);
  }
  for (auto j : input.jobs()) {
    const auto* p = input.progress(j);
    if (!(p && p->running)) queue.push_back(j);
  }
  auto min_gpus = [&](std::size_t j) {
    auto g = input.index.min_gpus(j);
    if (!g) throw Error(Errc::kNoFeasibleConfig, w.jobs[j].id);
    return *g;
  };

  struct Active {
    double end;
    std::size_t node;
    int gpus;
  };
  std::vector<Active> active;
  std::vector<int> free(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) free[n] = nodes[n].gpu_count;
  double now = 0.0;
  Plan proposal;

  while (!queue.empty()) {
    int total_free = 0;
    for (int f : free) total_free += f;

    std::vector<std::size_t> wave;
    int claimed = 0;
    while (!queue.empty() && claimed + min_gpus(queue.front()) <= total_free) {
      claimed += min_gpus(queue.front());
      wave.push_back(queue.front());
      queue.pop_front();
    }

    std::vector<int> alloc(w.jobs.size(), 0);
    for (auto j : wave) alloc[j] = min_gpus(j);
    for (int spare = total_free - claimed; spare > 0; --spare) {
      std::optional<std::size_t> pick;
      double pick_gain = 0.0;
      for (auto j : wave) {
        const double gain =
            optimus_marginal_gain(input.index, j, alloc[j], input.remaining_batches(j));
        if (gain <= 0.0) continue;
        if (!pick || gain > pick_gain ||
            (gain == pick_gain && w.jobs[j].id < w.jobs[*pick].id)) {
          pick = j;
          pick_gain = gain;
        }
      }
      if (!pick) break;
      ++alloc[*pick];
    }

    std::vector<std::size_t> placement = wave;
    std::stable_sort(placement.begin(), placement.end(), [&](std::size_t a, std::size_t b) {
      if (alloc[a] != alloc[b]) return alloc[a] > alloc[b];
      return w.jobs[a].id < w.jobs[b].id;
    });
    std::vector<std::size_t> deferred;
    for (auto j : placement) {
      std::vector<std::size_t> node_order;
      const auto* p = input.progress(j);
      if (p && p->running) node_order.push_back(p->running->node);
      for (std::size_t n = 0; n < nodes.size(); ++n) {
        if (node_order.empty() || node_order.front() != n) node_order.push_back(n);
      }
      bool placed = false;
      // Fragmentation across nodes can leave the pooled grant unplaceable;
      // shrink the gang until it fits somewhere.
      for (int g = alloc[j]; g >= min_gpus(j) && !placed; --g) {
        for (auto n : node_order) {
          if (free[n] < g) continue;
          auto c = best_config_on_node(input, j, g, n);
          if (!c) continue;
          const double duration = runtime_of(input, j, *c);
          proposal.entries.push_back({j, *c, n, now, duration});
          active.push_back({now + duration, n, g});
          free[n] -= g;
          placed = true;
          break;
        }
      }
      if (!placed) deferred.push_back(j);
    }
    // Deferred jobs return to the head of the queue in wave order.
    for (auto it = wave.rbegin(); it != wave.rend(); ++it) {
      if (std::find(deferred.begin(), deferred.end(), *it) != deferred.end()) {
        queue.push_front(*it);
      }
    }
    if (queue.empty()) break;

    // The next wave starts once a node frees enough GPUs for the queue head.
    auto head_fits = [&] {
      const int need = min_gpus(queue.front());
      return std::any_of(free.begin(), free.end(), [&](int f) { return f >= need; });
    };
    bool advanced = false;
    while (!advanced || !head_fits()) {
      if (active.empty()) {
        if (!head_fits()) throw Error(Errc::kNoFeasibleConfig, w.jobs[queue.front()].id);
        break;
      }
      double next = std::numeric_limits<double>::infinity();
      for (const auto& a : active) next = std::min(next, a.end);
      now = next;
      std::erase_if(active, [&](const Active& a) {
        if (a.end > next) return false;
        free[a.node] += a.gpus;
        return true;
      });
      advanced = true;
    }
  }
  return finish(std::move(proposal), input);
}

Plan make_plan(const PlannerSpec& spec, const PlanningInput& input, const SaturnOptions& saturn) {
  switch (spec.kind) {
    case PlannerKind::kSaturn: return plan_saturn(input, saturn);
    case PlannerKind::kCurrentPractice: return plan_current_practice(input);
    case PlannerKind::kRandom: return plan_random(input, spec.seed);
    case PlannerKind::kOptimus:
    case PlannerKind::kOptimusDynamic: return plan_optimus(input);
  }
  throw Error(Errc::kInvariantViolation, "unknown planner");
}

}  // namespace jointsched
