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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <tuple>

#include "jointsched/error.hpp"
#include "jointsched/milp.hpp"

namespace jointsched::milp {
namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr int kPolishPasses = 20;
constexpr int kPolishRuns = 8;

struct OpenNode {
  Fixings fix;
  int bound = 0;  // lower bound on the makespan, in intervals
  std::uint64_t seq = 0;
};

struct OpenOrder {
  bool operator()(const OpenNode& a, const OpenNode& b) const {
    return std::tie(a.bound, a.seq) > std::tie(b.bound, b.seq);
  }
};

class Search {
 public:
  Search(const Instance& inst, const BranchAndBoundOptions& opts) : inst_(inst), opts_(opts) {
    job_of_var_.resize(inst.vars.size());
    for (std::size_t k = 0; k < inst.job_vars.size(); ++k) {
      for (int v : inst.job_vars[k]) job_of_var_[v] = static_cast<int>(k);
    }
  }

  Solution run();

 private:
  Fixings dominance_fixings() const;
  bool has_incumbent() const { return !incumbent_.empty(); }
  bool cannot_improve(double bound_intervals) const;
  void offer(std::vector<int> assignment);
  void round_and_offer(const std::vector<double>& x);
  std::optional<std::vector<int>> list_schedule(const std::vector<Config>& configs,
                                                const std::vector<std::size_t>& order) const;
  void polish();

  // Solves one node; on return `children` holds up/down branches (or is empty
  // when the node is pruned or integral).
  void process(const OpenNode& node, std::vector<OpenNode>& children);

  const Instance& inst_;
  const BranchAndBoundOptions& opts_;
  std::vector<int> job_of_var_;
  std::vector<std::vector<Config>> candidates_;  // undominated configs per job
  int polished_at_ = std::numeric_limits<int>::max();
  int polish_runs_ = 0;
  std::vector<int> incumbent_;
  int incumbent_intervals_ = std::numeric_limits<int>::max();
  std::int64_t nodes_ = 0;
  std::uint64_t seq_ = 0;
};

// Within one job, on one node and start interval, a config with fewer GPUs
// and no longer duration can replace any other. Such dominated variables are
// fixed to zero without losing an optimal solution.
Fixings Search::dominance_fixings() const {
  Fixings fix(inst_.vars.size(), -1);
  for (const auto& vars : inst_.job_vars) {
    // option key (config, node) -> (gpus, duration, first var)
    std::map<std::pair<Config, std::size_t>, std::tuple<int, int, int>> options;
    for (int v : vars) {
      const auto& var = inst_.vars[v];
      if (var.keeps_running) continue;
      options.try_emplace({var.config, var.node}, var.config.gpus, var.duration, v);
    }
    for (const auto& [key, a] : options) {
      for (const auto& [other, b] : options) {
        if (other == key || other.second != key.second) continue;
        const auto [ga, da, va] = a;
        const auto [gb, db, vb] = b;
        const bool dominated =
            gb <= ga && db <= da && (gb < ga || db < da || vb < va);
        if (!dominated) continue;
        for (int v : vars) {
          const auto& var = inst_.vars[v];
          if (!var.keeps_running && var.config == key.first && var.node == key.second) fix[v] = 0;
        }
        break;
      }
    }
  }
  // With interchangeable nodes, some optimal schedule has the first job on
  // node 0.
  if (inst_.nodes_interchangeable && !inst_.job_vars.empty()) {
    for (int v : inst_.job_vars[0]) {
      if (inst_.vars[v].node != 0) fix[v] = 0;
    }
  }
  return fix;
}

bool Search::cannot_improve(double bound_intervals) const {
  if (!has_incumbent()) return false;
  const int rounded = static_cast<int>(std::ceil(bound_intervals - kIntegralityTol));
  if (rounded >= incumbent_intervals_) return true;
  const double gap = (incumbent_intervals_ - bound_intervals) * inst_.delta;
  return gap <= opts_.abs_gap || gap <= opts_.rel_gap * incumbent_intervals_ * inst_.delta;
}

void Search::offer(std::vector<int> assignment) {
  if (!evaluate(inst_, assignment)) return;
  int makespan = 0;
  for (int v : assignment) makespan = std::max(makespan, inst_.vars[v].completion());
  if (makespan < incumbent_intervals_ ||
      (makespan == incumbent_intervals_ && assignment < incumbent_)) {
    incumbent_intervals_ = makespan;
    incumbent_ = std::move(assignment);
  }
}

std::optional<std::vector<int>> Search::list_schedule(
    const std::vector<Config>& configs, const std::vector<std::size_t>& order) const {
  std::vector<double> load(inst_.rows.size(), 0.0);
  auto fits = [&](int v) {
    for (auto [row, coef] : inst_.capacity_terms[v]) {
      if (load[row] + coef > inst_.rows[row].row.rhs + 1e-9) return false;
    }
    return true;
  };
  auto earlier = [&](int a, int b) {
    const auto& va = inst_.vars[a];
    const auto& vb = inst_.vars[b];
    return std::make_tuple(va.completion(), va.start, va.node) <
           std::make_tuple(vb.completion(), vb.start, vb.node);
  };

  std::vector<int> assignment(inst_.job_vars.size(), -1);
  for (std::size_t k : order) {
    int chosen = -1;
    for (int v : inst_.job_vars[k]) {
      if (inst_.vars[v].config == configs[k] && fits(v) && (chosen < 0 || earlier(v, chosen))) {
        chosen = v;
      }
    }
    if (chosen < 0) {
      for (int v : inst_.job_vars[k]) {
        if (fits(v) && (chosen < 0 || earlier(v, chosen))) chosen = v;
      }
    }
    if (chosen < 0) return std::nullopt;
    for (auto [row, coef] : inst_.capacity_terms[chosen]) load[row] += coef;
    assignment[k] = chosen;
  }
  return assignment;
}

// Local search over the (config, placement order) encoding of the incumbent:
// pairwise order swaps and single-job config changes, accepted when they
// lower (makespan, total completion).
void Search::polish() {
  const std::size_t nj = inst_.job_vars.size();
  std::vector<Config> configs(nj);
  std::vector<std::size_t> order(nj);
  for (std::size_t k = 0; k < nj; ++k) {
    configs[k] = inst_.vars[incumbent_[k]].config;
    order[k] = k;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inst_.vars[incumbent_[a]].start < inst_.vars[incumbent_[b]].start;
  });
  auto score = [&](const std::vector<int>& a) {
    int makespan = 0;
    long total = 0;
    for (int v : a) {
      makespan = std::max(makespan, inst_.vars[v].completion());
      total += inst_.vars[v].completion();
    }
    return std::make_pair(makespan, total);
  };
  auto current = list_schedule(configs, order);
  if (!current) return;
  auto best = score(*current);
  auto attempt = [&] {
    auto a = list_schedule(configs, order);
    if (!a) return false;
    const auto sc = score(*a);
    if (sc >= best) return false;
    best = sc;
    current = std::move(a);
    return true;
  };

  for (int pass = 0; pass < kPolishPasses; ++pass) {
    bool improved = false;
    for (std::size_t i = 0; i < nj; ++i) {
      for (std::size_t j = i + 1; j < nj; ++j) {
        std::swap(order[i], order[j]);
        if (attempt()) {
          improved = true;
        } else {
          std::swap(order[i], order[j]);
        }
      }
    }
    for (std::size_t k = 0; k < nj; ++k) {
      for (const Config& c : candidates_[k]) {
        if (c == configs[k]) continue;
        const Config old = configs[k];
        configs[k] = c;
        if (attempt()) {
          improved = true;
        } else {
          configs[k] = old;
        }
      }
    }
    if (!improved) break;
  }
  offer(std::move(*current));
}

// Turns an LP point into schedules: per job either the config carrying the
// most LP mass or the cheapest one (in GPU-intervals) it touches, placed
// earliest-first in LP start order or longest-first.
void Search::round_and_offer(const std::vector<double>& x) {
  const std::size_t nj = inst_.job_vars.size();
  std::vector<Config> heaviest(nj), cheapest(nj);
  std::vector<int> heavy_len(nj), cheap_len(nj);
  std::vector<double> mean_start(nj, 0.0);
  for (std::size_t k = 0; k < nj; ++k) {
    std::map<Config, std::pair<double, int>> mass;  // config -> (mass, duration)
    double total = 0.0;
    for (int v : inst_.job_vars[k]) {
      if (x[v] <= 1e-9) continue;
      const auto& var = inst_.vars[v];
      auto& m = mass.try_emplace(var.config, 0.0, var.duration).first->second;
      m.first += x[v];
      m.second = std::min(m.second, var.duration);
      mean_start[k] += x[v] * var.start;
      total += x[v];
    }
    if (mass.empty()) return;
    mean_start[k] /= total;
    double best_mass = -1.0;
    long best_area = std::numeric_limits<long>::max();
    for (const auto& [c, m] : mass) {
      if (m.first > best_mass + 1e-9) {
        best_mass = m.first;
        heaviest[k] = c;
        heavy_len[k] = m.second;
      }
      const long area = static_cast<long>(c.gpus) * m.second;
      if (area < best_area) {
        best_area = area;
        cheapest[k] = c;
        cheap_len[k] = m.second;
      }
    }
  }

  std::vector<std::size_t> by_start(nj);
  for (std::size_t k = 0; k < nj; ++k) by_start[k] = k;
  std::stable_sort(by_start.begin(), by_start.end(),
                   [&](std::size_t a, std::size_t b) { return mean_start[a] < mean_start[b]; });
  auto longest_first = [&](const std::vector<int>& len) {
    std::vector<std::size_t> order = by_start;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return len[a] > len[b]; });
    return order;
  };

  for (auto* configs : {&heaviest, &cheapest}) {
    const auto& len = configs == &heaviest ? heavy_len : cheap_len;
    for (const auto& order : {by_start, longest_first(len)}) {
      if (auto a = list_schedule(*configs, order)) offer(std::move(*a));
    }
  }
}

void Search::process(const OpenNode& node, std::vector<OpenNode>& children) {
  children.clear();
  ++nodes_;

  Fixings fix = node.fix;
  if (has_incumbent()) {
    // Only strictly better schedules matter: drop every variable that would
    // finish at or after the incumbent makespan.
    for (std::size_t v = 0; v < inst_.vars.size(); ++v) {
      if (inst_.vars[v].completion() >= incumbent_intervals_) {
        if (fix[v] == 1) return;
        fix[v] = 0;
      }
    }
  }

  const Relaxation rel = solve_relaxation(inst_, fix, opts_.lp);
  if (rel.status != lp::Status::kOptimal) return;
  const double bound = rel.value / inst_.delta;
  if (cannot_improve(bound)) return;

  int branch = -1;
  double best_frac = kIntegralityTol;
  for (std::size_t v = 0; v < rel.x.size(); ++v) {
    const double frac = std::min(rel.x[v], 1.0 - rel.x[v]);
    if (frac > best_frac + 1e-12) {
      best_frac = frac;
      branch = static_cast<int>(v);
    }
  }

  if (branch < 0) {
    std::vector<int> assignment(inst_.job_vars.size(), -1);
    for (std::size_t v = 0; v < rel.x.size(); ++v) {
      if (rel.x[v] > 0.5) assignment[job_of_var_[v]] = static_cast<int>(v);
    }
    offer(std::move(assignment));
    return;
  }

  round_and_offer(rel.x);
  if (has_incumbent() && incumbent_intervals_ < polished_at_ && polish_runs_ < kPolishRuns) {
    polished_at_ = incumbent_intervals_;
    ++polish_runs_;
    polish();
  }
  if (cannot_improve(bound)) return;

  const int rounded = static_cast<int>(std::ceil(bound - kIntegralityTol));
  OpenNode up{fix, rounded, seq_++};
  for (int v : inst_.job_vars[job_of_var_[branch]]) {
    if (v != branch) up.fix[v] = 0;
  }
  up.fix[branch] = 1;
  OpenNode down{std::move(fix), rounded, seq_++};
  down.fix[branch] = 0;
  children.push_back(std::move(up));
  children.push_back(std::move(down));
}

Solution Search::run() {
  Solution sol;
  // Min-heap on (bound, seq) kept with the std heap algorithms so nodes can
  // be moved out of the top.
  std::vector<OpenNode> open;
  const OpenOrder order;
  auto push = [&](OpenNode&& n) {
    open.push_back(std::move(n));
    std::push_heap(open.begin(), open.end(), order);
  };
  auto pop = [&] {
    std::pop_heap(open.begin(), open.end(), order);
    OpenNode n = std::move(open.back());
    open.pop_back();
    return n;
  };

  std::vector<OpenNode> children;
  OpenNode current{dominance_fixings(), 0, seq_++};
  candidates_.assign(inst_.job_vars.size(), {});
  for (std::size_t k = 0; k < inst_.job_vars.size(); ++k) {
    for (int v : inst_.job_vars[k]) {
      const Config c = inst_.vars[v].config;
      auto& list = candidates_[k];
      if (current.fix[v] != 0 && std::find(list.begin(), list.end(), c) == list.end()) {
        list.push_back(c);
      }
    }
  }
  // Every job on its shortest config, one after another, fits the horizon by
  // construction; it guarantees an incumbent even under a tiny node limit.
  {
    std::vector<Config> shortest(inst_.job_vars.size());
    std::vector<std::size_t> order(inst_.job_vars.size());
    for (std::size_t k = 0; k < inst_.job_vars.size(); ++k) {
      int best = std::numeric_limits<int>::max();
      for (int v : inst_.job_vars[k]) {
        if (inst_.vars[v].duration < best) {
          best = inst_.vars[v].duration;
          shortest[k] = inst_.vars[v].config;
        }
      }
      order[k] = k;
    }
    if (auto a = list_schedule(shortest, order)) offer(std::move(*a));
  }
  bool have_current = true;
  bool limit_hit = false;

  while (true) {
    if (!have_current) {
      while (!open.empty() && cannot_improve(open.front().bound)) pop();
      if (open.empty()) break;
      current = pop();
    }
    if (nodes_ >= opts_.node_limit) {
      limit_hit = true;
      push(std::move(current));
      break;
    }
    process(current, children);
    if (children.empty()) {
      have_current = false;
      continue;
    }
    push(std::move(children[1]));
    current = std::move(children[0]);
    have_current = true;
  }

  sol.node_count = nodes_;
  if (!has_incumbent()) {
    if (limit_hit) throw Error(Errc::kTooLarge, "node limit reached without an incumbent");
    sol.status = Status::kInfeasible;
    return sol;
  }
  sol.assignment = incumbent_;
  sol.objective = incumbent_intervals_ * inst_.delta;
  sol.status = Status::kOptimal;
  if (limit_hit) {
    int lower = incumbent_intervals_;
    for (const auto& n : open) lower = std::min(lower, n.bound);
    sol.gap = incumbent_intervals_ > 0
                  ? static_cast<double>(incumbent_intervals_ - lower) / incumbent_intervals_
                  : 0.0;
    if (sol.gap > 0.0) sol.status = Status::kFeasible;
  }
  return sol;
}

}  // namespace

Solution branch_and_bound(const Instance& instance, const BranchAndBoundOptions& options) {
  Search search(instance, options);
  return search.run();
}

}  // namespace jointsched::milp
