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

#include "jointsched/milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "jointsched/error.hpp"
#include "jointsched/feasibility.hpp"

namespace jointsched::milp {
namespace {

int ceil_intervals(double seconds, double delta) {
  return static_cast<int>(std::ceil(seconds / delta - 1e-9));
}

struct JobOption {
  Config config;
  std::size_t node;
  double runtime;
  bool keep;
};

struct JobModel {
  std::size_t job;
  std::vector<JobOption> options;
  // Hold charged to every non-keep option: GPUs stay busy on the old node.
  std::optional<JobProgress::Hold> hold;
};

JobModel model_job(const LatencyIndex& index, std::size_t job, const JobProgress* progress,
                   double checkpoint_overhead) {
  const Workload& w = index.workload();
  const auto& spec = w.jobs[job];
  JobModel model{job, {}, std::nullopt};
  const std::int64_t remaining = progress ? progress->remaining_batches : spec.total_batches;
  double extra = 0.0;  // seconds prepended to any non-keep option

  if (progress && progress->running) {
    const auto& run = *progress->running;
    const auto latency = index.latency(job, run.config);
    if (!latency) throw Error(Errc::kInvalidPlan, "running config of " + spec.id + " is unusable");
    model.options.push_back(
        {run.config, run.node, static_cast<double>(remaining) * *latency, true});
    const double done_ceil = std::ceil(run.batches_done - 1e-9);
    if (done_ceil >= static_cast<double>(spec.total_batches)) {
      return model;  // last batch in flight; the job can only finish in place
    }
    const double drain = std::max(0.0, done_ceil - run.batches_done) * *latency;
    extra = checkpoint_overhead;
    model.hold = JobProgress::Hold{run.node, run.config.gpus, drain + checkpoint_overhead};
  } else if (progress && progress->hold) {
    extra = progress->hold->until;
    model.hold = progress->hold;
  }

  for (const auto& c : index.usable_configs(job)) {
    const double runtime = extra + static_cast<double>(remaining) * *index.latency(job, c);
    for (std::size_t n = 0; n < w.cluster.nodes.size(); ++n) {
      if (config_fits_node(spec, w.techniques[c.technique], c.gpus, w.cluster.nodes[n])) {
        model.options.push_back({c, n, runtime, false});
      }
    }
  }
  return model;
}

}  // namespace

double choose_delta(const std::vector<double>& best_runtimes, int max_intervals) {
  if (best_runtimes.empty() || max_intervals < 1) {
    throw Error(Errc::kInvariantViolation, "choose_delta needs jobs and K_max >= 1");
  }
  const double total = std::accumulate(best_runtimes.begin(), best_runtimes.end(), 0.0);
  const double shortest = *std::min_element(best_runtimes.begin(), best_runtimes.end());
  return std::max(total / max_intervals, shortest / 4.0);
}

Instance build(const LatencyIndex& index, const DeltaOptions& options,
               const ReplanContext* context) {
  const Workload& w = index.workload();
  std::vector<std::size_t> jobs;
  if (context) {
    for (const auto& p : context->jobs) jobs.push_back(p.job);
    std::sort(jobs.begin(), jobs.end(),
              [&](std::size_t a, std::size_t b) { return w.jobs[a].id < w.jobs[b].id; });
  } else {
    jobs = w.jobs_by_id();
  }
  if (jobs.empty()) throw Error(Errc::kInvariantViolation, "no jobs to schedule");

  std::vector<JobModel> models;
  std::vector<double> best;
  for (auto j : jobs) {
    const JobProgress* progress = context ? context->find(j) : nullptr;
    models.push_back(
        model_job(index, j, progress, context ? context->checkpoint_overhead : 0.0));
    if (models.back().options.empty()) throw Error(Errc::kNoFeasibleConfig, w.jobs[j].id);
    double b = models.back().options.front().runtime;
    for (const auto& o : models.back().options) b = std::min(b, o.runtime);
    best.push_back(b);
  }

  Instance inst;
  inst.jobs = jobs;
  inst.nodes_interchangeable =
      !context && std::all_of(w.cluster.nodes.begin(), w.cluster.nodes.end(), [&](const NodeSpec& n) {
        return n.gpu_count == w.cluster.nodes[0].gpu_count &&
               n.gpu_memory == w.cluster.nodes[0].gpu_memory;
      });
  inst.delta = options.delta ? *options.delta : choose_delta(best, options.max_intervals);
  if (!(inst.delta > 0.0) || !std::isfinite(inst.delta)) {
    throw Error(Errc::kInvariantViolation, "interval length must be positive");
  }
  const double total_best = std::accumulate(best.begin(), best.end(), 0.0);
  if (ceil_intervals(total_best, inst.delta) > options.max_intervals) {
    throw Error(Errc::kHorizonOverflow,
                "sequential schedule needs " +
                    std::to_string(ceil_intervals(total_best, inst.delta)) +
                    " intervals, K_max is " + std::to_string(options.max_intervals));
  }

  // Sum of per-job rounded best durations keeps the sequential schedule
  // feasible; checkpoint holds can push it later by their own length.
  int horizon = 0;
  int hold_intervals = 0;
  for (const auto& m : models) {
    int d_min = std::numeric_limits<int>::max();
    for (const auto& o : m.options) {
      d_min = std::min(d_min, std::max(1, ceil_intervals(o.runtime, inst.delta)));
    }
    horizon += d_min;
    if (m.hold) hold_intervals = std::max(hold_intervals, ceil_intervals(m.hold->until, inst.delta));
  }
  inst.horizon = horizon + hold_intervals;
  // A job that keeps running cannot be moved later, so the horizon must
  // cover it even when another of its options is shorter.
  for (const auto& m : models) {
    for (const auto& o : m.options) {
      if (o.keep) inst.horizon = std::max(inst.horizon, ceil_intervals(o.runtime, inst.delta));
    }
  }

  for (std::size_t k = 0; k < models.size(); ++k) {
    inst.job_vars.emplace_back();
    for (const auto& o : models[k].options) {
      const int d = std::max(1, ceil_intervals(o.runtime, inst.delta));
      const int last = o.keep ? 0 : inst.horizon - d;
      for (int i = 0; i <= last; ++i) {
        inst.job_vars.back().push_back(static_cast<int>(inst.vars.size()));
        inst.vars.push_back({models[k].job, o.config, o.node, i, d, o.runtime, o.keep});
      }
    }
  }

  const int M = inst.makespan_col();
  const std::size_t num_nodes = w.cluster.nodes.size();

  for (std::size_t k = 0; k < jobs.size(); ++k) {
    Row r{RowKind::kAssign, jobs[k], 0, 0, {}};
    r.row.sense = lp::Sense::kEqual;
    r.row.rhs = 1.0;
    for (int v : inst.job_vars[k]) r.row.terms.push_back({v, 1.0});
    inst.rows.push_back(std::move(r));
  }

  const std::size_t cap_base = inst.rows.size();
  for (std::size_t n = 0; n < num_nodes; ++n) {
    for (int t = 0; t < inst.horizon; ++t) {
      Row r{RowKind::kCapacity, 0, n, t, {}};
      r.row.sense = lp::Sense::kLessEqual;
      r.row.rhs = w.cluster.nodes[n].gpu_count;
      inst.rows.push_back(std::move(r));
    }
  }
  auto cap_row = [&](std::size_t n, int t) {
    return cap_base + n * static_cast<std::size_t>(inst.horizon) + static_cast<std::size_t>(t);
  };

  inst.capacity_terms.resize(inst.vars.size());
  for (std::size_t k = 0; k < models.size(); ++k) {
    const auto& hold = models[k].hold;
    const int hold_len = hold ? ceil_intervals(hold->until, inst.delta) : 0;
    for (int v : inst.job_vars[k]) {
      const auto& var = inst.vars[v];
      // Accumulate per row so a hold and the job itself on the same row merge.
      std::vector<std::pair<int, double>> terms;
      auto add = [&](std::size_t row, double coef) {
        for (auto& [r, c] : terms) {
          if (r == static_cast<int>(row)) {
            c += coef;
            return;
          }
        }
        terms.push_back({static_cast<int>(row), coef});
      };
      for (int t = var.start; t < var.completion(); ++t) add(cap_row(var.node, t), var.config.gpus);
      if (!var.keeps_running && hold) {
        for (int t = 0; t < hold_len; ++t) add(cap_row(hold->node, t), hold->gpus);
      }
      std::sort(terms.begin(), terms.end());
      for (auto [row, coef] : terms) inst.rows[row].row.terms.push_back({v, coef});
      inst.capacity_terms[v] = std::move(terms);
    }
  }

  for (std::size_t k = 0; k < jobs.size(); ++k) {
    Row r{RowKind::kMakespan, jobs[k], 0, 0, {}};
    r.row.sense = lp::Sense::kGreaterEqual;
    r.row.rhs = 0.0;
    r.row.terms.push_back({M, 1.0});
    for (int v : inst.job_vars[k]) {
      r.row.terms.push_back({v, -inst.vars[v].completion() * inst.delta});
    }
    inst.rows.push_back(std::move(r));
  }

  // Every run lies inside [0, M), so the cluster must supply its GPU-intervals
  // by then. Implied by the integer program, but it lifts the LP bound.
  Row area{RowKind::kArea, 0, 0, 0, {}};
  area.row.sense = lp::Sense::kGreaterEqual;
  area.row.rhs = 0.0;
  area.row.terms.push_back({M, 1.0});
  const double gpus = w.cluster.total_gpus();
  for (std::size_t v = 0; v < inst.vars.size(); ++v) {
    const auto& var = inst.vars[v];
    area.row.terms.push_back(
        {static_cast<int>(v), -var.config.gpus * var.duration * inst.delta / gpus});
  }
  inst.rows.push_back(std::move(area));
  return inst;
}

Relaxation solve_relaxation(const Instance& inst, const Fixings& fixings,
                            const lp::Options& options) {
  const int nv = static_cast<int>(inst.vars.size());
  if (!fixings.empty() && static_cast<int>(fixings.size()) != nv) {
    throw Error(Errc::kInvariantViolation, "fixings size mismatch");
  }
  auto fixed = [&](int v) { return fixings.empty() ? -1 : fixings[v]; };

  // Column map: -1 for variables excluded (fixed to zero or shadowed by a
  // sibling fixed to one).
  std::vector<int> col(nv, -1);
  lp::Problem p;
  Relaxation out;
  out.x.assign(nv, 0.0);
  std::vector<int> job_of_var(nv, 0);

  for (std::size_t k = 0; k < inst.job_vars.size(); ++k) {
    int one = -1;
    for (int v : inst.job_vars[k]) {
      job_of_var[v] = static_cast<int>(k);
      if (fixed(v) == 1) {
        if (one >= 0) {
          throw Error(Errc::kInvariantViolation, "job fixed to two variables");
        }
        one = v;
      }
    }
    bool any = false;
    for (int v : inst.job_vars[k]) {
      if (fixed(v) == 0 || (one >= 0 && v != one)) continue;
      const double lo = v == one ? 1.0 : 0.0;
      col[v] = p.add_column(0.0, lo, 1.0);
      any = true;
    }
    if (!any) {
      out.status = lp::Status::kInfeasible;
      return out;
    }
  }
  const int mcol = p.add_column(1.0, 0.0, lp::kInfinity);

  std::vector<double> job_max(inst.job_vars.size(), 0.0);
  std::vector<int> touched;
  for (const auto& r : inst.rows) {
    lp::Row row;
    row.sense = r.row.sense;
    row.rhs = r.row.rhs;
    if (r.kind == RowKind::kCapacity) {
      touched.clear();
      for (const auto& t : r.row.terms) {
        if (col[t.col] < 0) continue;
        const int k = job_of_var[t.col];
        if (job_max[k] == 0.0) touched.push_back(k);
        job_max[k] = std::max(job_max[k], t.coef);
        row.terms.push_back({col[t.col], t.coef});
      }
      double worst = 0.0;
      for (int k : touched) {
        worst += job_max[k];
        job_max[k] = 0.0;
      }
      if (worst <= row.rhs + 1e-9) continue;  // cannot bind
    } else {
      for (const auto& t : r.row.terms) {
        if (t.col == inst.makespan_col()) {
          row.terms.push_back({mcol, t.coef});
        } else if (col[t.col] >= 0) {
          // Makespan and area rows are scaled by 1/delta so M is measured in intervals.
          const double c = r.kind == RowKind::kAssign ? t.coef : t.coef / inst.delta;
          row.terms.push_back({col[t.col], c});
        }
      }
    }
    p.rows.push_back(std::move(row));
  }

  const auto res = lp::solve(p, options);
  out.status = res.status;
  if (res.status != lp::Status::kOptimal) return out;
  for (int v = 0; v < nv; ++v) {
    if (col[v] >= 0) out.x[v] = res.x[col[v]];
  }
  out.value = res.x[mcol] * inst.delta;
  return out;
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kFeasible: return "feasible";
    case Status::kInfeasible: return "infeasible";
  }
  return "unknown";
}

std::optional<double> evaluate(const Instance& inst, const std::vector<int>& assignment) {
  if (assignment.size() != inst.job_vars.size()) return std::nullopt;
  std::vector<double> load(inst.rows.size(), 0.0);
  int makespan = 0;
  for (std::size_t k = 0; k < assignment.size(); ++k) {
    const int v = assignment[k];
    const auto& own = inst.job_vars[k];
    if (std::find(own.begin(), own.end(), v) == own.end()) return std::nullopt;
    for (auto [row, coef] : inst.capacity_terms[v]) load[row] += coef;
    makespan = std::max(makespan, inst.vars[v].completion());
  }
  for (std::size_t r = 0; r < inst.rows.size(); ++r) {
    if (inst.rows[r].kind == RowKind::kCapacity && load[r] > inst.rows[r].row.rhs + 1e-9) {
      return std::nullopt;
    }
  }
  return makespan * inst.delta;
}

Plan decode_plan(const Instance& inst, const Solution& solution, const Workload& workload) {
  if (solution.status == Status::kInfeasible) {
    throw Error(Errc::kInvalidPlan, "cannot decode an infeasible solution");
  }
  Plan plan;
  for (std::size_t k = 0; k < solution.assignment.size(); ++k) {
    const auto& v = inst.vars[solution.assignment[k]];
    plan.entries.push_back(
        {v.job, v.config, v.node, v.start * inst.delta, v.duration * inst.delta});
  }
  plan.predicted_makespan = solution.objective;
  check_plan(plan, workload, inst.jobs);
  return plan;
}

Fixings fixings_from_plan(const Instance& inst, const Plan& plan) {
  Fixings f(inst.vars.size(), 0);
  for (std::size_t k = 0; k < inst.jobs.size(); ++k) {
    const PlanEntry* e = plan.find(inst.jobs[k]);
    if (!e) throw Error(Errc::kInvalidPlan, "plan misses an instance job");
    const long start = std::lround(e->start_time / inst.delta);
    const long duration = std::lround(e->duration / inst.delta);
    int match = -1;
    for (int v : inst.job_vars[k]) {
      const auto& var = inst.vars[v];
      if (var.config == e->config && var.node == e->node && var.start == start &&
          var.duration == duration) {
        match = v;
        break;
      }
    }
    if (match < 0) throw Error(Errc::kInvalidPlan, "plan entry has no matching variable");
    f[match] = 1;
  }
  return f;
}

}  // namespace jointsched::milp
