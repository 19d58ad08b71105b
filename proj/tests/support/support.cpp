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

#include "support.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "jointsched/feasibility.hpp"

namespace jointsched::testing {

TechniqueSpec technique(std::string name, Archetype archetype, double sigma, double kappa,
                        double mu, int min_gpus) {
  return {std::move(name), archetype, sigma, kappa, mu, min_gpus};
}

JobSpec job(std::string id, std::int64_t batches, double base, double model, double activation) {
  return {std::move(id), batches, base, model, activation};
}

ClusterSpec cluster(int nodes, int gpus, double memory) {
  ClusterSpec c;
  for (int n = 0; n < nodes; ++n) c.nodes.push_back({"n" + std::to_string(n), gpus, memory});
  return c;
}

Workload two_job_workload() {
  Workload w;
  w.jobs = {job("a", 10, 1.0), job("b", 10, 1.0)};
  w.cluster = cluster(1, 2);
  // (1 - 0.2) / 2 + 0.2 = 0.6 s per batch at two GPUs.
  w.techniques = {technique("ddp", Archetype::kReplicated, 0.2)};
  return w;
}

double latency_formula(double base, double sigma, double kappa, double mu, int g) {
  return mu * base * ((1.0 - sigma) / g + sigma + kappa * (g - 1));
}

TinyCase tiny_case(std::uint64_t seed, int max_intervals) {
  std::mt19937_64 gen(seed * 7919 + 17);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  auto real = [&](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };

  Workload w;
  const int layout = pick(0, 2);
  if (layout == 0) w.cluster = cluster(1, 4);
  if (layout == 1) w.cluster = cluster(1, pick(2, 3));
  if (layout == 2) w.cluster = cluster(2, 2);

  w.techniques.push_back(technique("rep", Archetype::kReplicated, real(0.0, 0.4), real(0.0, 0.05)));
  if (pick(0, 1) == 1) {
    w.techniques.push_back(
        technique("shard", Archetype::kSharded, real(0.0, 0.3), real(0.0, 0.1), 1.0, pick(1, 2)));
  }
  const int jobs = pick(1, 3);
  for (int j = 0; j < jobs; ++j) {
    // Some jobs only fit when sharded, when a sharded technique exists.
    const bool big = w.techniques.size() > 1 && pick(0, 2) == 0;
    w.jobs.push_back(job("j" + std::to_string(j), pick(2, 12), real(0.5, 2.0),
                         big ? real(45.0, 70.0) : real(5.0, 20.0), 1.0));
  }
  w = validate_workload(w);

  TinyCase out{w, build_profile_table(w, SyntheticExecutor(w.cluster)), {}};
  const LatencyIndex index(out.workload, out.table);
  double total_best = 0.0;
  for (std::size_t j = 0; j < w.jobs.size(); ++j) {
    double best = 1e300;
    for (const auto& c : index.usable_configs(j)) {
      best = std::min(best, *index.latency(j, c) * static_cast<double>(w.jobs[j].total_batches));
    }
    total_best += best;
  }
  // Rounding each job up costs at most one interval, so leave one per job.
  milp::DeltaOptions delta;
  delta.delta = total_best / (max_intervals - jobs);
  delta.max_intervals = max_intervals;
  out.instance = milp::build(index, delta);
  if (out.instance.horizon > max_intervals) throw std::logic_error("tiny case horizon too long");
  return out;
}

std::optional<double> oracle_optimum(const milp::Instance& inst) {
  const std::size_t jobs = inst.jobs.size();
  std::vector<std::vector<const milp::Variable*>> choices(jobs);
  for (const auto& v : inst.vars) {
    const auto it = std::find(inst.jobs.begin(), inst.jobs.end(), v.job);
    choices[static_cast<std::size_t>(it - inst.jobs.begin())].push_back(&v);
  }
  std::size_t nodes = 0;
  for (const auto& v : inst.vars) nodes = std::max(nodes, v.node + 1);
  // Capacity per node read off the capacity rows' right-hand sides.
  std::vector<double> capacity(nodes, 0.0);
  for (const auto& r : inst.rows) {
    if (r.kind == milp::RowKind::kCapacity) capacity[r.node] = r.row.rhs;
  }
  std::vector<std::vector<double>> used(nodes, std::vector<double>(inst.horizon, 0.0));

  std::optional<int> best;
  std::function<void(std::size_t, int)> go = [&](std::size_t k, int span) {
    if (best && span >= *best) return;
    if (k == jobs) {
      best = span;
      return;
    }
    for (const auto* v : choices[k]) {
      bool fits = v->completion() <= inst.horizon;
      for (int t = v->start; fits && t < v->completion(); ++t) {
        fits = used[v->node][t] + v->config.gpus <= capacity[v->node] + 1e-9;
      }
      if (!fits) continue;
      for (int t = v->start; t < v->completion(); ++t) used[v->node][t] += v->config.gpus;
      go(k + 1, std::max(span, v->completion()));
      for (int t = v->start; t < v->completion(); ++t) used[v->node][t] -= v->config.gpus;
    }
  };
  go(0, 0);
  if (!best) return std::nullopt;
  return *best * inst.delta;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(' ');
  const auto e = s.find_last_not_of(' ');
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

ParsedProgram parse_dump(const std::string& text) {
  ParsedProgram p;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream in(line);
    if (line.rfind("# delta ", 0) == 0) {
      std::string hash, word;
      int vars = 0;
      in >> hash >> word >> p.delta >> word >> p.horizon >> word >> vars;
      continue;
    }
    if (line.rfind("# ", 0) == 0) {
      std::string hash, name, word;
      int d = 0;
      in >> hash >> name >> word >> d;
      p.durations[name] = d;
      continue;
    }
    if (line.rfind("min ", 0) == 0) {
      p.objective = trim(line.substr(4));
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw std::runtime_error("bad line: " + line);
    ParsedRow row;
    std::istringstream body(line.substr(colon + 1));
    std::string tok;
    double sign = 1.0;
    while (body >> tok) {
      if (tok == "+" || tok == "-") {
        sign = tok == "-" ? -1.0 : 1.0;
        std::string coef, name;
        body >> coef >> name;
        row.coefs[name] += sign * std::stod(coef);
      } else {
        row.sense = tok;
        std::string rhs;
        body >> rhs;
        row.rhs = std::stod(rhs);
      }
    }
    p.rows.emplace_back(line.substr(0, colon), std::move(row));
  }
  return p;
}

}  // namespace jointsched::testing
