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

#include <cstdio>
#include <string>

#include "jointsched/milp.hpp"

namespace jointsched::milp {
namespace {

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string var_name(const Instance& inst, const Workload& w, int v) {
  if (v == inst.makespan_col()) return "M";
  const auto& var = inst.vars[v];
  std::string name = "x[" + w.jobs[var.job].id + "," +
                     w.techniques[var.config.technique].name + "/" +
                     std::to_string(var.config.gpus) + "," + w.cluster.nodes[var.node].id + "," +
                     std::to_string(var.start) + "]";
  return name;
}

std::string row_name(const Row& r, const Workload& w) {
  switch (r.kind) {
    case RowKind::kAssign: return "assign[" + w.jobs[r.job].id + "]";
    case RowKind::kCapacity:
      return "capacity[" + w.cluster.nodes[r.node].id + "," + std::to_string(r.interval) + "]";
    case RowKind::kMakespan: return "makespan[" + w.jobs[r.job].id + "]";
    case RowKind::kArea: return "area";
  }
  return "row";
}

}  // namespace

std::string dump(const Instance& inst, const Workload& w) {
  std::string out = "# delta " + number(inst.delta) + " horizon " + std::to_string(inst.horizon) +
                    " vars " + std::to_string(inst.vars.size()) + "\n";
  for (std::size_t v = 0; v < inst.vars.size(); ++v) {
    const auto& var = inst.vars[v];
    out += "# " + var_name(inst, w, static_cast<int>(v)) + " duration " +
           std::to_string(var.duration) + (var.keeps_running ? " keep" : "") + "\n";
  }
  out += "min M\n";
  for (const auto& r : inst.rows) {
    out += row_name(r, w) + ":";
    for (const auto& t : r.row.terms) {
      out += t.coef < 0 ? " - " : " + ";
      out += number(t.coef < 0 ? -t.coef : t.coef) + " " + var_name(inst, w, t.col);
    }
    switch (r.row.sense) {
      case lp::Sense::kLessEqual: out += " <= "; break;
      case lp::Sense::kGreaterEqual: out += " >= "; break;
      case lp::Sense::kEqual: out += " = "; break;
    }
    out += number(r.row.rhs) + "\n";
  }
  return out;
}

}  // namespace jointsched::milp
