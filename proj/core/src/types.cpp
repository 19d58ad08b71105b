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

#include "jointsched/types.hpp"

#include <algorithm>
#include <numeric>

namespace jointsched {

int ClusterSpec::max_gpus_per_node() const {
  int best = 0;
  for (const auto& n : nodes) best = std::max(best, n.gpu_count);
  return best;
}

int ClusterSpec::total_gpus() const {
  int total = 0;
  for (const auto& n : nodes) total += n.gpu_count;
  return total;
}

std::string_view archetype_name(Archetype a) {
  switch (a) {
    case Archetype::kReplicated: return "replicated";
    case Archetype::kSharded: return "sharded";
    case Archetype::kPipelined: return "pipelined";
    case Archetype::kOffloaded: return "offloaded";
  }
  return "unknown";
}

std::optional<Archetype> parse_archetype(std::string_view name) {
  for (auto a : {Archetype::kReplicated, Archetype::kSharded, Archetype::kPipelined,
                 Archetype::kOffloaded}) {
    if (archetype_name(a) == name) return a;
  }
  return std::nullopt;
}

std::optional<std::size_t> Workload::job_index(std::string_view id) const {
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (jobs[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Workload::node_index(std::string_view id) const {
  for (std::size_t i = 0; i < cluster.nodes.size(); ++i) {
    if (cluster.nodes[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Workload::technique_index(std::string_view name) const {
  for (std::size_t i = 0; i < techniques.size(); ++i) {
    if (techniques[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Workload::jobs_by_id() const {
  std::vector<std::size_t> order(jobs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return jobs[a].id < jobs[b].id; });
  return order;
}

}  // namespace jointsched
