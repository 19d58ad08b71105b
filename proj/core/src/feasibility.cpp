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

#include "jointsched/feasibility.hpp"

#include <cmath>
#include <set>
#include <string>

#include "jointsched/error.hpp"

namespace jointsched {

bool memory_feasible(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                     double gpu_memory) {
  double shard = 1.0;
  switch (technique.archetype) {
    case Archetype::kOffloaded:
      return true;
    case Archetype::kReplicated:
      shard = 1.0;
      break;
    case Archetype::kSharded:
    case Archetype::kPipelined:
      shard = static_cast<double>(gpus);
      break;
  }
  return job.model_memory / shard + job.activation_memory <= gpu_memory;
}

bool config_fits_node(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                      const NodeSpec& node) {
  return gpus >= technique.min_gpus && gpus <= node.gpu_count &&
         memory_feasible(job, technique, gpus, node.gpu_memory);
}

bool config_fits_cluster(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                         const ClusterSpec& cluster) {
  for (const auto& node : cluster.nodes) {
    if (config_fits_node(job, technique, gpus, node)) return true;
  }
  return false;
}

std::vector<Config> feasible_configs(const JobSpec& job, const ClusterSpec& cluster,
                                     std::span<const TechniqueSpec> techniques) {
  std::vector<Config> out;
  const int max_g = cluster.max_gpus_per_node();
  for (std::size_t t = 0; t < techniques.size(); ++t) {
    for (int g = std::max(1, techniques[t].min_gpus); g <= max_g; ++g) {
      if (config_fits_cluster(job, techniques[t], g, cluster)) out.push_back({t, g});
    }
  }
  return out;
}

namespace {

void require(bool ok, const std::string& field) {
  if (!ok) throw Error(Errc::kInvariantViolation, field);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

Workload validate_workload(const Workload& workload) {
  std::set<std::string> seen;
  for (const auto& job : workload.jobs) {
    require(!job.id.empty(), "job.id");
    if (!seen.insert(job.id).second) throw Error(Errc::kDuplicateId, "job " + job.id);
    require(job.total_batches >= 1, "job " + job.id + ".total_batches");
    require(finite_positive(job.base_batch_time), "job " + job.id + ".base_batch_time");
    require(finite_positive(job.model_memory), "job " + job.id + ".model_memory");
    require(std::isfinite(job.activation_memory) && job.activation_memory >= 0.0,
            "job " + job.id + ".activation_memory");
  }

  require(!workload.cluster.nodes.empty(), "cluster.nodes");
  seen.clear();
  for (const auto& node : workload.cluster.nodes) {
    require(!node.id.empty(), "node.id");
    if (!seen.insert(node.id).second) throw Error(Errc::kDuplicateId, "node " + node.id);
    require(node.gpu_count >= 1, "node " + node.id + ".gpu_count");
    require(finite_positive(node.gpu_memory), "node " + node.id + ".gpu_memory");
  }

  seen.clear();
  for (const auto& t : workload.techniques) {
    require(!t.name.empty(), "technique.name");
    if (!seen.insert(t.name).second) throw Error(Errc::kDuplicateId, "technique " + t.name);
    require(t.serial_fraction >= 0.0 && t.serial_fraction < 1.0,
            "technique " + t.name + ".serial_fraction");
    require(std::isfinite(t.comm_overhead) && t.comm_overhead >= 0.0,
            "technique " + t.name + ".comm_overhead");
    require(std::isfinite(t.offload_multiplier) && t.offload_multiplier >= 1.0,
            "technique " + t.name + ".offload_multiplier");
    require(t.archetype == Archetype::kOffloaded || t.offload_multiplier == 1.0,
            "technique " + t.name + ".offload_multiplier");
    require(t.min_gpus >= 1, "technique " + t.name + ".min_gpus");
  }

  for (const auto& job : workload.jobs) {
    if (feasible_configs(job, workload.cluster, workload.techniques).empty()) {
      throw Error(Errc::kNoFeasibleConfig, job.id);
    }
  }
  return workload;
}

}  // namespace jointsched
