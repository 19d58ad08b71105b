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

#pragma once

#include <span>
#include <vector>

#include "jointsched/types.hpp"

namespace jointsched {

// Shard-factor memory rule: replicated keeps the whole model on every GPU,
// sharded and pipelined split it g ways, offloaded always fits.
bool memory_feasible(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                     double gpu_memory);

// True if some node can host `gpus` GPUs of this technique for the job.
bool config_fits_cluster(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                         const ClusterSpec& cluster);

// True if node `node` has enough GPUs and memory for (technique, gpus).
bool config_fits_node(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                      const NodeSpec& node);

// All memory-feasible configs, in technique registration order then ascending g.
std::vector<Config> feasible_configs(const JobSpec& job, const ClusterSpec& cluster,
                                     std::span<const TechniqueSpec> techniques);

// Checks every type invariant and that each job has a feasible config.
// Throws Error{kDuplicateId | kInvariantViolation | kNoFeasibleConfig}.
Workload validate_workload(const Workload& workload);

}  // namespace jointsched
