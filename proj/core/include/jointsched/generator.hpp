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

#include <cstdint>
#include <string_view>
#include <vector>

#include "jointsched/types.hpp"

namespace jointsched {

// ddp-like, fsdp-like, gpipe-like and offload-like, one per archetype.
std::vector<TechniqueSpec> default_techniques();

// Preset names accepted by generate_workload.
std::vector<std::string_view> preset_names();

// 12-job grid (2 models x 3 learning rates x 2 batch sizes) on `nodes` x 8
// GPUs. Throws Error{kUnknownPreset} for other names and
// Error{kInvariantViolation} unless nodes is 1 or 2.
Workload generate_workload(std::string_view preset, int nodes, std::uint64_t seed);

struct RandomWorkloadOptions {
  int min_jobs = 4;
  int max_jobs = 8;
  int min_nodes = 1;
  int max_nodes = 2;
  int gpus_per_node = 4;
  double gpu_memory = 40.0;
};

// Small seeded workload mixing replicable and shard-only models.
Workload random_workload(std::uint64_t seed, const RandomWorkloadOptions& options = {});

}  // namespace jointsched
