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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jointsched {

// Memory quantities are GiB, times are seconds throughout.

// One model-training trial: a model with fixed hyperparameters.
struct JobSpec {
  std::string id;
  std::int64_t total_batches = 1;
  double base_batch_time = 1.0;    // single-GPU per-batch compute time
  double model_memory = 1.0;       // parameters + optimizer state
  double activation_memory = 0.0;  // per-GPU working set

  friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

struct NodeSpec {
  std::string id;
  int gpu_count = 1;
  double gpu_memory = 1.0;

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct ClusterSpec {
  std::vector<NodeSpec> nodes;

  int max_gpus_per_node() const;
  int total_gpus() const;

  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

enum class Archetype { kReplicated, kSharded, kPipelined, kOffloaded };

std::string_view archetype_name(Archetype a);
std::optional<Archetype> parse_archetype(std::string_view name);

// A registered parallelism technique. Latency and memory behaviour are
// described by the archetype plus three scalar parameters.
struct TechniqueSpec {
  std::string name;
  Archetype archetype = Archetype::kReplicated;
  double serial_fraction = 0.0;     // in [0, 1)
  double comm_overhead = 0.0;       // fractional latency per extra GPU
  double offload_multiplier = 1.0;  // > 1 only for offloaded techniques
  int min_gpus = 1;

  friend bool operator==(const TechniqueSpec&, const TechniqueSpec&) = default;
};

// A (technique, gpu count) choice. `technique` indexes the workload's
// technique registry, so configs are only meaningful next to a Workload.
struct Config {
  std::size_t technique = 0;
  int gpus = 1;

  friend auto operator<=>(const Config&, const Config&) = default;
};

struct Workload {
  std::vector<JobSpec> jobs;
  ClusterSpec cluster;
  std::vector<TechniqueSpec> techniques;

  std::optional<std::size_t> job_index(std::string_view id) const;
  std::optional<std::size_t> node_index(std::string_view id) const;
  std::optional<std::size_t> technique_index(std::string_view name) const;

  // Job indices sorted by id; used wherever ties break on job id.
  std::vector<std::size_t> jobs_by_id() const;

  friend bool operator==(const Workload&, const Workload&) = default;
};

}  // namespace jointsched
