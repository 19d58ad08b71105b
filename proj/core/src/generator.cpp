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

#include "jointsched/generator.hpp"

#include <array>
#include <string>

#include "jointsched/error.hpp"
#include "jointsched/feasibility.hpp"
#include "jointsched/rng.hpp"

namespace jointsched {

std::vector<TechniqueSpec> default_techniques() {
  return {
      {"ddp-like", Archetype::kReplicated, 0.02, 0.01, 1.0, 1},
      {"fsdp-like", Archetype::kSharded, 0.05, 0.03, 1.0, 2},
      {"gpipe-like", Archetype::kPipelined, 0.15, 0.005, 1.0, 2},
      {"offload-like", Archetype::kOffloaded, 0.02, 0.01, 2.5, 1},
  };
}

namespace {

struct Model {
  const char* name;
  double model_memory;
  double activation_memory;
  double base_batch_time;  // at the reference batch size
  std::int64_t batches;    // at the reference batch size
};

struct Preset {
  std::string_view name;
  std::array<Model, 2> models;
  std::array<const char*, 3> learning_rates;
  std::array<int, 2> batch_sizes;  // the first is the reference size
};

constexpr double kGpuMemory = 40.0;
constexpr int kGpusPerNode = 8;

const std::array<Preset, 2>& presets() {
  static const std::array<Preset, 2> kPresets{{
      {"wikitext_mirror",
       {{{"gpt2", 24.0, 6.0, 0.60, 4000}, {"gptj", 64.0, 7.5, 2.40, 3000}}},
       {{"1e-5", "1e-4", "1e-3"}},
       {{16, 32}}},
      {"imagenet_mirror",
       {{{"resnet200", 20.0, 8.0, 0.40, 6000}, {"vitg", 60.0, 9.0, 2.00, 3200}}},
       {{"1e-5", "1e-4", "1e-3"}},
       {{64, 128}}},
  }};
  return kPresets;
}

}  // namespace

std::vector<std::string_view> preset_names() {
  std::vector<std::string_view> out;
  for (const auto& p : presets()) out.push_back(p.name);
  return out;
}

Workload generate_workload(std::string_view preset, int nodes, std::uint64_t seed) {
  const Preset* chosen = nullptr;
  for (const auto& p : presets()) {
    if (p.name == preset) chosen = &p;
  }
  if (!chosen) throw Error(Errc::kUnknownPreset, std::string(preset));
  if (nodes != 1 && nodes != 2) {
    throw Error(Errc::kInvariantViolation, "mirror presets take 1 or 2 nodes");
  }

  Workload w;
  w.techniques = default_techniques();
  for (int n = 0; n < nodes; ++n) {
    w.cluster.nodes.push_back({"node" + std::to_string(n), kGpusPerNode, kGpuMemory});
  }
  SplitMix64 rng(seed);
  const int reference = chosen->batch_sizes[0];
  for (const auto& m : chosen->models) {
    for (const char* lr : chosen->learning_rates) {
      for (int bs : chosen->batch_sizes) {
        const double scale = static_cast<double>(bs) / reference;
        JobSpec job;
        job.id = std::string(m.name) + "-lr" + lr + "-bs" + std::to_string(bs);
        job.total_batches = static_cast<std::int64_t>(static_cast<double>(m.batches) / scale);
        job.base_batch_time = m.base_batch_time * scale * rng.uniform(0.9, 1.1);
        job.model_memory = m.model_memory;
        job.activation_memory = m.activation_memory;
        w.jobs.push_back(std::move(job));
      }
    }
  }
  return validate_workload(w);
}

Workload random_workload(std::uint64_t seed, const RandomWorkloadOptions& options) {
  SplitMix64 rng(seed);
  Workload w;
  w.techniques = default_techniques();
  const int nodes =
      options.min_nodes + static_cast<int>(rng.below(options.max_nodes - options.min_nodes + 1));
  for (int n = 0; n < nodes; ++n) {
    w.cluster.nodes.push_back({"node" + std::to_string(n), options.gpus_per_node, options.gpu_memory});
  }
  const int jobs =
      options.min_jobs + static_cast<int>(rng.below(options.max_jobs - options.min_jobs + 1));
  for (int j = 0; j < jobs; ++j) {
    JobSpec job;
    job.id = "job" + std::to_string(j);
    const bool large = rng.unit() < 0.4;
    // Large models need at least two shards; small ones replicate.
    job.model_memory = large ? rng.uniform(1.1, 2.5) * options.gpu_memory
                             : rng.uniform(0.2, 0.7) * options.gpu_memory;
    job.activation_memory = rng.uniform(0.05, 0.2) * options.gpu_memory;
    job.base_batch_time = rng.uniform(0.2, 2.0);
    job.total_batches = 200 + static_cast<std::int64_t>(rng.below(1801));
    w.jobs.push_back(std::move(job));
  }
  return validate_workload(w);
}

}  // namespace jointsched
