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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jointsched/types.hpp"

namespace jointsched {

// Snapshot of one unfinished job at a replanning instant. Times are relative
// to that instant.
struct JobProgress {
  struct Running {
    Config config;
    std::size_t node = 0;
    double batches_done = 0.0;  // exact, may be fractional mid-batch
  };
  // GPUs still held by a checkpoint that has not finished draining.
  struct Hold {
    std::size_t node = 0;
    int gpus = 0;
    double until = 0.0;
  };

  std::size_t job = 0;
  std::int64_t remaining_batches = 0;  // total - floor(batches_done)
  std::optional<Running> running;
  std::optional<Hold> hold;
};

// Everything a planner needs to replan the unfinished part of a workload.
struct ReplanContext {
  std::vector<JobProgress> jobs;
  double checkpoint_overhead = 0.0;

  const JobProgress* find(std::size_t job) const {
    for (const auto& p : jobs) {
      if (p.job == job) return &p;
    }
    return nullptr;
  }
};

}  // namespace jointsched
