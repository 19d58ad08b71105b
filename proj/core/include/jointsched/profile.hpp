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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jointsched/types.hpp"

namespace jointsched {

enum class Provenance { kSynthetic, kIngested };

std::string_view provenance_name(Provenance p);

struct ProfileKey {
  std::string job;
  std::string technique;
  int gpus = 0;

  friend auto operator<=>(const ProfileKey&, const ProfileKey&) = default;
};

// Per-batch latency for every profiled (job, technique, gpu count);
// std::nullopt marks an infeasible entry.
class ProfileTable {
 public:
  using Latency = std::optional<double>;

  explicit ProfileTable(Provenance provenance = Provenance::kSynthetic)
      : provenance_(provenance) {}

  void set(ProfileKey key, Latency latency);

  // nullptr if the key was never profiled.
  const Latency* find(const ProfileKey& key) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<ProfileKey, Latency>& entries() const { return entries_; }

  Provenance provenance() const { return provenance_; }

  // Simulated cost of the trial runs that produced this table.
  double profiling_seconds() const { return profiling_seconds_; }
  void set_profiling_seconds(double s) { profiling_seconds_ = s; }

  friend bool operator==(const ProfileTable&, const ProfileTable&) = default;

 private:
  Provenance provenance_;
  std::map<ProfileKey, Latency> entries_;
  double profiling_seconds_ = 0.0;
};

// The two-function plugin surface every technique executor implements.
// profile() must be reentrant and free of side effects.
class Executor {
 public:
  virtual ~Executor() = default;

  // Per-batch latency from a short trial run, or nullopt if the
  // configuration cannot run.
  virtual std::optional<double> profile(const JobSpec& job, const TechniqueSpec& technique,
                                        int gpus) const = 0;

  // Seconds needed to train `batches` mini-batches under the configuration.
  virtual double execute(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                         std::int64_t batches) const = 0;

  virtual Provenance provenance() const = 0;
};

// latency = mu * base * ((1 - sigma) / g + sigma + kappa * (g - 1)), or
// nullopt when the job does not fit in `gpu_memory` under the technique.
std::optional<double> synthetic_latency(const JobSpec& job, const TechniqueSpec& technique,
                                        int gpus, double gpu_memory);

// Analytic stand-in for on-GPU trial runs. Memory feasibility is judged on
// the roomiest node that has at least g GPUs.
class SyntheticExecutor final : public Executor {
 public:
  explicit SyntheticExecutor(ClusterSpec cluster) : cluster_(std::move(cluster)) {}

  std::optional<double> profile(const JobSpec& job, const TechniqueSpec& technique,
                                int gpus) const override;
  double execute(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                 std::int64_t batches) const override;
  Provenance provenance() const override { return Provenance::kSynthetic; }

 private:
  ClusterSpec cluster_;
};

// Replays measured latencies (e.g. from load_profiles). Missing keys raise
// Error{kMissingEntry}.
class TableExecutor final : public Executor {
 public:
  explicit TableExecutor(ProfileTable table) : table_(std::move(table)) {}

  std::optional<double> profile(const JobSpec& job, const TechniqueSpec& technique,
                                int gpus) const override;
  double execute(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                 std::int64_t batches) const override;
  Provenance provenance() const override { return Provenance::kIngested; }

 private:
  ProfileTable table_;
};

// Number of mini-batches charged per trial run.
inline constexpr int kTrialBatches = 2;

// Calls executor.profile once per (job, feasible config). Any executor
// exception, or a non-positive latency, becomes Error{kExecutorFailure}
// naming the offending key.
ProfileTable build_profile_table(const Workload& workload, const Executor& executor);

// remaining_batches * per-batch latency. Throws Error{kMissingEntry} or
// Error{kInfeasibleEntry}.
double estimate_runtime(const ProfileTable& table, const JobSpec& job,
                        const TechniqueSpec& technique, int gpus,
                        std::int64_t remaining_batches);

// Profile CSV: header "job,technique,gpus,latency_s", "inf" for infeasible.
ProfileTable parse_profiles(std::string_view csv_text);
ProfileTable load_profiles(const std::filesystem::path& path);
std::string dump_profiles(const ProfileTable& table);
void save_profiles(const ProfileTable& table, const std::filesystem::path& path);

// Dense per-workload view of a profile table: for every job, the configs
// that are both memory-feasible and carry a finite latency.
class LatencyIndex {
 public:
  LatencyIndex(const Workload& workload, const ProfileTable& table);

  const Workload& workload() const { return *workload_; }

  std::optional<double> latency(std::size_t job, Config config) const;

  // Technique registration order, then ascending g.
  const std::vector<Config>& usable_configs(std::size_t job) const { return usable_[job]; }

  // Fastest usable config at exactly `gpus` GPUs; ties keep registration order.
  std::optional<Config> best_config_at(std::size_t job, int gpus) const;

  // Smallest g with any usable config.
  std::optional<int> min_gpus(std::size_t job) const;

 private:
  const Workload* workload_;
  std::vector<std::vector<Config>> usable_;
  std::vector<std::vector<double>> latency_;  // parallel to usable_
};

}  // namespace jointsched
