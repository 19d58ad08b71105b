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

#include "jointsched/profile.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jointsched/error.hpp"
#include "jointsched/feasibility.hpp"

namespace jointsched {

std::string_view provenance_name(Provenance p) {
  return p == Provenance::kSynthetic ? "synthetic" : "ingested";
}

void ProfileTable::set(ProfileKey key, Latency latency) {
  entries_.insert_or_assign(std::move(key), latency);
}

const ProfileTable::Latency* ProfileTable::find(const ProfileKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<double> synthetic_latency(const JobSpec& job, const TechniqueSpec& technique,
                                        int gpus, double gpu_memory) {
  if (gpus < 1 || !memory_feasible(job, technique, gpus, gpu_memory)) return std::nullopt;
  const double g = static_cast<double>(gpus);
  const double sigma = technique.serial_fraction;
  return technique.offload_multiplier * job.base_batch_time *
         ((1.0 - sigma) / g + sigma + technique.comm_overhead * (g - 1.0));
}

std::optional<double> SyntheticExecutor::profile(const JobSpec& job,
                                                 const TechniqueSpec& technique,
                                                 int gpus) const {
  std::optional<double> memory;
  for (const auto& node : cluster_.nodes) {
    if (node.gpu_count >= gpus) memory = std::max(memory.value_or(0.0), node.gpu_memory);
  }
  if (!memory) return std::nullopt;
  return synthetic_latency(job, technique, gpus, *memory);
}

double SyntheticExecutor::execute(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                                  std::int64_t batches) const {
  auto latency = profile(job, technique, gpus);
  if (!latency) throw Error(Errc::kInfeasibleEntry, job.id + "/" + technique.name);
  return static_cast<double>(batches) * *latency;
}

std::optional<double> TableExecutor::profile(const JobSpec& job, const TechniqueSpec& technique,
                                             int gpus) const {
  const auto* entry = table_.find({job.id, technique.name, gpus});
  if (!entry) {
    throw Error(Errc::kMissingEntry,
                job.id + "," + technique.name + "," + std::to_string(gpus));
  }
  return *entry;
}

double TableExecutor::execute(const JobSpec& job, const TechniqueSpec& technique, int gpus,
                              std::int64_t batches) const {
  auto latency = profile(job, technique, gpus);
  if (!latency) throw Error(Errc::kInfeasibleEntry, job.id + "/" + technique.name);
  return static_cast<double>(batches) * *latency;
}

ProfileTable build_profile_table(const Workload& workload, const Executor& executor) {
  ProfileTable table(executor.provenance());
  double cost = 0.0;
  for (const auto& job : workload.jobs) {
    for (const auto& c : feasible_configs(job, workload.cluster, workload.techniques)) {
      const auto& technique = workload.techniques[c.technique];
      ProfileKey key{job.id, technique.name, c.gpus};
      const std::string where = job.id + "," + technique.name + "," + std::to_string(c.gpus);
      std::optional<double> latency;
      try {
        latency = executor.profile(job, technique, c.gpus);
      } catch (const std::exception& e) {
        throw Error(Errc::kExecutorFailure, where + ": " + e.what());
      }
      if (latency && !(std::isfinite(*latency) && *latency > 0.0)) {
        throw Error(Errc::kExecutorFailure, where + ": non-positive latency");
      }
      if (latency) cost += kTrialBatches * *latency;
      table.set(std::move(key), latency);
    }
  }
  table.set_profiling_seconds(cost);
  return table;
}

double estimate_runtime(const ProfileTable& table, const JobSpec& job,
                        const TechniqueSpec& technique, int gpus,
                        std::int64_t remaining_batches) {
  const std::string where = job.id + "," + technique.name + "," + std::to_string(gpus);
  const auto* entry = table.find({job.id, technique.name, gpus});
  if (!entry) throw Error(Errc::kMissingEntry, where);
  if (!*entry) throw Error(Errc::kInfeasibleEntry, where);
  return static_cast<double>(remaining_batches) * **entry;
}

namespace {

constexpr std::string_view kHeader = "job,technique,gpus,latency_s";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = line.find(sep, pos);
    out.push_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

ProfileTable parse_profiles(std::string_view csv_text) {
  ProfileTable table(Provenance::kIngested);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos < csv_text.size()) {
    auto end = csv_text.find('\n', pos);
    std::string_view line =
        csv_text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? csv_text.size() : end + 1;
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    if (!saw_header) {
      if (line != kHeader) throw Error(Errc::kParseError, where + ": expected header");
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty()) {
      throw Error(Errc::kParseError, where + ": expected 4 fields");
    }
    int gpus = 0;
    auto [gp, gec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), gpus);
    if (gec != std::errc() || gp != fields[2].data() + fields[2].size() || gpus < 1) {
      throw Error(Errc::kParseError, where + ": bad gpus");
    }
    std::optional<double> latency;
    if (fields[3] != "inf") {
      double v = 0.0;
      auto [lp, lec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), v);
      if (lec != std::errc() || lp != fields[3].data() + fields[3].size() || !std::isfinite(v)) {
        throw Error(Errc::kParseError, where + ": bad latency");
      }
      if (v <= 0.0) throw Error(Errc::kNegativeLatency, where);
      latency = v;
    }
    ProfileKey key{std::string(fields[0]), std::string(fields[1]), gpus};
    if (table.find(key)) throw Error(Errc::kParseError, where + ": duplicate entry");
    table.set(std::move(key), latency);
  }
  if (!saw_header) throw Error(Errc::kParseError, "line 1: expected header");
  return table;
}

ProfileTable load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_profiles(ss.str());
}

std::string dump_profiles(const ProfileTable& table) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& [key, latency] : table.entries()) {
    out += key.job + "," + key.technique + "," + std::to_string(key.gpus) + ",";
    out += latency ? format_double(*latency) : std::string("inf");
    out += '\n';
  }
  return out;
}

void save_profiles(const ProfileTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
  out << dump_profiles(table);
  if (!out) throw Error(Errc::kIoError, "write failed for " + path.string());
}

LatencyIndex::LatencyIndex(const Workload& workload, const ProfileTable& table)
    : workload_(&workload),
      usable_(workload.jobs.size()),
      latency_(workload.jobs.size()) {
  for (std::size_t j = 0; j < workload.jobs.size(); ++j) {
    const auto& job = workload.jobs[j];
    for (const auto& c : feasible_configs(job, workload.cluster, workload.techniques)) {
      const auto* entry = table.find({job.id, workload.techniques[c.technique].name, c.gpus});
      if (entry && *entry) {
        usable_[j].push_back(c);
        latency_[j].push_back(**entry);
      }
    }
  }
}

std::optional<double> LatencyIndex::latency(std::size_t job, Config config) const {
  const auto& configs = usable_[job];
  for (std::size_t k = 0; k < configs.size(); ++k) {
    if (configs[k] == config) return latency_[job][k];
  }
  return std::nullopt;
}

std::optional<Config> LatencyIndex::best_config_at(std::size_t job, int gpus) const {
  std::optional<Config> best;
  double best_latency = 0.0;
  for (std::size_t k = 0; k < usable_[job].size(); ++k) {
    const auto& c = usable_[job][k];
    if (c.gpus != gpus) continue;
    if (!best || latency_[job][k] < best_latency) {
      best = c;
      best_latency = latency_[job][k];
    }
  }
  return best;
}

std::optional<int> LatencyIndex::min_gpus(std::size_t job) const {
  std::optional<int> g;
  for (const auto& c : usable_[job]) g = std::min(g.value_or(c.gpus), c.gpus);
  return g;
}

}  // namespace jointsched
