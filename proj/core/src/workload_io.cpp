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

#include "jointsched/workload_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "jointsched/error.hpp"
#include "jointsched/feasibility.hpp"

namespace jointsched {
namespace {

using nlohmann::json;

void expect_object(const json& j, std::string_view where,
                   std::initializer_list<std::string_view> required,
                   std::initializer_list<std::string_view> optional) {
  if (!j.is_object()) throw Error(Errc::kParseError, std::string(where) + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto k : required) known = known || it.key() == k;
    for (auto k : optional) known = known || it.key() == k;
    if (!known) {
      throw Error(Errc::kParseError, "unknown key '" + it.key() + "' in " + std::string(where));
    }
  }
  for (auto k : required) {
    if (!j.contains(std::string(k))) {
      throw Error(Errc::kParseError,
                  "missing key '" + std::string(k) + "' in " + std::string(where));
    }
  }
}

template <typename T>
T get(const json& j, const char* key, std::string_view where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, std::string(where) + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, std::string_view where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

const json& array_at(const json& j, const char* key, std::string_view where) {
  const json& a = j.at(key);
  if (!a.is_array()) {
    throw Error(Errc::kParseError, std::string(where) + "." + key + " must be an array");
  }
  return a;
}

}  // namespace

Workload parse_workload(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::kParseError, e.what());
  }
  expect_object(root, "workload", {"jobs", "cluster", "techniques"}, {});

  Workload w;
  for (const auto& jj : array_at(root, "jobs", "workload")) {
    expect_object(jj, "job", {"id", "total_batches", "base_batch_time", "model_memory"},
                  {"activation_memory"});
    JobSpec job;
    job.id = get<std::string>(jj, "id", "job");
    job.total_batches = get<std::int64_t>(jj, "total_batches", job.id);
    job.base_batch_time = get<double>(jj, "base_batch_time", job.id);
    job.model_memory = get<double>(jj, "model_memory", job.id);
    job.activation_memory = get_or<double>(jj, "activation_memory", 0.0, job.id);
    w.jobs.push_back(std::move(job));
  }

  const json& cluster = root.at("cluster");
  expect_object(cluster, "cluster", {"nodes"}, {});
  for (const auto& jn : array_at(cluster, "nodes", "cluster")) {
    expect_object(jn, "node", {"id", "gpu_count", "gpu_memory"}, {});
    NodeSpec node;
    node.id = get<std::string>(jn, "id", "node");
    node.gpu_count = get<int>(jn, "gpu_count", node.id);
    node.gpu_memory = get<double>(jn, "gpu_memory", node.id);
    w.cluster.nodes.push_back(std::move(node));
  }

  for (const auto& jt : array_at(root, "techniques", "workload")) {
    expect_object(jt, "technique", {"name", "archetype", "serial_fraction", "comm_overhead"},
                  {"offload_multiplier", "min_gpus"});
    TechniqueSpec t;
    t.name = get<std::string>(jt, "name", "technique");
    auto arch = parse_archetype(get<std::string>(jt, "archetype", t.name));
    if (!arch) throw Error(Errc::kParseError, "technique " + t.name + ": unknown archetype");
    t.archetype = *arch;
    t.serial_fraction = get<double>(jt, "serial_fraction", t.name);
    t.comm_overhead = get<double>(jt, "comm_overhead", t.name);
    t.offload_multiplier = get_or<double>(jt, "offload_multiplier", 1.0, t.name);
    t.min_gpus = get_or<int>(jt, "min_gpus", 1, t.name);
    w.techniques.push_back(std::move(t));
  }
  return validate_workload(w);
}

Workload load_workload(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_workload(ss.str());
}

std::string dump_workload(const Workload& workload) {
  json root = json::object();
  json jobs = json::array();
  for (const auto& job : workload.jobs) {
    jobs.push_back({{"id", job.id},
                    {"total_batches", job.total_batches},
                    {"base_batch_time", job.base_batch_time},
                    {"model_memory", job.model_memory},
                    {"activation_memory", job.activation_memory}});
  }
  json nodes = json::array();
  for (const auto& node : workload.cluster.nodes) {
    nodes.push_back(
        {{"id", node.id}, {"gpu_count", node.gpu_count}, {"gpu_memory", node.gpu_memory}});
  }
  json techniques = json::array();
  for (const auto& t : workload.techniques) {
    techniques.push_back({{"name", t.name},
                          {"archetype", std::string(archetype_name(t.archetype))},
                          {"serial_fraction", t.serial_fraction},
                          {"comm_overhead", t.comm_overhead},
                          {"offload_multiplier", t.offload_multiplier},
                          {"min_gpus", t.min_gpus}});
  }
  root["jobs"] = std::move(jobs);
  root["cluster"] = {{"nodes", std::move(nodes)}};
  root["techniques"] = std::move(techniques);
  return root.dump(2) + "\n";
}

void save_workload(const Workload& workload, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
  out << dump_workload(workload);
  if (!out) throw Error(Errc::kIoError, "write failed for " + path.string());
}

}  // namespace jointsched
