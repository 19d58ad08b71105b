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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jointsched/milp.hpp"
#include "jointsched/profile.hpp"
#include "jointsched/types.hpp"

namespace jointsched::testing {

TechniqueSpec technique(std::string name, Archetype archetype, double sigma = 0.0,
                        double kappa = 0.0, double mu = 1.0, int min_gpus = 1);

JobSpec job(std::string id, std::int64_t batches, double base, double model = 1.0,
            double activation = 0.0);

ClusterSpec cluster(int nodes, int gpus, double memory = 40.0);

// Two identical jobs on one 2-GPU node: 10 s alone on one GPU, 6 s on two.
Workload two_job_workload();

// Latency computed straight from the cost-model formula, without the
// library's memory check.
double latency_formula(double base, double sigma, double kappa, double mu, int g);

// Small random workload whose joint program has at most `max_intervals`
// intervals at unit-scale delta. Used for the solver oracles.
struct TinyCase {
  Workload workload;
  ProfileTable table;
  milp::Instance instance;
};
TinyCase tiny_case(std::uint64_t seed, int max_intervals = 8);

// Exhaustive search over variable choices with its own interval-usage
// check. Returns the optimal makespan in seconds, or nullopt if nothing is
// feasible.
std::optional<double> oracle_optimum(const milp::Instance& instance);

// Parsed form of the text dump: objective plus rows keyed by name.
struct ParsedRow {
  std::map<std::string, double> coefs;
  std::string sense;
  double rhs = 0.0;
};
struct ParsedProgram {
  std::string objective;
  double delta = 0.0;
  int horizon = 0;
  std::map<std::string, int> durations;
  std::vector<std::pair<std::string, ParsedRow>> rows;
};
ParsedProgram parse_dump(const std::string& text);

}  // namespace jointsched::testing
