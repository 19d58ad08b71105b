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

#include "jointsched/experiment.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <future>

#include "jointsched/generator.hpp"
#include "jointsched/report.hpp"
#include "jointsched/workload_io.hpp"

namespace jointsched {

bool ExperimentResult::ok() const {
  return std::all_of(outcomes.begin(), outcomes.end(),
                     [](const PlannerOutcome& o) { return o.report.has_value(); });
}

std::vector<SimReport> ExperimentResult::reports() const {
  std::vector<SimReport> out;
  for (const auto& o : outcomes) {
    if (o.report) out.push_back(*o.report);
  }
  return out;
}

Workload experiment_workload(const ExperimentConfig& config) {
  if (config.workload_path) return load_workload(*config.workload_path);
  return generate_workload(config.preset, config.nodes, config.seed);
}

ProfileTable experiment_profiles(const ExperimentConfig& config, const Workload& workload) {
  if (config.profiles_path) return load_profiles(*config.profiles_path);
  return build_profile_table(workload, SyntheticExecutor(workload.cluster));
}

SimReport run_planner(const Workload& workload, const ProfileTable& table,
                      const PlannerSpec& spec, const ExperimentConfig& config) {
  const LatencyIndex index(workload, table);
  const PlanningInput input{workload, index, nullptr};
  const Plan plan0 = make_plan(spec, input, config.saturn);

  SimOptions options;
  options.checkpoint_overhead = config.checkpoint_overhead;
  options.saturn = config.saturn;
  if (uses_introspection(spec.kind)) {
    options.introspection_interval =
        config.introspection_interval.value_or(plan0.predicted_makespan / 10.0);
    options.replanner = spec;
  }
  SimReport report = simulate(workload, table, plan0, options);
  report.planner = spec.kind;
  report.seed = spec.seed;
  verify_report(report, workload, table);
  return report;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.planners.empty()) throw Error(Errc::kInvariantViolation, "no planners selected");
  ExperimentResult result{"", experiment_workload(config), ProfileTable{}, {}};
  result.table = experiment_profiles(config, result.workload);
  if (config.workload_path) {
    result.label = config.workload_path->stem().string();
  } else {
    result.label = fmt::format("{} ({} node{})", config.preset, config.nodes,
                               config.nodes == 1 ? "" : "s");
  }

  std::vector<std::future<SimReport>> runs;
  for (const auto& spec : config.planners) {
    runs.push_back(std::async(std::launch::async, [&result, &config, spec] {
      return run_planner(result.workload, result.table, spec, config);
    }));
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    PlannerOutcome outcome{config.planners[i], std::nullopt, std::nullopt, ""};
    try {
      outcome.report = runs[i].get();
    } catch (const Error& e) {
      outcome.error = e.code();
      outcome.message = fmt::format("{}: {}", planner_name(outcome.spec.kind), e.what());
    } catch (const std::exception& e) {
      outcome.error = Errc::kInvariantViolation;
      outcome.message = fmt::format("{}: {}", planner_name(outcome.spec.kind), e.what());
    }
    result.outcomes.push_back(std::move(outcome));
  }
  return result;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
}

}  // namespace

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir,
                   const OutputFormats& formats) {
  const auto reports = result.reports();
  if (reports.empty()) throw Error(Errc::kInvariantViolation, "no reports to emit");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIoError, "cannot create " + dir.string() + ": " + ec.message());

  for (const auto& r : reports) {
    const std::string name(planner_name(r.planner));
    if (formats.json) write_file(dir / (name + ".json"), report_json(r, result.workload));
    if (formats.csv) write_file(dir / (name + "_timeline.csv"), timeline_csv(r, result.workload));
  }
  if (formats.csv) write_file(dir / "comparison.csv", comparison_csv(reports));
  if (formats.markdown) {
    write_file(dir / "comparison.md", comparison_markdown(reports, result.label));
  }
}

}  // namespace jointsched
