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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jointsched/error.hpp"
#include "jointsched/experiment.hpp"
#include "jointsched/generator.hpp"
#include "jointsched/report.hpp"
#include "jointsched/workload_io.hpp"

namespace js = jointsched;

namespace {

constexpr int kOk = 0;
constexpr int kPlannerFailure = 1;
constexpr int kConfigError = 2;

struct Args {
  std::string workload;
  std::string preset = "wikitext_mirror";
  int nodes = 1;
  std::uint64_t seed = 7;
  std::string planners;
  std::string profiles;
  std::optional<double> interval;
  double checkpoint_cost = 30.0;
  int max_intervals = 48;
  std::string out;
  std::string format;
};

void add_source(CLI::App* cmd, Args& a) {
  auto* wl = cmd->add_option("--workload", a.workload, "workload JSON file");
  cmd->add_option("--preset", a.preset, "generator preset")->excludes(wl);
  cmd->add_option("--nodes", a.nodes, "nodes for the preset (1 or 2)")->excludes(wl);
  cmd->add_option("--seed", a.seed, "generator and Random planner seed");
  cmd->add_option("--profiles", a.profiles, "profile CSV (synthetic when omitted)");
  cmd->add_option("--delta-max-intervals", a.max_intervals, "interval budget of the joint program")
      ->check(CLI::PositiveNumber);
}

void add_run(CLI::App* cmd, Args& a, const std::string& default_planners) {
  a.planners = default_planners;
  cmd->add_option("--planners", a.planners, "comma-separated planners")->capture_default_str();
  cmd->add_option("--introspection-interval", a.interval,
                  "replanning interval in seconds (default predicted/10, 0 disables)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--checkpoint-cost", a.checkpoint_cost, "checkpoint overhead in seconds")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", a.out, "output directory");
  cmd->add_option("--format", a.format, "restrict output to one format")
      ->check(CLI::IsMember({"csv", "json", "markdown"}));
}

js::ExperimentConfig make_config(const Args& a) {
  js::ExperimentConfig c;
  if (!a.workload.empty()) c.workload_path = a.workload;
  c.preset = a.preset;
  c.nodes = a.nodes;
  c.seed = a.seed;
  if (!a.profiles.empty()) c.profiles_path = a.profiles;
  c.introspection_interval = a.interval;
  c.checkpoint_overhead = a.checkpoint_cost;
  c.saturn.delta.max_intervals = a.max_intervals;
  std::stringstream list(a.planners);
  std::string item;
  while (std::getline(list, item, ',')) {
    if (item.empty()) continue;
    auto spec = js::parse_planner(item, a.seed);
    if (!spec) throw js::Error(js::Errc::kParseError, "unknown planner '" + item + "'");
    c.planners.push_back(*spec);
  }
  if (c.planners.empty()) throw js::Error(js::Errc::kParseError, "no planners given");
  return c;
}

js::OutputFormats formats(const Args& a) {
  if (a.format.empty()) return {};
  return {a.format == "csv", a.format == "json", a.format == "markdown"};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw js::Error(js::Errc::kIoError, "cannot write " + path.string());
}

int cmd_plan(const Args& a) {
  const auto config = make_config(a);
  const auto workload = js::experiment_workload(config);
  const auto table = js::experiment_profiles(config, workload);
  const js::LatencyIndex index(workload, table);
  const js::PlanningInput input{workload, index, nullptr};
  if (!a.out.empty()) std::filesystem::create_directories(a.out);
  int status = kOk;
  for (const auto& spec : config.planners) {
    js::Plan plan;
    try {
      plan = js::make_plan(spec, input, config.saturn);
    } catch (const js::Error& e) {
      std::cerr << js::planner_name(spec.kind) << ": " << e.what() << "\n";
      status = kPlannerFailure;
      continue;
    }
    const std::string name(js::planner_name(spec.kind));
    const std::string fmt = a.format.empty() ? "markdown" : a.format;
    std::string text;
    std::string ext;
    if (fmt == "csv") {
      text = js::plan_csv(plan, workload);
      ext = ".csv";
    } else if (fmt == "json") {
      text = js::plan_json(plan, workload, spec.kind);
      ext = ".json";
    } else {
      text = js::plan_markdown(plan, workload, spec.kind);
      ext = ".md";
    }
    if (a.out.empty()) {
      std::cout << text << (fmt == "markdown" ? "\n" : "");
    } else {
      write_text(std::filesystem::path(a.out) / (name + "_plan" + ext), text);
    }
  }
  return status;
}

int cmd_run(const Args& a) {
  const auto config = make_config(a);
  const auto result = js::run_experiment(config);
  for (const auto& o : result.outcomes) {
    if (o.error) std::cerr << o.message << "\n";
  }
  const auto reports = result.reports();
  if (!reports.empty()) {
    if (!a.out.empty()) js::write_outputs(result, a.out, formats(a));
    if (a.format == "csv") {
      std::cout << js::comparison_csv(reports);
    } else if (a.format == "json") {
      for (const auto& r : reports) std::cout << js::report_json(r, result.workload);
    } else {
      std::cout << js::comparison_markdown(reports, result.label);
    }
  }
  return result.ok() ? kOk : kPlannerFailure;
}

int cmd_generate(const Args& a) {
  const auto workload = js::generate_workload(a.preset, a.nodes, a.seed);
  if (a.out.empty()) {
    std::cout << js::dump_workload(workload);
    return kOk;
  }
  std::filesystem::create_directories(a.out);
  js::save_workload(workload, std::filesystem::path(a.out) / "workload.json");
  const auto table = js::build_profile_table(workload, js::SyntheticExecutor(workload.cluster));
  js::save_profiles(table, std::filesystem::path(a.out) / "profiles.csv");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint parallelism, allocation and scheduling planner for multi-model training"};
  app.require_subcommand(1);

  Args plan_args, sim_args, cmp_args, gen_args;
  auto* plan = app.add_subcommand("plan", "print each planner's initial plan");
  add_source(plan, plan_args);
  plan_args.planners = "saturn";
  plan->add_option("--planners", plan_args.planners, "comma-separated planners")
      ->capture_default_str();
  plan->add_option("--out", plan_args.out, "output directory");
  plan->add_option("--format", plan_args.format, "csv, json or markdown")
      ->check(CLI::IsMember({"csv", "json", "markdown"}));

  auto* sim = app.add_subcommand("simulate", "plan and simulate with introspection");
  add_source(sim, sim_args);
  add_run(sim, sim_args, "saturn");

  auto* cmp = app.add_subcommand("compare", "simulate every planner and tabulate makespans");
  add_source(cmp, cmp_args);
  add_run(cmp, cmp_args, "saturn,current-practice,random,optimus,optimus-dynamic");

  auto* gen = app.add_subcommand("generate", "write a preset workload and its synthetic profiles");
  gen->add_option("--preset", gen_args.preset, "generator preset")->capture_default_str();
  gen->add_option("--nodes", gen_args.nodes, "nodes (1 or 2)")->capture_default_str();
  gen->add_option("--seed", gen_args.seed, "jitter seed")->capture_default_str();
  gen->add_option("--out", gen_args.out, "output directory (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*plan) return cmd_plan(plan_args);
    if (*sim) return cmd_run(sim_args);
    if (*cmp) return cmd_run(cmp_args);
    return cmd_generate(gen_args);
  } catch (const js::Error& e) {
    std::cerr << "error [" << js::errc_name(e.code()) << "]: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
