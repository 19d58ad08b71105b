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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "jointsched/workload_io.hpp"
#include "json.hpp"
#include "support/support.hpp"

namespace jointsched {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(JOINTSCHED_CLI) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("jointsched_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    save_workload(testing::two_job_workload(), dir_ / "two.json");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, GeneratePrintsAValidWorkload) {
  const Outcome r = run("generate --preset wikitext_mirror --nodes 2 --seed 7");
  ASSERT_EQ(r.code, 0);
  const Workload w = parse_workload(r.out);
  EXPECT_EQ(w.jobs.size(), 12u);
  EXPECT_EQ(w.cluster.nodes.size(), 2u);
}

TEST_F(Cli, GenerateWritesWorkloadAndProfiles) {
  ASSERT_EQ(run("generate --preset imagenet_mirror --out " + path("gen")).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "gen" / "workload.json"));
  EXPECT_TRUE(fs::exists(dir_ / "gen" / "profiles.csv"));
  const Outcome r = run("compare --workload " + path("gen/workload.json") + " --profiles " +
                    path("gen/profiles.csv") + " --planners current-practice,optimus --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("planner,makespan_s,speedup_vs_current_practice\n", 0), 0u);
}

TEST_F(Cli, ConfigErrorsExitWithTwo) {
  EXPECT_EQ(run("generate --preset cifar").code, 2);
  EXPECT_EQ(run("compare --planners bogus").code, 2);
  EXPECT_EQ(run("compare --workload " + path("two.json") + " --preset imagenet_mirror").code, 2);
  EXPECT_EQ(run("simulate --workload " + path("missing.json")).code, 2);
  EXPECT_EQ(run("simulate --checkpoint-cost -1").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(Cli, PlannerFailureExitsWithOne) {
  std::ofstream(dir_ / "partial.csv") << "job,technique,gpus,latency_s\na,ddp,1,1.0\n";
  EXPECT_EQ(run("simulate --workload " + path("two.json") + " --profiles " + path("partial.csv")).code,
            1);
  EXPECT_EQ(run("plan --workload " + path("two.json") + " --profiles " + path("partial.csv")).code,
            1);
}

TEST_F(Cli, PlanPrintsCsv) {
  const Outcome r = run("plan --workload " + path("two.json") + " --planners current-practice --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "job,technique,gpus,node,start_s,duration_s\n"
            "a,ddp,2,n0,0.000,6.000\n"
            "b,ddp,2,n0,6.000,6.000\n");
}

TEST_F(Cli, CompareWritesEveryOutput) {
  const Outcome r = run("compare --workload " + path("two.json") + " --out " + path("cmp") +
                    " --introspection-interval 2 --checkpoint-cost 0");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("| two |"), std::string::npos);
  for (const char* f : {"comparison.csv", "comparison.md", "saturn.json", "optimus-dynamic.json",
                        "random_timeline.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "cmp" / f)) << f;
  }
  std::ifstream in(dir_ / "cmp" / "saturn.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_DOUBLE_EQ(j["makespan_s"].get<double>(), 10.0);
}

TEST_F(Cli, FormatRestrictsOutputs) {
  ASSERT_EQ(run("simulate --workload " + path("two.json") + " --out " + path("sim") + " --format json")
                .code,
            0);
  EXPECT_TRUE(fs::exists(dir_ / "sim" / "saturn.json"));
  EXPECT_FALSE(fs::exists(dir_ / "sim" / "comparison.csv"));
}

}  // namespace
}  // namespace jointsched
