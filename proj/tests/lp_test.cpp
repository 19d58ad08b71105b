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

#include <random>

#include "jointsched/lp.hpp"

namespace jointsched::lp {
namespace {

Row row(std::vector<Term> terms, Sense sense, double rhs) { return {std::move(terms), sense, rhs}; }

TEST(Simplex, TwoVariableTextbookProblem) {
  Problem p;
  p.add_column(-1.0, 0.0, kInfinity);
  p.add_column(-1.0, 0.0, kInfinity);
  p.rows = {row({{0, 1.0}, {1, 2.0}}, Sense::kLessEqual, 4.0),
            row({{0, 3.0}, {1, 1.0}}, Sense::kLessEqual, 6.0)};
  const Result r = solve(p);
  ASSERT_EQ(r.status, Status::kOptimal);
  EXPECT_NEAR(r.objective, -14.0 / 5.0, 1e-9);
  EXPECT_NEAR(r.x[0], 8.0 / 5.0, 1e-9);
  EXPECT_NEAR(r.x[1], 6.0 / 5.0, 1e-9);
}

TEST(Simplex, KleeMintyCube) {
  Problem p;
  p.add_column(-100.0, 0.0, kInfinity);
  p.add_column(-10.0, 0.0, kInfinity);
  p.add_column(-1.0, 0.0, kInfinity);
  p.rows = {row({{0, 1.0}}, Sense::kLessEqual, 1.0),
            row({{0, 20.0}, {1, 1.0}}, Sense::kLessEqual, 100.0),
            row({{0, 200.0}, {1, 20.0}, {2, 1.0}}, Sense::kLessEqual, 10000.0)};
  const Result r = solve(p);
  ASSERT_EQ(r.status, Status::kOptimal);
  EXPECT_NEAR(r.objective, -10000.0, 1e-7);
}

TEST(Simplex, EqualityAndGreaterRowsWithBounds) {
  // min x + 2y + 3z, x + y + z = 1, y + z >= 0.5, z <= 0.2, x <= 0.6
  Problem p;
  p.add_column(1.0, 0.0, 0.6);
  p.add_column(2.0, 0.0, 1.0);
  p.add_column(3.0, 0.0, 0.2);
  p.rows = {row({{0, 1.0}, {1, 1.0}, {2, 1.0}}, Sense::kEqual, 1.0),
            row({{1, 1.0}, {2, 1.0}}, Sense::kGreaterEqual, 0.5)};
  const Result r = solve(p);
  ASSERT_EQ(r.status, Status::kOptimal);
  EXPECT_NEAR(r.objective, 0.5 * 1.0 + 0.5 * 2.0, 1e-9);
}

TEST(Simplex, DetectsInfeasibleAndUnbounded) {
  Problem inf;
  inf.add_column(1.0, 0.0, kInfinity);
  inf.rows = {row({{0, 1.0}}, Sense::kGreaterEqual, 2.0), row({{0, 1.0}}, Sense::kLessEqual, 1.0)};
  EXPECT_EQ(solve(inf).status, Status::kInfeasible);

  Problem unb;
  unb.add_column(-1.0, 0.0, kInfinity);
  unb.add_column(0.0, 0.0, 1.0);
  unb.rows = {row({{0, 1.0}, {1, -1.0}}, Sense::kGreaterEqual, 0.0)};
  EXPECT_EQ(solve(unb).status, Status::kUnbounded);
}

TEST(Simplex, DegenerateVerticesTerminate) {
  // Many constraints through the same optimal vertex (1, 1).
  Problem p;
  p.add_column(-1.0, 0.0, kInfinity);
  p.add_column(-1.0, 0.0, kInfinity);
  for (int k = 1; k <= 40; ++k) {
    p.rows.push_back(row({{0, static_cast<double>(k)}, {1, 1.0}}, Sense::kLessEqual, k + 1.0));
    p.rows.push_back(row({{0, 1.0}, {1, static_cast<double>(k)}}, Sense::kLessEqual, k + 1.0));
  }
  const Result r = solve(p);
  ASSERT_EQ(r.status, Status::kOptimal);
  EXPECT_NEAR(r.objective, -2.0, 1e-9);
}

// Vertex enumeration over every pair of tight constraints (rows and box
// bounds) is an independent oracle for bounded two-variable problems.
double vertex_oracle(const Problem& p) {
  struct Line {
    double a, b, c;  // a x + b y = c
  };
  std::vector<Line> lines;
  for (const auto& r : p.rows) {
    double a = 0, b = 0;
    for (auto t : r.terms) (t.col == 0 ? a : b) += t.coef;
    lines.push_back({a, b, r.rhs});
  }
  lines.push_back({1, 0, p.lower[0]});
  lines.push_back({1, 0, p.upper[0]});
  lines.push_back({0, 1, p.lower[1]});
  lines.push_back({0, 1, p.upper[1]});
  auto feasible = [&](double x, double y) {
    if (x < p.lower[0] - 1e-7 || x > p.upper[0] + 1e-7) return false;
    if (y < p.lower[1] - 1e-7 || y > p.upper[1] + 1e-7) return false;
    for (const auto& r : p.rows) {
      double lhs = 0;
      for (auto t : r.terms) lhs += t.coef * (t.col == 0 ? x : y);
      if (r.sense == Sense::kLessEqual && lhs > r.rhs + 1e-7) return false;
      if (r.sense == Sense::kGreaterEqual && lhs < r.rhs - 1e-7) return false;
    }
    return true;
  };
  double best = kInfinity;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double det = lines[i].a * lines[j].b - lines[j].a * lines[i].b;
      if (std::abs(det) < 1e-12) continue;
      const double x = (lines[i].c * lines[j].b - lines[j].c * lines[i].b) / det;
      const double y = (lines[i].a * lines[j].c - lines[j].a * lines[i].c) / det;
      if (feasible(x, y)) best = std::min(best, p.cost[0] * x + p.cost[1] * y);
    }
  }
  return best;
}

TEST(Simplex, AgreesWithVertexEnumerationOnRandomBoxedProblems) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int optimal = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Problem p;
    p.add_column(u(gen), -2.0 - std::abs(u(gen)), 2.0 + std::abs(u(gen)));
    p.add_column(u(gen), -2.0 - std::abs(u(gen)), 2.0 + std::abs(u(gen)));
    const int rows = 1 + static_cast<int>(gen() % 5);
    for (int k = 0; k < rows; ++k) {
      const Sense s = gen() % 3 == 0 ? Sense::kGreaterEqual : Sense::kLessEqual;
      p.rows.push_back(row({{0, u(gen)}, {1, u(gen)}}, s, u(gen)));
    }
    const double oracle = vertex_oracle(p);
    const Result r = solve(p);
    if (oracle == kInfinity) {
      EXPECT_EQ(r.status, Status::kInfeasible) << trial;
      continue;
    }
    ASSERT_EQ(r.status, Status::kOptimal) << trial;
    EXPECT_NEAR(r.objective, oracle, 1e-7) << trial;
    ++optimal;
  }
  EXPECT_GT(optimal, 100);
}

}  // namespace
}  // namespace jointsched::lp
