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
#include <limits>
#include <vector>

namespace jointsched::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Term {
  int col = 0;
  double coef = 0.0;
};

struct Row {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// min cost.x  subject to rows, lower <= x <= upper.
struct Problem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int add_column(double c, double lo, double hi) {
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(hi);
    return static_cast<int>(cost.size()) - 1;
  }
  int num_cols() const { return static_cast<int>(cost.size()); }
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::int64_t iterations = 0;
};

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-7;
  // Basis pivots smaller than this during refactorization are treated as
  // singular and raise Error{kNumericalFailure}.
  double singular_tol = 1e-11;
  int refactor_interval = 64;
  // Consecutive degenerate pivots before pricing falls back to Bland's rule.
  int degenerate_streak = 30;
};

// Two-phase bounded primal simplex with an explicit dense basis inverse.
// Phase one drives artificial variables out; pricing is Dantzig's rule with
// a Bland's-rule fallback while the iteration is stalling on degenerate
// pivots.
Result solve(const Problem& problem, const Options& options = {});

}  // namespace jointsched::lp
