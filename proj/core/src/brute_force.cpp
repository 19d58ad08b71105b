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

#include <algorithm>
#include <limits>

#include "jointsched/error.hpp"
#include "jointsched/milp.hpp"

namespace jointsched::milp {
namespace {

constexpr std::size_t kMaxJobs = 4;
constexpr std::size_t kMaxVars = 5000;

class Enumerator {
 public:
  Enumerator(const Instance& inst, const Fixings& fix)
      : inst_(inst), fix_(fix), load_(inst.rows.size(), 0.0), current_(inst.job_vars.size(), -1) {}

  void run(std::size_t k, int partial) {
    if (k == inst_.job_vars.size()) {
      // Enumeration visits assignments in lexicographic order, so keeping
      // only strict improvements leaves the first optimum.
      if (partial < best_) {
        best_ = partial;
        best_assignment_ = current_;
      }
      return;
    }
    for (int v : inst_.job_vars[k]) {
      if (!fix_.empty() && fix_[v] == 0) continue;
      if (!fix_.empty() && pinned(k) >= 0 && pinned(k) != v) continue;
      const int completion = std::max(partial, inst_.vars[v].completion());
      if (completion >= best_) continue;
      bool ok = true;
      for (auto [row, coef] : inst_.capacity_terms[v]) {
        if (load_[row] + coef > inst_.rows[row].row.rhs + 1e-9) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (auto [row, coef] : inst_.capacity_terms[v]) load_[row] += coef;
      current_[k] = v;
      run(k + 1, completion);
      for (auto [row, coef] : inst_.capacity_terms[v]) load_[row] -= coef;
    }
  }

  int best() const { return best_; }
  const std::vector<int>& best_assignment() const { return best_assignment_; }

 private:
  int pinned(std::size_t k) const {
    for (int v : inst_.job_vars[k]) {
      if (fix_[v] == 1) return v;
    }
    return -1;
  }

  const Instance& inst_;
  const Fixings& fix_;
  std::vector<double> load_;
  std::vector<int> current_;
  int best_ = std::numeric_limits<int>::max();
  std::vector<int> best_assignment_;
};

}  // namespace

Solution brute_force(const Instance& instance, const Fixings& fixings) {
  if (instance.job_vars.size() > kMaxJobs || instance.vars.size() > kMaxVars) {
    throw Error(Errc::kTooLarge, std::to_string(instance.job_vars.size()) + " jobs, " +
                                     std::to_string(instance.vars.size()) + " variables");
  }
  if (!fixings.empty() && fixings.size() != instance.vars.size()) {
    throw Error(Errc::kInvariantViolation, "fixings size mismatch");
  }
  Enumerator e(instance, fixings);
  e.run(0, 0);
  Solution sol;
  sol.node_count = 1;
  if (e.best_assignment().empty()) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  sol.status = Status::kOptimal;
  sol.assignment = e.best_assignment();
  sol.objective = e.best() * instance.delta;
  return sol;
}

}  // namespace jointsched::milp
