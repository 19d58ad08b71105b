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

#include "jointsched/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jointsched/error.hpp"

namespace jointsched::lp {
namespace {

enum class VarState : unsigned char { kBasic, kAtLower, kAtUpper, kFree };

class Simplex {
 public:
  Simplex(const Problem& p, const Options& o) : problem_(p), opt_(o) {}

  Result run();

 private:
  void build_columns();
  void initial_basis();
  bool iterate(const std::vector<double>& cost);
  void refactor();
  void recompute_basic_values();
  double column_dot(int col, const std::vector<double>& dense) const;

  const Problem& problem_;
  const Options& opt_;

  int m_ = 0;       // rows
  int n_ = 0;       // structural columns
  int total_ = 0;   // structural + slack + artificial

  std::vector<int> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<double> lower_, upper_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<double> rhs_;

  std::vector<int> basic_;     // basic_[r] = column basic in row r
  std::vector<double> binv_;   // m_ x m_, row-major
  int pivots_since_refactor_ = 0;
  std::int64_t iterations_ = 0;
};

void Simplex::build_columns() {
  m_ = static_cast<int>(problem_.rows.size());
  n_ = problem_.num_cols();
  std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(n_ + m_));
  rhs_.resize(m_);
  for (int r = 0; r < m_; ++r) {
    const auto& row = problem_.rows[r];
    for (const auto& t : row.terms) {
      if (t.coef != 0.0) cols[t.col].push_back({r, t.coef});
    }
    cols[n_ + r].push_back({r, 1.0});
    rhs_[r] = row.rhs;
  }
  lower_.assign(problem_.lower.begin(), problem_.lower.end());
  upper_.assign(problem_.upper.begin(), problem_.upper.end());
  for (int r = 0; r < m_; ++r) {
    switch (problem_.rows[r].sense) {
      case Sense::kLessEqual:
        lower_.push_back(0.0);
        upper_.push_back(kInfinity);
        break;
      case Sense::kGreaterEqual:
        lower_.push_back(-kInfinity);
        upper_.push_back(0.0);
        break;
      case Sense::kEqual:
        lower_.push_back(0.0);
        upper_.push_back(0.0);
        break;
    }
  }
  col_start_.assign(1, 0);
  for (auto& c : cols) {
    for (auto& [r, v] : c) {
      col_row_.push_back(r);
      col_val_.push_back(v);
    }
    col_start_.push_back(static_cast<int>(col_row_.size()));
  }
  total_ = n_ + m_;
}

double Simplex::column_dot(int col, const std::vector<double>& dense) const {
  double s = 0.0;
  for (int k = col_start_[col]; k < col_start_[col + 1]; ++k) s += dense[col_row_[k]] * col_val_[k];
  return s;
}

void Simplex::initial_basis() {
  x_.assign(total_, 0.0);
  state_.assign(total_, VarState::kAtLower);
  std::vector<double> residual = rhs_;
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lower_[j])) {
      x_[j] = lower_[j];
      state_[j] = VarState::kAtLower;
    } else if (std::isfinite(upper_[j])) {
      x_[j] = upper_[j];
      state_[j] = VarState::kAtUpper;
    } else {
      x_[j] = 0.0;
      state_[j] = VarState::kFree;
    }
    if (x_[j] != 0.0) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        residual[col_row_[k]] -= col_val_[k] * x_[j];
      }
    }
  }

  basic_.assign(m_, -1);
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    const int slack = n_ + r;
    const double v = residual[r];
    if (v >= lower_[slack] - opt_.feasibility_tol && v <= upper_[slack] + opt_.feasibility_tol) {
      basic_[r] = slack;
      state_[slack] = VarState::kBasic;
      x_[slack] = v;
      binv_[static_cast<std::size_t>(r) * m_ + r] = 1.0;
      continue;
    }
    const double bound = v < lower_[slack] ? lower_[slack] : upper_[slack];
    x_[slack] = bound;
    state_[slack] = bound == lower_[slack] ? VarState::kAtLower : VarState::kAtUpper;
    const double sign = v - bound > 0.0 ? 1.0 : -1.0;
    // Artificial column with coefficient `sign` so its value is |v - bound|.
    col_row_.push_back(r);
    col_val_.push_back(sign);
    col_start_.push_back(static_cast<int>(col_row_.size()));
    lower_.push_back(0.0);
    upper_.push_back(kInfinity);
    x_.push_back(std::abs(v - bound));
    state_.push_back(VarState::kBasic);
    basic_[r] = total_;
    binv_[static_cast<std::size_t>(r) * m_ + r] = sign;
    ++total_;
  }
}

void Simplex::refactor() {
  // Gauss-Jordan on the basis matrix, with partial pivoting.
  const std::size_t m = static_cast<std::size_t>(m_);
  std::vector<double> b(m * m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const int col = basic_[r];
    for (int k = col_start_[col]; k < col_start_[col + 1]; ++k) {
      b[static_cast<std::size_t>(col_row_[k]) * m + r] = col_val_[k];
    }
  }
  std::vector<double> inv(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::abs(b[r * m + c]) > std::abs(b[piv * m + c])) piv = r;
    }
    if (std::abs(b[piv * m + c]) < opt_.singular_tol) {
      throw Error(Errc::kNumericalFailure, "singular basis during refactorization");
    }
    if (piv != c) {
      for (std::size_t k = 0; k < m; ++k) {
        std::swap(b[piv * m + k], b[c * m + k]);
        std::swap(inv[piv * m + k], inv[c * m + k]);
      }
    }
    const double d = b[c * m + c];
    for (std::size_t k = 0; k < m; ++k) {
      b[c * m + k] /= d;
      inv[c * m + k] /= d;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = b[r * m + c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < m; ++k) {
        b[r * m + k] -= f * b[c * m + k];
        inv[r * m + k] -= f * inv[c * m + k];
      }
    }
  }
  binv_ = std::move(inv);
  pivots_since_refactor_ = 0;
  recompute_basic_values();
}

void Simplex::recompute_basic_values() {
  std::vector<double> residual = rhs_;
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      residual[col_row_[k]] -= col_val_[k] * x_[j];
    }
  }
  for (int r = 0; r < m_; ++r) {
    double v = 0.0;
    const double* row = &binv_[static_cast<std::size_t>(r) * m_];
    for (int k = 0; k < m_; ++k) v += row[k] * residual[k];
    x_[basic_[r]] = v;
  }
}

// Runs simplex iterations for `cost` until optimal. Returns false if the
// objective is unbounded below.
bool Simplex::iterate(const std::vector<double>& cost) {
  const std::size_t m = static_cast<std::size_t>(m_);
  std::vector<double> y(m), alpha(m);
  int degenerate = 0;
  const std::int64_t max_iterations = 200LL * (m_ + total_) + 10000;

  while (true) {
    if (++iterations_ > max_iterations) {
      throw Error(Errc::kNumericalFailure, "simplex iteration limit exceeded");
    }
    const bool bland = degenerate > opt_.degenerate_streak;

    // Duals: y = c_B^T B^-1.
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      const double cb = cost[basic_[r]];
      if (cb == 0.0) continue;
      const double* row = &binv_[r * m];
      for (std::size_t k = 0; k < m; ++k) y[k] += cb * row[k];
    }

    int entering = -1;
    double best_score = 0.0;
    double entering_d = 0.0;
    for (int j = 0; j < total_; ++j) {
      const VarState s = state_[j];
      if (s == VarState::kBasic || lower_[j] == upper_[j]) continue;
      const double d = cost[j] - column_dot(j, y);
      bool eligible = false;
      if (s == VarState::kAtLower) eligible = d < -opt_.optimality_tol;
      else if (s == VarState::kAtUpper) eligible = d > opt_.optimality_tol;
      else eligible = std::abs(d) > opt_.optimality_tol;
      if (!eligible) continue;
      if (bland) {
        entering = j;
        entering_d = d;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        entering = j;
        entering_d = d;
      }
    }
    if (entering < 0) return true;

    const double dir = entering_d < 0.0 ? 1.0 : -1.0;
    std::fill(alpha.begin(), alpha.end(), 0.0);
    for (int k = col_start_[entering]; k < col_start_[entering + 1]; ++k) {
      const std::size_t rr = static_cast<std::size_t>(col_row_[k]);
      const double v = col_val_[k];
      for (std::size_t r = 0; r < m; ++r) alpha[r] += binv_[r * m + rr] * v;
    }

    // Harris two-pass ratio test: find the step allowed when every basic
    // variable may overshoot its bound by the feasibility tolerance, then
    // pick the largest pivot among rows that block within that step.
    double theta = upper_[entering] - lower_[entering];  // bound flip distance
    if (!std::isfinite(theta)) theta = kInfinity;
    auto slack_to = [&](std::size_t r, double a, double tol, bool* to_lower) {
      const int col = basic_[r];
      if (a > 0.0) {
        *to_lower = true;
        return std::isfinite(lower_[col]) ? (x_[col] - lower_[col] + tol) / a : kInfinity;
      }
      *to_lower = false;
      return std::isfinite(upper_[col]) ? (upper_[col] - x_[col] + tol) / -a : kInfinity;
    };
    double relaxed = theta;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = dir * alpha[r];
      if (std::abs(a) <= opt_.pivot_tol) continue;
      bool to_lower;
      relaxed = std::min(relaxed, slack_to(r, a, opt_.feasibility_tol, &to_lower));
    }
    int leave = -1;
    bool leave_to_lower = true;
    if (relaxed < theta) {
      double best_pivot = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        const double a = dir * alpha[r];
        if (std::abs(a) <= opt_.pivot_tol) continue;
        bool to_lower;
        const double t = slack_to(r, a, 0.0, &to_lower);
        if (t > relaxed) continue;
        const bool better =
            leave < 0 || (bland ? basic_[r] < basic_[static_cast<std::size_t>(leave)]
                                : std::abs(a) > best_pivot);
        if (better) {
          leave = static_cast<int>(r);
          leave_to_lower = to_lower;
          best_pivot = std::abs(a);
          theta = std::max(t, 0.0);
        }
      }
    }
    if (!std::isfinite(theta)) return false;

    degenerate = theta <= 1e-12 ? degenerate + 1 : 0;

    x_[entering] += dir * theta;
    for (std::size_t r = 0; r < m; ++r) x_[basic_[r]] -= dir * theta * alpha[r];

    if (leave < 0) {
      const bool to_upper = dir > 0.0;
      state_[entering] = to_upper ? VarState::kAtUpper : VarState::kAtLower;
      x_[entering] = to_upper ? upper_[entering] : lower_[entering];
      continue;
    }

    const std::size_t lr = static_cast<std::size_t>(leave);
    const int leaving = basic_[lr];
    state_[leaving] = leave_to_lower ? VarState::kAtLower : VarState::kAtUpper;
    x_[leaving] = leave_to_lower ? lower_[leaving] : upper_[leaving];
    basic_[lr] = entering;
    state_[entering] = VarState::kBasic;

    const double piv = alpha[lr];
    if (std::abs(piv) < opt_.singular_tol) {
      throw Error(Errc::kNumericalFailure, "pivot magnitude below tolerance");
    }
    double* prow = &binv_[lr * m];
    for (std::size_t k = 0; k < m; ++k) prow[k] /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == lr || alpha[r] == 0.0) continue;
      const double f = alpha[r];
      double* row = &binv_[r * m];
      for (std::size_t k = 0; k < m; ++k) row[k] -= f * prow[k];
    }
    if (++pivots_since_refactor_ >= opt_.refactor_interval) refactor();
  }
}

Result Simplex::run() {
  build_columns();
  initial_basis();

  Result result;
  if (total_ > n_ + m_) {
    std::vector<double> phase1(total_, 0.0);
    for (int j = n_ + m_; j < total_; ++j) phase1[j] = 1.0;
    iterate(phase1);
    refactor();
    double infeasibility = 0.0;
    for (int j = n_ + m_; j < total_; ++j) infeasibility += std::max(0.0, x_[j]);
    if (infeasibility > 1e-7) {
      result.status = Status::kInfeasible;
      result.iterations = iterations_;
      return result;
    }
    for (int j = n_ + m_; j < total_; ++j) {
      upper_[j] = 0.0;
      if (state_[j] != VarState::kBasic) {
        state_[j] = VarState::kAtLower;
        x_[j] = 0.0;
      }
    }
  }

  std::vector<double> phase2(total_, 0.0);
  std::copy(problem_.cost.begin(), problem_.cost.end(), phase2.begin());
  if (!iterate(phase2)) {
    result.status = Status::kUnbounded;
    result.iterations = iterations_;
    return result;
  }
  refactor();

  result.status = Status::kOptimal;
  result.iterations = iterations_;
  result.x.assign(x_.begin(), x_.begin() + n_);
  for (int j = 0; j < n_; ++j) {
    // Clean round-off against the bounds.
    result.x[j] = std::clamp(result.x[j], lower_[j], upper_[j]);
    result.objective += problem_.cost[j] * result.x[j];
  }
  return result;
}

}  // namespace

Result solve(const Problem& problem, const Options& options) {
  for (const auto& row : problem.rows) {
    for (const auto& t : row.terms) {
      if (t.col < 0 || t.col >= problem.num_cols()) {
        throw Error(Errc::kInvariantViolation, "lp term references unknown column");
      }
    }
  }
  Simplex simplex(problem, options);
  return simplex.run();
}

}  // namespace jointsched::lp
