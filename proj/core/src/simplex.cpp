// Copyright 2026 The pslsched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pslsched/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pslsched/instance.hpp"

namespace pslsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;

struct Entry {
  int row;
  double value;
};

class RevisedSimplex {
 public:
  RevisedSimplex(const LpProblem& p, const LpOptions& opt) : opt_(opt) {
    n_ = p.num_cols;
    m_ = static_cast<int>(p.rows.size());
    cols_.assign(static_cast<size_t>(n_), {});
    rhs_.resize(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      const IlpConstraint& row = p.rows[static_cast<size_t>(i)];
      for (const IlpTerm& t : row.terms) {
        if (t.coeff != 0.0) cols_[static_cast<size_t>(t.var)].push_back({i, t.coeff});
      }
      rhs_[static_cast<size_t>(i)] = row.rhs;
    }
    lo_ = p.lower;
    hi_ = p.upper;
    cost_ = p.cost;
    // Slacks: a x + s = b.
    for (int i = 0; i < m_; ++i) {
      const Relation rel = p.rows[static_cast<size_t>(i)].relation;
      cols_.push_back({{i, 1.0}});
      lo_.push_back(rel == Relation::ge ? -kInf : 0.0);
      hi_.push_back(rel == Relation::le ? kInf : 0.0);
      cost_.push_back(0.0);
    }
    total_ = n_ + m_;
    x_.assign(static_cast<size_t>(total_), 0.0);
    at_upper_.assign(static_cast<size_t>(total_), false);
    pos_.assign(static_cast<size_t>(total_), -1);
    for (int j = 0; j < n_; ++j) x_[static_cast<size_t>(j)] = lo_[static_cast<size_t>(j)];

    // Residuals decide between slack and artificial basics.
    std::vector<double> resid = rhs_;
    for (int j = 0; j < n_; ++j) {
      for (const Entry& e : cols_[static_cast<size_t>(j)]) {
        resid[static_cast<size_t>(e.row)] -= e.value * x_[static_cast<size_t>(j)];
      }
    }
    head_.assign(static_cast<size_t>(m_), -1);
    binv_.assign(static_cast<size_t>(m_) * static_cast<size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      const double v = resid[static_cast<size_t>(i)];
      const size_t ss = static_cast<size_t>(s);
      if (v >= lo_[ss] - opt_.tolerance && v <= hi_[ss] + opt_.tolerance) {
        make_basic(i, s, v, 1.0);
        continue;
      }
      const double bound = v < lo_[ss] ? lo_[ss] : hi_[ss];
      x_[ss] = bound;
      at_upper_[ss] = bound == hi_[ss] && hi_[ss] != lo_[ss];
      const double sign = v - bound > 0 ? 1.0 : -1.0;
      cols_.push_back({{i, sign}});
      lo_.push_back(0.0);
      hi_.push_back(kInf);
      cost_.push_back(0.0);
      x_.push_back(0.0);
      at_upper_.push_back(false);
      pos_.push_back(-1);
      const int a = total_++;
      artificial_.push_back(a);
      make_basic(i, a, std::abs(v - bound), sign);
    }
  }

  LpResult run() {
    LpResult res;
    const int limit = opt_.max_iterations > 0
                          ? opt_.max_iterations
                          : 50 * (m_ + total_) + 1000;
    if (!artificial_.empty()) {
      std::vector<double> phase1(static_cast<size_t>(total_), 0.0);
      for (int a : artificial_) phase1[static_cast<size_t>(a)] = 1.0;
      const LpStatus s = iterate(phase1, limit, res.iterations);
      if (s == LpStatus::iteration_limit) {
        res.status = s;
        return res;
      }
      double infeas = 0.0;
      for (int a : artificial_) infeas += x_[static_cast<size_t>(a)];
      if (infeas > 1e-6) {
        res.status = LpStatus::infeasible;
        return res;
      }
      for (int a : artificial_) {
        hi_[static_cast<size_t>(a)] = 0.0;
        x_[static_cast<size_t>(a)] = 0.0;
      }
    }
    std::vector<double> phase2(static_cast<size_t>(total_), 0.0);
    std::copy(cost_.begin(), cost_.begin() + n_, phase2.begin());
    res.status = iterate(phase2, limit, res.iterations);
    res.x.assign(x_.begin(), x_.begin() + n_);
    res.objective = 0.0;
    for (int j = 0; j < n_; ++j) {
      res.objective += cost_[static_cast<size_t>(j)] * x_[static_cast<size_t>(j)];
    }
    return res;
  }

 private:
  void make_basic(int row, int var, double value, double col_sign) {
    head_[static_cast<size_t>(row)] = var;
    pos_[static_cast<size_t>(var)] = row;
    x_[static_cast<size_t>(var)] = value;
    binv_[idx(row, row)] = 1.0 / col_sign;
  }

  size_t idx(int r, int c) const {
    return static_cast<size_t>(r) * static_cast<size_t>(m_) +
           static_cast<size_t>(c);
  }

  void refactor() {
    // Gauss-Jordan inverse of the current basis.
    const size_t m = static_cast<size_t>(m_);
    std::vector<double> a(m * m, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (const Entry& e : cols_[static_cast<size_t>(head_[static_cast<size_t>(i)])]) {
        a[idx(e.row, i)] = e.value;
      }
    }
    std::vector<double> inv(m * m, 0.0);
    for (size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
    for (size_t c = 0; c < m; ++c) {
      size_t piv = c;
      for (size_t r = c + 1; r < m; ++r) {
        if (std::abs(a[r * m + c]) > std::abs(a[piv * m + c])) piv = r;
      }
      if (std::abs(a[piv * m + c]) < 1e-12) return;  // keep the old inverse
      if (piv != c) {
        for (size_t k = 0; k < m; ++k) {
          std::swap(a[piv * m + k], a[c * m + k]);
          std::swap(inv[piv * m + k], inv[c * m + k]);
        }
      }
      const double d = a[c * m + c];
      for (size_t k = 0; k < m; ++k) {
        a[c * m + k] /= d;
        inv[c * m + k] /= d;
      }
      for (size_t r = 0; r < m; ++r) {
        if (r == c) continue;
        const double f = a[r * m + c];
        if (f == 0.0) continue;
        for (size_t k = 0; k < m; ++k) {
          a[r * m + k] -= f * a[c * m + k];
          inv[r * m + k] -= f * inv[c * m + k];
        }
      }
    }
    binv_ = std::move(inv);
    // Recompute basic values from nonbasic ones.
    std::vector<double> resid = rhs_;
    for (int j = 0; j < total_; ++j) {
      if (pos_[static_cast<size_t>(j)] >= 0) continue;
      const double v = x_[static_cast<size_t>(j)];
      if (v == 0.0) continue;
      for (const Entry& e : cols_[static_cast<size_t>(j)]) {
        resid[static_cast<size_t>(e.row)] -= e.value * v;
      }
    }
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      for (int k = 0; k < m_; ++k) v += binv_[idx(i, k)] * resid[static_cast<size_t>(k)];
      x_[static_cast<size_t>(head_[static_cast<size_t>(i)])] = v;
    }
  }

  LpStatus iterate(const std::vector<double>& c, int limit, int& iterations) {
    const double tol = opt_.tolerance;
    int degenerate = 0;
    bool bland = false;
    int since_refactor = 0;
    std::vector<double> y(static_cast<size_t>(m_));
    std::vector<double> alpha(static_cast<size_t>(m_));
    while (true) {
      if (iterations >= limit) return LpStatus::iteration_limit;
      if (since_refactor >= 100) {
        refactor();
        since_refactor = 0;
      }
      for (int k = 0; k < m_; ++k) {
        double v = 0.0;
        for (int i = 0; i < m_; ++i) {
          const double cb = c[static_cast<size_t>(head_[static_cast<size_t>(i)])];
          if (cb != 0.0) v += cb * binv_[idx(i, k)];
        }
        y[static_cast<size_t>(k)] = v;
      }
      int q = -1;
      double best = 0.0;
      int dir = 0;
      for (int j = 0; j < total_; ++j) {
        const size_t js = static_cast<size_t>(j);
        if (pos_[js] >= 0 || lo_[js] == hi_[js]) continue;
        double d = c[js];
        for (const Entry& e : cols_[js]) d -= y[static_cast<size_t>(e.row)] * e.value;
        int want = 0;
        if (!at_upper_[js] && d < -tol && hi_[js] > x_[js]) want = 1;
        if ((at_upper_[js] || lo_[js] == -kInf) && d > tol && lo_[js] < x_[js]) {
          want = -1;
        }
        if (want == 0) continue;
        if (bland) {
          q = j;
          dir = want;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dir = want;
        }
      }
      if (q < 0) return LpStatus::optimal;
      ++iterations;
      ++since_refactor;

      std::fill(alpha.begin(), alpha.end(), 0.0);
      for (const Entry& e : cols_[static_cast<size_t>(q)]) {
        for (int i = 0; i < m_; ++i) {
          alpha[static_cast<size_t>(i)] += binv_[idx(i, e.row)] * e.value;
        }
      }
      const size_t qs = static_cast<size_t>(q);
      double theta = hi_[qs] - lo_[qs];
      int leave = -1;
      bool leave_upper = false;
      double leave_alpha = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = alpha[static_cast<size_t>(i)];
        if (std::abs(a) < kPivotTol) continue;
        const size_t b = static_cast<size_t>(head_[static_cast<size_t>(i)]);
        const double delta = -dir * a;  // rate of change of x_b
        double lim;
        bool upper;
        if (delta < 0) {
          if (lo_[b] == -kInf) continue;
          lim = (x_[b] - lo_[b]) / -delta;
          upper = false;
        } else {
          if (hi_[b] == kInf) continue;
          lim = (hi_[b] - x_[b]) / delta;
          upper = true;
        }
        lim = std::max(lim, 0.0);
        bool take = lim < theta - 1e-12;
        if (!take && leave >= 0 && std::abs(lim - theta) <= 1e-12) {
          take = bland ? head_[static_cast<size_t>(i)] <
                             head_[static_cast<size_t>(leave)]
                       : std::abs(a) > std::abs(leave_alpha);
        }
        if (take) {
          theta = lim;
          leave = i;
          leave_upper = upper;
          leave_alpha = a;
        }
      }
      if (theta == kInf) return LpStatus::unbounded;

      if (theta <= 1e-12) {
        if (++degenerate > opt_.degenerate_before_bland) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      x_[qs] += dir * theta;
      for (int i = 0; i < m_; ++i) {
        const double a = alpha[static_cast<size_t>(i)];
        if (a != 0.0) {
          x_[static_cast<size_t>(head_[static_cast<size_t>(i)])] -= theta * dir * a;
        }
      }
      if (leave < 0) {
        at_upper_[qs] = dir > 0;
        x_[qs] = dir > 0 ? hi_[qs] : lo_[qs];
        continue;
      }
      const size_t b = static_cast<size_t>(head_[static_cast<size_t>(leave)]);
      x_[b] = leave_upper ? hi_[b] : lo_[b];
      at_upper_[b] = leave_upper;
      pos_[b] = -1;
      head_[static_cast<size_t>(leave)] = q;
      pos_[qs] = leave;
      at_upper_[qs] = false;
      const double piv = alpha[static_cast<size_t>(leave)];
      for (int k = 0; k < m_; ++k) binv_[idx(leave, k)] /= piv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave) continue;
        const double f = alpha[static_cast<size_t>(i)];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          binv_[idx(i, k)] -= f * binv_[idx(leave, k)];
        }
      }
    }
  }

  LpOptions opt_;
  int n_ = 0;
  int m_ = 0;
  int total_ = 0;
  std::vector<std::vector<Entry>> cols_;
  std::vector<double> rhs_;
  std::vector<double> lo_, hi_, cost_, x_;
  std::vector<bool> at_upper_;
  std::vector<int> pos_;
  std::vector<int> head_;
  std::vector<int> artificial_;
  std::vector<double> binv_;
};

}  // namespace

LpResult solve_lp(const LpProblem& problem, const LpOptions& options) {
  if (static_cast<int>(problem.cost.size()) != problem.num_cols ||
      static_cast<int>(problem.lower.size()) != problem.num_cols ||
      static_cast<int>(problem.upper.size()) != problem.num_cols) {
    throw Error("LP dimension mismatch");
  }
  for (int j = 0; j < problem.num_cols; ++j) {
    const size_t js = static_cast<size_t>(j);
    if (!std::isfinite(problem.lower[js]) || !std::isfinite(problem.upper[js])) {
      throw Error("LP columns need finite bounds");
    }
    if (problem.lower[js] > problem.upper[js]) {
      LpResult r;
      r.status = LpStatus::infeasible;
      return r;
    }
  }
  RevisedSimplex s(problem, options);
  return s.run();
}

LpResult solve_relaxation(const IlpModel& model, const LpOptions& options) {
  LpProblem p;
  p.num_cols = model.num_variables();
  p.cost = model.objective();
  for (const IlpVariable& v : model.variables()) {
    p.lower.push_back(v.lower);
    p.upper.push_back(v.upper);
  }
  p.rows = model.constraints();
  LpResult r = solve_lp(p, options);
  r.objective += model.objective_offset();
  return r;
}

}  // namespace pslsched
