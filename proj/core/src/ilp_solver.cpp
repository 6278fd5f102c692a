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

#include "pslsched/ilp_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

#include "pslsched/instance.hpp"
#include "pslsched/simplex.hpp"

namespace pslsched {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::feasible:
      return "feasible";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::limit:
      return "limit";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntTol = 1e-6;

using Clock = std::chrono::steady_clock;

struct Change {
  int col;
  double lo;
  double hi;
};

struct Node {
  std::vector<Change> path;
  double bound = -kInf;
  int depth = 0;
  long long id = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

struct Row {
  std::vector<IlpTerm> terms;
  double lo = -kInf;
  double hi = kInf;
};

// Smallest g such that every objective value is offset + g * integer.
double objective_granularity(const std::vector<double>& c) {
  static const int kScales[] = {1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 60, 120};
  for (int k : kScales) {
    bool ok = true;
    long long g = 0;
    for (double v : c) {
      if (v == 0.0) continue;
      const double s = v * k;
      if (std::abs(s - std::round(s)) > 1e-9 || std::abs(s) > 1e12) {
        ok = false;
        break;
      }
      g = std::gcd(g, std::llabs(std::llround(s)));
    }
    if (ok) return g == 0 ? 0.0 : static_cast<double>(g) / k;
  }
  return 0.0;
}

class BranchAndBound {
 public:
  BranchAndBound(const IlpModel& model, const SolverConfig& config)
      : model_(model), config_(config), rng_(config.seed) {
    n_ = model.num_variables();
    for (const IlpConstraint& c : model.constraints()) {
      Row r;
      r.terms = c.terms;
      if (c.relation != Relation::ge) r.hi = c.rhs;
      if (c.relation != Relation::le) r.lo = c.rhs;
      rows_.push_back(std::move(r));
    }
    Row cutoff;
    for (int j = 0; j < n_; ++j) {
      const double cj = model.objective()[static_cast<size_t>(j)];
      if (cj != 0.0) cutoff.terms.push_back({j, cj});
    }
    cutoff_row_ = static_cast<int>(rows_.size());
    rows_.push_back(std::move(cutoff));
    col_rows_.assign(static_cast<size_t>(n_), {});
    for (size_t r = 0; r < rows_.size(); ++r) {
      for (const IlpTerm& t : rows_[r].terms) {
        col_rows_[static_cast<size_t>(t.var)].push_back(static_cast<int>(r));
      }
    }
    granularity_ = objective_granularity(model.objective());
    in_queue_.assign(rows_.size(), 0);
  }

  SolverResult run() {
    start_ = Clock::now();
    SolverResult res;
    std::vector<double> lo(static_cast<size_t>(n_));
    std::vector<double> hi(static_cast<size_t>(n_));
    for (int j = 0; j < n_; ++j) {
      const IlpVariable& v = model_.variable(j);
      lo[static_cast<size_t>(j)] = std::ceil(v.lower - kIntTol);
      hi[static_cast<size_t>(j)] = std::floor(v.upper + kIntTol);
    }
    if (!config_.warm_start.empty()) offer(config_.warm_start);

    bool root_ok = true;
    for (int j = 0; j < n_; ++j) {
      if (lo[static_cast<size_t>(j)] > hi[static_cast<size_t>(j)]) root_ok = false;
    }
    std::vector<int> all_rows(rows_.size());
    std::iota(all_rows.begin(), all_rows.end(), 0);
    if (root_ok) root_ok = propagate(lo, hi, all_rows);
    root_lo_ = lo;
    root_hi_ = hi;

    std::vector<Node> stack;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> heap;
    bool complete = true;
    if (root_ok) stack.push_back(Node{{}, -kInf, 0, next_id_++});

    while (!stack.empty() || !heap.empty()) {
      if (limits_hit()) {
        complete = false;
        break;
      }
      if (has_incumbent() && !stack.empty()) {
        for (Node& n : stack) heap.push(std::move(n));
        stack.clear();
      }
      Node node;
      if (!stack.empty()) {
        node = std::move(stack.back());
        stack.pop_back();
      } else {
        node = heap.top();
        heap.pop();
      }
      if (prunable(node.bound)) continue;

      // Rebuild bounds for this node, then dive.
      std::vector<double> nlo = root_lo_;
      std::vector<double> nhi = root_hi_;
      std::vector<int> seeds;
      bool ok = true;
      for (const Change& c : node.path) {
        nlo[static_cast<size_t>(c.col)] = std::max(nlo[static_cast<size_t>(c.col)], c.lo);
        nhi[static_cast<size_t>(c.col)] = std::min(nhi[static_cast<size_t>(c.col)], c.hi);
        if (nlo[static_cast<size_t>(c.col)] > nhi[static_cast<size_t>(c.col)]) ok = false;
        for (int r : col_rows_[static_cast<size_t>(c.col)]) seeds.push_back(r);
      }
      if (!ok) continue;
      seeds.push_back(cutoff_row_);
      if (!propagate(nlo, nhi, seeds)) continue;

      std::vector<Change> path = std::move(node.path);
      int depth = node.depth;
      while (true) {
        ++nodes_;
        Change dive{};
        Change other{};
        double bound = -kInf;
        if (!process(nlo, nhi, bound, dive, other)) break;
        Node sibling{path, bound, depth + 1, next_id_++};
        sibling.path.push_back(other);
        if (has_incumbent()) {
          heap.push(std::move(sibling));
        } else {
          stack.push_back(std::move(sibling));
        }
        path.push_back(dive);
        ++depth;
        const size_t dc = static_cast<size_t>(dive.col);
        nlo[dc] = std::max(nlo[dc], dive.lo);
        nhi[dc] = std::min(nhi[dc], dive.hi);
        std::vector<int> s = col_rows_[dc];
        s.push_back(cutoff_row_);
        if (!propagate(nlo, nhi, s)) break;
        if (limits_hit()) {
          complete = false;
          // Keep the unexplored dive node so the bound stays honest.
          heap.push(Node{path, bound, depth, next_id_++});
          break;
        }
      }
      if (!complete) break;
    }

    res.nodes = nodes_;
    double open_bound = kInf;
    while (!heap.empty()) {
      open_bound = std::min(open_bound, heap.top().bound);
      heap.pop();
    }
    for (const Node& n : stack) open_bound = std::min(open_bound, n.bound);
    if (has_incumbent()) {
      res.values = incumbent_;
      res.objective = incumbent_value_;
      res.best_bound = complete ? incumbent_value_
                                : std::min(incumbent_value_, open_bound);
      res.status = complete ? SolveStatus::optimal : SolveStatus::feasible;
      if (!complete && config_.gap_tolerance > 0.0 &&
          res.objective - res.best_bound <=
              config_.gap_tolerance * std::abs(res.objective)) {
        res.status = SolveStatus::optimal;
      }
    } else {
      res.status = complete ? SolveStatus::infeasible : SolveStatus::limit;
      res.best_bound = complete ? kInf : open_bound;
    }
    res.wall_seconds =
        std::chrono::duration<double>(Clock::now() - start_).count();
    return res;
  }

 private:
  bool has_incumbent() const { return !incumbent_.empty(); }

  bool limits_hit() const {
    if (config_.node_limit > 0 && nodes_ >= config_.node_limit) return true;
    if (config_.time_limit_sec > 0.0) {
      const double el =
          std::chrono::duration<double>(Clock::now() - start_).count();
      if (el >= config_.time_limit_sec) return true;
    }
    return false;
  }

  // Rounds a raw bound up to the next attainable objective value.
  double effective(double bound) const {
    if (granularity_ <= 0.0 || !std::isfinite(bound)) return bound;
    const double off = model_.objective_offset();
    return off + granularity_ * std::ceil((bound - off) / granularity_ - 1e-6);
  }

  bool prunable(double bound) const {
    if (bound == kInf) return true;  // a hook proved the node infeasible
    if (!has_incumbent()) return false;
    const double eff = effective(bound);
    const double slack =
        std::max(config_.gap_tolerance * std::abs(incumbent_value_), 1e-7);
    if (granularity_ > 0.0 && config_.gap_tolerance == 0.0) {
      return eff > incumbent_value_ - granularity_ + 1e-7;
    }
    return eff >= incumbent_value_ - slack;
  }

  void offer(const std::vector<double>& values) {
    std::vector<double> v(values.size());
    for (size_t k = 0; k < values.size(); ++k) v[k] = std::round(values[k]);
    if (!model_.violations(v).empty()) return;
    const double obj = model_.objective_value(v);
    if (has_incumbent() && obj >= incumbent_value_ - 1e-9) return;
    incumbent_ = std::move(v);
    incumbent_value_ = obj;
    double cut = incumbent_value_ - model_.objective_offset();
    if (granularity_ > 0.0) {
      cut -= granularity_ - 1e-7;
    } else {
      cut -= 1e-6;
    }
    if (config_.gap_tolerance > 0.0) {
      cut = std::min(cut, incumbent_value_ - model_.objective_offset() -
                              config_.gap_tolerance *
                                  std::abs(incumbent_value_));
    }
    rows_[static_cast<size_t>(cutoff_row_)].hi = cut;
  }

  bool propagate(std::vector<double>& lo, std::vector<double>& hi,
                 const std::vector<int>& seeds) {
    std::vector<int> queue;
    for (int r : seeds) {
      if (!in_queue_[static_cast<size_t>(r)]) {
        in_queue_[static_cast<size_t>(r)] = 1;
        queue.push_back(r);
      }
    }
    bool ok = true;
    size_t head = 0;
    long long budget = 200000 + 50LL * static_cast<long long>(rows_.size());
    while (head < queue.size()) {
      const int r = queue[head++];
      in_queue_[static_cast<size_t>(r)] = 0;
      if (!ok || --budget < 0) continue;
      const Row& row = rows_[static_cast<size_t>(r)];
      if (row.terms.empty()) {
        if (row.lo > 1e-7 || row.hi < -1e-7) ok = false;
        continue;
      }
      double minact = 0.0;
      double maxact = 0.0;
      for (const IlpTerm& t : row.terms) {
        const size_t c = static_cast<size_t>(t.var);
        if (t.coeff > 0) {
          minact += t.coeff * lo[c];
          maxact += t.coeff * hi[c];
        } else {
          minact += t.coeff * hi[c];
          maxact += t.coeff * lo[c];
        }
      }
      if (minact > row.hi + 1e-7 || maxact < row.lo - 1e-7) {
        ok = false;
        continue;
      }
      for (const IlpTerm& t : row.terms) {
        const size_t c = static_cast<size_t>(t.var);
        const double a = t.coeff;
        double nl = lo[c];
        double nh = hi[c];
        if (row.hi < kInf) {
          const double rest = minact - (a > 0 ? a * lo[c] : a * hi[c]);
          const double lim = (row.hi - rest) / a;
          if (a > 0) {
            nh = std::min(nh, std::floor(lim + kIntTol));
          } else {
            nl = std::max(nl, std::ceil(lim - kIntTol));
          }
        }
        if (row.lo > -kInf) {
          const double rest = maxact - (a > 0 ? a * hi[c] : a * lo[c]);
          const double lim = (row.lo - rest) / a;
          if (a > 0) {
            nl = std::max(nl, std::ceil(lim - kIntTol));
          } else {
            nh = std::min(nh, std::floor(lim + kIntTol));
          }
        }
        if (nl > nh) {
          ok = false;
          break;
        }
        if (nl != lo[c] || nh != hi[c]) {
          // Keep activities consistent for the remaining terms.
          if (a > 0) {
            minact += a * (nl - lo[c]);
            maxact += a * (nh - hi[c]);
          } else {
            minact += a * (nh - hi[c]);
            maxact += a * (nl - lo[c]);
          }
          lo[c] = nl;
          hi[c] = nh;
          for (int rr : col_rows_[c]) {
            if (rr != r && !in_queue_[static_cast<size_t>(rr)]) {
              in_queue_[static_cast<size_t>(rr)] = 1;
              queue.push_back(rr);
            }
          }
        }
      }
    }
    return ok;
  }

  // Evaluates a node with propagated bounds. Returns false when the node is
  // closed (pruned, infeasible or leaf); otherwise fills the two children.
  bool process(const std::vector<double>& lo, const std::vector<double>& hi,
               double& bound, Change& dive, Change& other) {
    const auto& c = model_.objective();
    double comb = model_.objective_offset();
    bool all_fixed = true;
    for (int j = 0; j < n_; ++j) {
      const size_t js = static_cast<size_t>(j);
      if (lo[js] != hi[js]) all_fixed = false;
      if (c[js] > 0) {
        comb += c[js] * lo[js];
      } else if (c[js] < 0) {
        comb += c[js] * hi[js];
      }
    }
    bound = comb;
    if (model_.lower_bound_hook) {
      bound = std::max(bound, model_.lower_bound_hook(lo, hi));
    }
    if (prunable(bound)) return false;
    if (all_fixed) {
      offer(lo);
      return false;
    }

    std::vector<double> lp_x;
    if (config_.bound == BoundMode::lp) {
      double lp_value = 0.0;
      const int status = solve_node_lp(lo, hi, lp_value, lp_x);
      if (status < 0) return false;  // LP infeasible
      if (status > 0) {
        bound = std::max(bound, lp_value);
        if (prunable(bound)) return false;
        bool integral = true;
        for (int j = 0; j < n_; ++j) {
          const double v = lp_x[static_cast<size_t>(j)];
          if (std::abs(v - std::round(v)) > kIntTol) {
            integral = false;
            break;
          }
        }
        if (integral) {
          offer(lp_x);
          if (has_incumbent() && std::abs(incumbent_value_ - lp_value) < 1e-6) {
            return false;
          }
        }
      } else {
        lp_x.clear();
      }
    }

    // Branching column.
    int best = -1;
    int best_priority = std::numeric_limits<int>::min();
    double best_score = -1.0;
    int ties = 0;
    for (int j = 0; j < n_; ++j) {
      const size_t js = static_cast<size_t>(j);
      if (lo[js] == hi[js]) continue;
      double score = 0.0;
      if (!lp_x.empty()) {
        const double f = lp_x[js] - std::floor(lp_x[js]);
        if (f < kIntTol || f > 1.0 - kIntTol) continue;
        score = 0.5 - std::abs(f - 0.5);
      }
      const int pr = model_.variable(j).priority;
      if (best >= 0 && pr < best_priority) continue;
      if (best >= 0 && pr == best_priority) {
        if (score < best_score - 1e-12) continue;
        if (score <= best_score + 1e-12) {
          if (config_.branching != BranchingRule::random) continue;
          ++ties;
          if (std::uniform_int_distribution<int>(0, ties)(rng_) != 0) continue;
        } else {
          ties = 0;
        }
      } else {
        ties = 0;
      }
      best = j;
      best_priority = pr;
      best_score = score;
    }
    if (best < 0) {
      // LP solution integral on all free columns but not accepted; fall back
      // to the first free column.
      for (int j = 0; j < n_ && best < 0; ++j) {
        if (lo[static_cast<size_t>(j)] != hi[static_cast<size_t>(j)]) best = j;
      }
    }
    const size_t bs = static_cast<size_t>(best);
    if (!lp_x.empty() &&
        std::abs(lp_x[bs] - std::round(lp_x[bs])) > kIntTol) {
      const double fl = std::floor(lp_x[bs]);
      Change down{best, lo[bs], fl};
      Change up{best, fl + 1.0, hi[bs]};
      const bool go_up = lp_x[bs] - fl >= 0.5;
      dive = go_up ? up : down;
      other = go_up ? down : up;
    } else if (model_.variable(best).kind == VarKind::binary) {
      dive = Change{best, 1.0, 1.0};
      other = Change{best, 0.0, 0.0};
    } else {
      dive = Change{best, lo[bs], lo[bs]};
      other = Change{best, lo[bs] + 1.0, hi[bs]};
    }
    return true;
  }

  // 1: LP solved (value, x filled); 0: LP skipped; -1: infeasible.
  int solve_node_lp(const std::vector<double>& lo, const std::vector<double>& hi,
                    double& value, std::vector<double>& x) {
    std::vector<int> map(static_cast<size_t>(n_), -1);
    LpProblem lp;
    double constant = model_.objective_offset();
    for (int j = 0; j < n_; ++j) {
      const size_t js = static_cast<size_t>(j);
      const double cj = model_.objective()[js];
      if (lo[js] == hi[js]) {
        constant += cj * lo[js];
        continue;
      }
      map[js] = lp.num_cols++;
      lp.cost.push_back(cj);
      lp.lower.push_back(lo[js]);
      lp.upper.push_back(hi[js]);
    }
    if (lp.num_cols > config_.lp_max_columns) return 0;
    for (size_t r = 0; r < rows_.size(); ++r) {
      const Row& row = rows_[r];
      if (row.lo == -kInf && row.hi == kInf) continue;
      std::vector<IlpTerm> terms;
      double fixed = 0.0;
      double minact = 0.0;
      double maxact = 0.0;
      for (const IlpTerm& t : row.terms) {
        const size_t c = static_cast<size_t>(t.var);
        if (map[c] < 0) {
          fixed += t.coeff * lo[c];
        } else {
          terms.push_back({map[c], t.coeff});
          minact += t.coeff * (t.coeff > 0 ? lo[c] : hi[c]);
          maxact += t.coeff * (t.coeff > 0 ? hi[c] : lo[c]);
        }
      }
      const double rlo = row.lo - fixed;
      const double rhi = row.hi - fixed;
      if (terms.empty()) continue;
      const bool lo_redundant = rlo == -kInf || minact >= rlo - 1e-9;
      const bool hi_redundant = rhi == kInf || maxact <= rhi + 1e-9;
      if (lo_redundant && hi_redundant) continue;
      if (!lo_redundant && !hi_redundant && std::abs(rlo - rhi) < 1e-12) {
        lp.rows.push_back({"", terms, Relation::eq, rhi});
        continue;
      }
      if (!hi_redundant) lp.rows.push_back({"", terms, Relation::le, rhi});
      if (!lo_redundant) lp.rows.push_back({"", terms, Relation::ge, rlo});
    }
    const LpResult res = solve_lp(lp);
    if (res.status == LpStatus::infeasible) return -1;
    if (res.status != LpStatus::optimal) return 0;
    value = constant + res.objective;
    x.assign(static_cast<size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) {
      const size_t js = static_cast<size_t>(j);
      x[js] = map[js] < 0 ? lo[js] : res.x[static_cast<size_t>(map[js])];
    }
    return 1;
  }

  const IlpModel& model_;
  SolverConfig config_;
  std::mt19937_64 rng_;
  int n_ = 0;
  std::vector<Row> rows_;
  int cutoff_row_ = 0;
  std::vector<std::vector<int>> col_rows_;
  std::vector<char> in_queue_;
  double granularity_ = 0.0;
  std::vector<double> root_lo_, root_hi_;
  std::vector<double> incumbent_;
  double incumbent_value_ = kInf;
  long long nodes_ = 0;
  long long next_id_ = 0;
  Clock::time_point start_;
};

}  // namespace

SolverResult solve(const IlpModel& model, const SolverConfig& config) {
  model.check_well_formed();
  if (config.gap_tolerance < 0.0 || config.gap_tolerance >= 1.0) {
    throw Error("gap_tolerance must lie in [0, 1)");
  }
  BranchAndBound bb(model, config);
  return bb.run();
}

double lp_bound(const IlpModel& model) {
  model.check_well_formed();
  const LpResult r = solve_relaxation(model);
  if (r.status == LpStatus::infeasible) throw Error("LP relaxation infeasible");
  if (r.status == LpStatus::unbounded) throw Error("LP relaxation unbounded");
  if (r.status != LpStatus::optimal) throw Error("LP iteration limit reached");
  return r.objective;
}

}  // namespace pslsched
