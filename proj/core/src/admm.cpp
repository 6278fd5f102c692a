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

#include "pslsched/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <utility>

#include "pslsched/heuristics.hpp"
#include "pslsched/ilp_builder.hpp"
#include "preemptive.hpp"

namespace pslsched {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kMemTol = 1e-9;

struct FwdTimes {
  std::vector<int> finish;      // phi^f
  std::vector<int> completion;  // c^f
  int makespan = 0;
};

FwdTimes fwd_times(const ProblemInstance& in, std::span<const SlotTriple> fwd,
                   std::span<const int> y) {
  const size_t J = static_cast<size_t>(in.num_clients());
  const size_t E = static_cast<size_t>(in.num_edges());
  FwdTimes out;
  out.finish.assign(J, 0);
  out.completion.assign(J, 0);
  std::vector<std::vector<int>> slots(E);
  for (const SlotTriple& t : fwd) {
    const int e = in.edge_index(t.client, t.helper);
    if (e < 0) throw Error("fwd slot on an unconnected pair");
    slots[static_cast<size_t>(e)].push_back(t.slot);
    int& f = out.finish[static_cast<size_t>(t.client)];
    f = std::max(f, t.slot + 1);
  }
  std::vector<int> extra(J, 0);
  for (size_t e = 0; e < E; ++e) {
    const size_t j = static_cast<size_t>(in.edge_client(static_cast<int>(e)));
    if (y[e]) extra[j] += in.edges()[e].l;
    auto& s = slots[e];
    if (s.empty()) continue;
    std::sort(s.begin(), s.end());
    const int mu =
        in.switching_cost()[static_cast<size_t>(in.edge_helper(static_cast<int>(e)))];
    int starts = 0;
    for (size_t k = 0; k < s.size(); ++k) {
      if (k == 0 || s[k] != s[k - 1] + 1) ++starts;
    }
    extra[j] += mu * starts;
  }
  for (size_t j = 0; j < J; ++j) {
    out.completion[j] = out.finish[j] + extra[j];
    out.makespan = std::max(out.makespan, out.completion[j]);
  }
  return out;
}

std::vector<int> edge_sums(const ProblemInstance& in,
                           std::span<const SlotTriple> fwd) {
  std::vector<int> sum(static_cast<size_t>(in.num_edges()), 0);
  for (const SlotTriple& t : fwd) {
    ++sum[static_cast<size_t>(in.edge_index(t.client, t.helper))];
  }
  return sum;
}

std::vector<detail::PreemptiveJob> fwd_jobs(const ProblemInstance& in, int i,
                                            std::span<const int> clients) {
  const int mu = in.switching_cost()[static_cast<size_t>(i)];
  std::vector<detail::PreemptiveJob> jobs;
  for (int j : clients) {
    const EdgeTiming& e = in.timing(j, i);
    jobs.push_back({e.r, e.p, e.l + mu});
  }
  return jobs;
}

// Largest-tail-first fwd schedule of a fixed assignment; empty on failure.
std::vector<SlotTriple> fwd_schedule(const ProblemInstance& in,
                                     const Assignment& a) {
  std::vector<SlotTriple> out;
  const std::vector<char> open(static_cast<size_t>(in.fwd_horizon()), 1);
  for (int i = 0; i < in.num_helpers(); ++i) {
    std::vector<int> clients;
    for (int j = 0; j < in.num_clients(); ++j) {
      if (a.helper_of[static_cast<size_t>(j)] == i) clients.push_back(j);
    }
    if (clients.empty()) continue;
    const auto jobs = fwd_jobs(in, i, clients);
    std::vector<std::vector<int>> slots;
    if (detail::largest_tail_first(jobs, open, &slots) == detail::kNoFit) {
      return {};
    }
    for (size_t k = 0; k < clients.size(); ++k) {
      for (int s : slots[k]) out.push_back({i, clients[k], s});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Local search over assignments scored by (max, sum) of per-helper fwd costs.
// Gives the first w-subproblem a total, memory-feasible incumbent.
class FwdLocalSearch {
 public:
  explicit FwdLocalSearch(const ProblemInstance& in) : in_(in) {}

  std::optional<Assignment> run() {
    Assignment a;
    try {
      a = balanced_greedy(in_).assignment;
    } catch (const Error&) {
      return std::nullopt;
    }
    const size_t I = static_cast<size_t>(in_.num_helpers());
    members_.assign(I, {});
    free_ = in_.memory_capacity();
    for (int j = 0; j < in_.num_clients(); ++j) {
      const int i = a.helper_of[static_cast<size_t>(j)];
      members_[static_cast<size_t>(i)].push_back(j);
      free_[static_cast<size_t>(i)] -= demand(j);
    }
    cost_.resize(I);
    for (size_t i = 0; i < I; ++i) cost_[i] = helper_cost(static_cast<int>(i), members_[i]);

    constexpr int kMaxRounds = 200;
    for (int round = 0; round < kMaxRounds; ++round) {
      if (!improve_once(a)) break;
    }
    return a;
  }

 private:
  double demand(int j) const { return in_.memory_demand()[static_cast<size_t>(j)]; }

  int helper_cost(int i, const std::vector<int>& clients) const {
    if (clients.empty()) return 0;
    return detail::largest_tail_first_from(fwd_jobs(in_, i, clients), 0);
  }

  std::pair<int, long long> score_with(int i1, int c1, int i2, int c2) const {
    int mx = 0;
    long long sum = 0;
    for (size_t i = 0; i < cost_.size(); ++i) {
      int c = cost_[i];
      if (static_cast<int>(i) == i1) c = c1;
      if (static_cast<int>(i) == i2) c = c2;
      mx = std::max(mx, c);
      sum += c;
    }
    return {mx, sum};
  }

  static std::vector<int> without(const std::vector<int>& v, int j) {
    std::vector<int> out;
    for (int k : v) {
      if (k != j) out.push_back(k);
    }
    return out;
  }

  static std::vector<int> with(std::vector<int> v, int j) {
    v.insert(std::upper_bound(v.begin(), v.end(), j), j);
    return v;
  }

  bool improve_once(Assignment& a) {
    const auto current = score_with(-1, 0, -1, 0);
    const int J = in_.num_clients();
    // Relocate.
    for (int j = 0; j < J; ++j) {
      const int from = a.helper_of[static_cast<size_t>(j)];
      for (int to : in_.helpers_of(j)) {
        if (to == from || free_[static_cast<size_t>(to)] + kMemTol < demand(j)) {
          continue;
        }
        auto mf = without(members_[static_cast<size_t>(from)], j);
        auto mt = with(members_[static_cast<size_t>(to)], j);
        const int cf = helper_cost(from, mf);
        const int ct = helper_cost(to, mt);
        if (score_with(from, cf, to, ct) < current) {
          members_[static_cast<size_t>(from)] = std::move(mf);
          members_[static_cast<size_t>(to)] = std::move(mt);
          cost_[static_cast<size_t>(from)] = cf;
          cost_[static_cast<size_t>(to)] = ct;
          free_[static_cast<size_t>(from)] += demand(j);
          free_[static_cast<size_t>(to)] -= demand(j);
          a.helper_of[static_cast<size_t>(j)] = to;
          return true;
        }
      }
    }
    // Swap.
    for (int j = 0; j < J; ++j) {
      for (int k = j + 1; k < J; ++k) {
        const int ij = a.helper_of[static_cast<size_t>(j)];
        const int ik = a.helper_of[static_cast<size_t>(k)];
        if (ij == ik || !in_.connected(j, ik) || !in_.connected(k, ij)) continue;
        if (free_[static_cast<size_t>(ij)] + demand(j) + kMemTol < demand(k) ||
            free_[static_cast<size_t>(ik)] + demand(k) + kMemTol < demand(j)) {
          continue;
        }
        auto mj = with(without(members_[static_cast<size_t>(ij)], j), k);
        auto mk = with(without(members_[static_cast<size_t>(ik)], k), j);
        const int cj = helper_cost(ij, mj);
        const int ck = helper_cost(ik, mk);
        if (score_with(ij, cj, ik, ck) < current) {
          members_[static_cast<size_t>(ij)] = std::move(mj);
          members_[static_cast<size_t>(ik)] = std::move(mk);
          cost_[static_cast<size_t>(ij)] = cj;
          cost_[static_cast<size_t>(ik)] = ck;
          free_[static_cast<size_t>(ij)] += demand(j) - demand(k);
          free_[static_cast<size_t>(ik)] += demand(k) - demand(j);
          a.helper_of[static_cast<size_t>(j)] = ik;
          a.helper_of[static_cast<size_t>(k)] = ij;
          return true;
        }
      }
    }
    return false;
  }

  const ProblemInstance& in_;
  std::vector<std::vector<int>> members_;
  std::vector<double> free_;
  std::vector<int> cost_;
};

std::vector<double> warm_start(const ProblemInstance& in, const BuiltModel& b,
                               const Assignment& a) {
  Schedule s;
  s.fwd = fwd_schedule(in, a);
  if (s.fwd.empty() && in.num_clients() > 0) return {};
  return encode(in, b, a, s);
}

std::vector<SlotTriple> solve_schedule_model(const ProblemInstance& in,
                                             BuiltModel& b,
                                             const SolverConfig& limits,
                                             const std::optional<Assignment>& start,
                                             const std::string& what) {
  SolverConfig cfg = limits;
  if (start) cfg.warm_start = warm_start(in, b, *start);
  const SolverResult res = solve(b.model, cfg);
  if (!res.has_incumbent()) {
    throw Error(what + ": " + to_string(res.status));
  }
  Assignment unused;
  Schedule s;
  decode(in, b, res.values, unused, s);
  return std::move(s.fwd);
}

bool all_zero(std::span<const int> y) {
  return std::all_of(y.begin(), y.end(), [](int v) { return v == 0; });
}

}  // namespace

SolverConfig subproblem_limits(SubproblemMode mode) {
  SolverConfig c;
  c.bound = BoundMode::combinatorial;
  if (mode == SubproblemMode::inexact) {
    // The node limit is what stops the search in practice; the time limit is
    // a safety net. A time-limited stop would break rerun determinism.
    c.node_limit = 2000;
    c.time_limit_sec = 120.0;
  } else {
    c.node_limit = 0;
    c.time_limit_sec = 0.0;
  }
  return c;
}

void AdmmConfig::check() const {
  if (!(rho > 0.0)) throw Error("rho must be positive");
  if (eps1 < 0.0 || eps2 < 0.0) throw Error("tolerances must be nonnegative");
  if (tau_max < 1) throw Error("tau_max must be at least 1");
}

std::string AdmmTrace::to_csv() const {
  std::string out =
      "iteration,objective,lagrangian,residual,y_changes,dual_norm,w_seconds,"
      "y_seconds\n";
  char buf[256];
  for (const AdmmIteration& it : iterations) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.6g,%d,%d,%.6g,%.6f,%.6f\n",
                  it.iteration, it.objective, it.lagrangian, it.residual,
                  it.y_changes, it.dual_norm, it.w_seconds, it.y_seconds);
    out += buf;
  }
  return out;
}

double lagrangian_value(const ProblemInstance& in,
                        std::span<const SlotTriple> fwd, std::span<const int> y,
                        std::span<const double> lambda, double rho) {
  const size_t E = static_cast<size_t>(in.num_edges());
  if (y.size() != E || lambda.size() != E) {
    throw Error("y and lambda must have one entry per edge");
  }
  const FwdTimes t = fwd_times(in, fwd, y);
  const std::vector<int> sum = edge_sums(in, fwd);
  double v = t.makespan;
  for (size_t e = 0; e < E; ++e) {
    const double r = sum[e] - static_cast<double>(y[e]) * in.edges()[e].p;
    v += lambda[e] * r + rho / 2.0 * std::abs(r);
  }
  return v;
}

AdmmResult run_admm(const ProblemInstance& in, const AdmmConfig& config) {
  config.check();
  const size_t E = static_cast<size_t>(in.num_edges());
  std::vector<int> y(E, 0);
  if (config.initial) y = assignment_to_edge_vector(in, *config.initial);
  std::vector<double> lambda(E, 0.0);

  AdmmResult result;
  std::optional<Assignment> search_start;
  int prev_objective = -1;
  for (int tau = 1; tau <= config.tau_max; ++tau) {
    const std::string at = " at iteration " + std::to_string(tau);
    AdmmIteration rec;
    rec.iteration = tau;

    auto t0 = Clock::now();
    BuiltModel w = build_w_subproblem(in, y, lambda, config.rho);
    add_switching_cost(w, in);
    std::optional<Assignment> start;
    if (all_zero(y)) {
      if (!search_start) search_start = FwdLocalSearch(in).run();
      start = search_start;
    } else {
      try {
        start = edge_vector_to_assignment(in, y);
      } catch (const Error&) {
        start.reset();  // not total; no warm start
      }
    }
    const std::vector<SlotTriple> fwd =
        solve_schedule_model(in, w, config.limits, start, "w-subproblem infeasible" + at);
    rec.w_seconds = seconds_since(t0);
    const std::vector<int> x_sum = edge_sums(in, fwd);
    const int objective = fwd_times(in, fwd, y).makespan;

    t0 = Clock::now();
    BuiltModel ym = build_y_subproblem(in, x_sum, lambda, config.rho, objective);
    SolverConfig ycfg = config.limits;
    ycfg.bound = BoundMode::lp;
    const SolverResult yres = solve(ym.model, ycfg);
    if (!yres.has_incumbent()) {
      throw Error("y-subproblem infeasible" + at + ": " + to_string(yres.status));
    }
    std::vector<int> y_new(E, 0);
    for (size_t e = 0; e < E; ++e) {
      y_new[e] = yres.values[static_cast<size_t>(ym.layout.y[e])] > 0.5 ? 1 : 0;
    }
    rec.y_seconds = seconds_since(t0);

    rec.objective = objective;
    rec.lagrangian = lagrangian_value(in, fwd, y_new, lambda, config.rho);
    double norm = 0.0;
    for (size_t e = 0; e < E; ++e) {
      const int r = x_sum[e] - y_new[e] * in.edges()[e].p;
      rec.residual += std::abs(r);
      rec.y_changes += std::abs(y_new[e] - y[e]);
      lambda[e] += r;
      norm += lambda[e] * lambda[e];
    }
    rec.dual_norm = std::sqrt(norm);
    result.trace.iterations.push_back(rec);

    const bool stationary =
        prev_objective >= 0 && rec.y_changes < config.eps1 &&
        std::abs(objective - prev_objective) < config.eps2;
    y = std::move(y_new);
    prev_objective = objective;
    if (stationary) {
      result.converged = true;
      break;
    }
  }

  BuiltModel fix = build_feasibility_correction(in, y, lambda, config.rho);
  add_switching_cost(fix, in);
  const Assignment a = edge_vector_to_assignment(in, y);
  result.fwd = solve_schedule_model(in, fix, config.limits, a,
                                    "feasibility correction failed");
  const FwdTimes t = fwd_times(in, result.fwd, y);
  result.assignment = a;
  result.fwd_finish = t.finish;
  result.fwd_completion = t.completion;
  result.fwd_makespan = t.makespan;
  result.lambda = std::move(lambda);
  return result;
}

SolveOutcome admm_plus_bwd(const ProblemInstance& in, const AdmmConfig& config,
                           const BwdOptions& bwd) {
  const auto start = Clock::now();
  AdmmResult r = run_admm(in, config);
  std::vector<SlotTriple> z = schedule_bwd(in, r.assignment, r.fwd, bwd);
  SolveOutcome out =
      assemble_outcome(in, r.assignment, std::move(r.fwd), std::move(z));
  out.stats.solver = "admm+alg2";
  out.stats.iterations = static_cast<int>(r.trace.iterations.size());
  out.stats.converged = r.converged;
  if (!r.converged) out.stats.notes = "unconverged";
  out.stats.wall_seconds = seconds_since(start);
  return out;
}

}  // namespace pslsched
