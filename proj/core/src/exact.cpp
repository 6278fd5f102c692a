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

#include "pslsched/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "pslsched/bwd_scheduler.hpp"
#include "pslsched/heuristics.hpp"
#include "pslsched/ilp_builder.hpp"
#include "preemptive.hpp"

namespace pslsched {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Branch and bound over decision points of a single helper. At every release
// or completion one available task is chosen and run until the next release
// or its own completion. With a regular objective and preemption allowed,
// some optimal schedule has this form and never idles while work is waiting.
class SingleHelperSearch {
 public:
  SingleHelperSearch(const ProblemInstance& in, int helper,
                     std::span<const int> clients, int cutoff,
                     double time_limit)
      : helper_(helper), clients_(clients.begin(), clients.end()),
        best_(cutoff), time_limit_(time_limit) {
    for (int j : clients_) tim_.push_back(in.timing(j, helper));
    const size_t n = clients_.size();
    rem_f_.resize(n);
    rem_b_.resize(n);
    rel_b_.assign(n, -1);
    for (size_t k = 0; k < n; ++k) {
      rem_f_[k] = tim_[k].p;
      rem_b_[k] = tim_[k].p_prime;
    }
  }

  HelperSolution run() {
    start_ = Clock::now();
    dfs(0, INT_MIN);
    HelperSolution out;
    out.nodes = nodes_;
    out.optimal = !aborted_;
    out.timed_out = aborted_;
    out.makespan = best_;
    for (const Segment& s : best_path_) {
      for (int u = 0; u < s.len; ++u) {
        (s.bwd ? out.bwd : out.fwd)
            .push_back({helper_, clients_[static_cast<size_t>(s.task)],
                        s.start + u});
      }
    }
    if (best_path_.empty() && !clients_.empty()) out.optimal = false;
    std::sort(out.fwd.begin(), out.fwd.end());
    std::sort(out.bwd.begin(), out.bwd.end());
    return out;
  }

  bool found() const { return !best_path_.empty(); }

 private:
  struct Segment {
    int task;
    bool bwd;
    int start;
    int len;
  };

  int fwd_tail(size_t k) const {
    return tim_[k].l + tim_[k].l_prime + tim_[k].p_prime + tim_[k].r_prime;
  }

  int bound(int t, int cur) const {
    std::vector<detail::PreemptiveJob> jobs;
    for (size_t k = 0; k < tim_.size(); ++k) {
      const EdgeTiming& e = tim_[k];
      if (rem_f_[k] > 0) {
        const int rel = std::max(e.r, t);
        jobs.push_back({rel, rem_f_[k], fwd_tail(k)});
        jobs.push_back({rel + rem_f_[k] + e.l + e.l_prime, e.p_prime, e.r_prime});
      } else if (rem_b_[k] > 0) {
        jobs.push_back({std::max(rel_b_[k], t), rem_b_[k], e.r_prime});
      }
    }
    return std::max(cur, detail::largest_tail_first_from(jobs, t));
  }

  std::string key(int t) const {
    std::string k;
    k.reserve(4 * (1 + 3 * tim_.size()));
    auto put = [&k](int v) { k.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put(t);
    for (size_t j = 0; j < tim_.size(); ++j) {
      put(rem_f_[j]);
      put(rem_b_[j]);
      put(rem_b_[j] > 0 ? rel_b_[j] : -1);
    }
    return k;
  }

  bool out_of_time() {
    if (aborted_) return true;
    if (time_limit_ > 0.0 && (nodes_ & 1023) == 0 &&
        seconds_since(start_) > time_limit_) {
      aborted_ = true;
    }
    return aborted_;
  }

  void dfs(int t, int cur) {
    ++nodes_;
    if (out_of_time()) return;
    const size_t n = tim_.size();
    bool done = true;
    for (size_t k = 0; k < n; ++k) {
      if (rem_b_[k] > 0) done = false;
    }
    if (done) {
      if (cur < best_) {
        best_ = cur;
        best_path_ = path_;
      }
      return;
    }
    if (bound(t, cur) >= best_) return;
    {
      auto [it, inserted] = memo_.try_emplace(key(t), cur);
      if (!inserted) {
        if (it->second <= cur) return;
        it->second = cur;
      }
      if (memo_.size() > kMemoCap) memo_.clear();
    }

    struct Option {
      int task;
      bool bwd;
      int tail;
    };
    std::vector<Option> options;
    int next_release = INT_MAX;
    for (size_t k = 0; k < n; ++k) {
      if (rem_f_[k] > 0) {
        if (tim_[k].r <= t) {
          options.push_back({static_cast<int>(k), false, fwd_tail(k)});
        } else {
          next_release = std::min(next_release, tim_[k].r);
        }
      } else if (rem_b_[k] > 0) {
        if (rel_b_[k] <= t) {
          options.push_back({static_cast<int>(k), true, tim_[k].r_prime});
        } else {
          next_release = std::min(next_release, rel_b_[k]);
        }
      }
    }
    if (options.empty()) {
      dfs(next_release, cur);
      return;
    }
    std::stable_sort(options.begin(), options.end(),
                     [](const Option& a, const Option& b) { return a.tail > b.tail; });
    for (const Option& o : options) {
      const size_t k = static_cast<size_t>(o.task);
      int& rem = o.bwd ? rem_b_[k] : rem_f_[k];
      const int run = next_release == INT_MAX
                          ? rem
                          : std::min(rem, next_release - t);
      const int end = t + run;
      rem -= run;
      int next_cur = cur;
      const int saved_rel = rel_b_[k];
      if (rem == 0) {
        if (o.bwd) {
          next_cur = std::max(cur, end + tim_[k].r_prime);
        } else {
          rel_b_[k] = bwd_release(tim_[k], end);
        }
      }
      if (next_cur < best_) {
        path_.push_back({o.task, o.bwd, t, run});
        dfs(end, next_cur);
        path_.pop_back();
      }
      rel_b_[k] = saved_rel;
      rem += run;
      if (aborted_) return;
    }
  }

  static constexpr size_t kMemoCap = 4'000'000;

  int helper_;
  std::vector<int> clients_;
  std::vector<EdgeTiming> tim_;
  std::vector<int> rem_f_, rem_b_, rel_b_;
  int best_;
  double time_limit_;
  std::vector<Segment> path_, best_path_;
  std::unordered_map<std::string, int> memo_;
  long long nodes_ = 0;
  bool aborted_ = false;
  Clock::time_point start_;
};

HelperSolution single_helper_with_switching(const ProblemInstance& in,
                                            int helper,
                                            std::span<const int> clients,
                                            double time_limit) {
  const ProblemInstance sub = in.restrict_to(helper, clients);
  BuiltModel built = build_full(sub);
  add_switching_cost(built, sub);
  SolverConfig cfg;
  cfg.bound = BoundMode::combinatorial;
  cfg.time_limit_sec = time_limit;
  const SolverResult res = solve(built.model, cfg);
  HelperSolution out;
  out.nodes = res.nodes;
  out.optimal = res.status == SolveStatus::optimal;
  out.timed_out = res.status == SolveStatus::limit;
  if (!res.has_incumbent()) {
    throw Error("single-helper model has no solution within the limits");
  }
  Assignment a;
  Schedule s;
  decode(sub, built, res.values, a, s);
  for (const SlotTriple& t : s.fwd) {
    out.fwd.push_back({helper, clients[static_cast<size_t>(t.client)], t.slot});
  }
  for (const SlotTriple& t : s.bwd) {
    out.bwd.push_back({helper, clients[static_cast<size_t>(t.client)], t.slot});
  }
  const SolveOutcome o = completion_from_schedule(sub, a, s);
  out.makespan = o.makespan;
  return out;
}

// Assignment search. f(i, S) is monotone in S, so a partial assignment whose
// worst helper already reaches the incumbent is cut.
class AssignmentSearch {
 public:
  AssignmentSearch(const ProblemInstance& in, double time_limit)
      : in_(in), time_limit_(time_limit) {
    const int J = in.num_clients();
    const int I = in.num_helpers();
    if (J > 62) throw Error("exact search supports at most 62 clients");
    // Helpers with identical capacity, cost and edges are interchangeable.
    helper_class_.assign(static_cast<size_t>(I), -1);
    for (int i = 0; i < I; ++i) {
      helper_class_[static_cast<size_t>(i)] = i;
      for (int k = 0; k < i; ++k) {
        if (same_helper(k, i)) {
          helper_class_[static_cast<size_t>(i)] = helper_class_[static_cast<size_t>(k)];
          break;
        }
      }
    }
    // Longest chains first: they fix the makespan early.
    order_.resize(static_cast<size_t>(J));
    for (int j = 0; j < J; ++j) order_[static_cast<size_t>(j)] = j;
    std::vector<int> weight(static_cast<size_t>(J), INT_MAX);
    for (int j = 0; j < J; ++j) {
      for (int i : in.helpers_of(j)) {
        weight[static_cast<size_t>(j)] =
            std::min(weight[static_cast<size_t>(j)], in.timing(j, i).chain_length());
      }
    }
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return weight[static_cast<size_t>(a)] > weight[static_cast<size_t>(b)];
    });
    lone_bound_ = 0;
    for (int j = 0; j < J; ++j) lone_bound_ = std::max(lone_bound_, weight[static_cast<size_t>(j)]);
  }

  void seed(const Assignment& a, int makespan) {
    incumbent_ = a;
    best_ = makespan;
  }

  void run() {
    start_ = Clock::now();
    const size_t I = static_cast<size_t>(in_.num_helpers());
    masks_.assign(I, 0);
    free_ = in_.memory_capacity();
    current_ = Assignment::unassigned(in_.num_clients());
    dfs(0, INT_MIN);
  }

  bool complete() const { return !aborted_; }
  int best() const { return best_; }
  const Assignment& incumbent() const { return incumbent_; }
  int lone_bound() const { return lone_bound_; }
  long long nodes() const { return nodes_; }

 private:
  struct Entry {
    int value;
    bool exact;
  };

  bool same_helper(int a, int b) const {
    if (in_.memory_capacity()[static_cast<size_t>(a)] !=
            in_.memory_capacity()[static_cast<size_t>(b)] ||
        in_.switching_cost()[static_cast<size_t>(a)] !=
            in_.switching_cost()[static_cast<size_t>(b)]) {
      return false;
    }
    for (int j = 0; j < in_.num_clients(); ++j) {
      const bool ca = in_.connected(j, a);
      if (ca != in_.connected(j, b)) return false;
      if (!ca) continue;
      EdgeTiming ta = in_.timing(j, a);
      EdgeTiming tb = in_.timing(j, b);
      ta.helper = tb.helper = 0;
      ta.link_delay_per_byte = tb.link_delay_per_byte = 0.0;
      if (!(ta == tb)) return false;
    }
    return true;
  }

  // Per-helper optimum, or a value >= cutoff when it is at least that.
  int helper_value(int i, std::uint64_t mask, int cutoff) {
    const auto key = std::make_pair(i, mask);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      if (it->second.exact || it->second.value >= cutoff) return it->second.value;
    }
    std::vector<int> clients;
    for (int j = 0; j < in_.num_clients(); ++j) {
      if (mask >> j & 1) clients.push_back(j);
    }
    double left = 0.0;
    if (time_limit_ > 0.0) {
      left = time_limit_ - seconds_since(start_);
      if (left <= 0.0) {
        aborted_ = true;
        return INT_MAX;
      }
    }
    HelperSolution s;
    if (in_.switching_cost()[static_cast<size_t>(i)] > 0) {
      s = single_helper_with_switching(in_, i, clients, left);
      memo_[key] = {s.makespan, s.optimal};
      if (!s.optimal) aborted_ = true;
      return s.makespan;
    }
    s = SingleHelperSearch(in_, i, clients, cutoff, left).run();
    if (s.timed_out) {
      aborted_ = true;
      return INT_MAX;
    }
    memo_[key] = {s.makespan, !s.fwd.empty()};
    return s.makespan;
  }

  void dfs(size_t k, int cur) {
    ++nodes_;
    if (aborted_) return;
    if (k == order_.size()) {
      if (cur < best_) {
        best_ = cur;
        incumbent_ = current_;
      }
      return;
    }
    if (std::max(cur, lone_bound_) >= best_) return;
    const int j = order_[k];
    const double d = in_.memory_demand()[static_cast<size_t>(j)];
    std::vector<int> tried_empty_classes;
    struct Choice {
      int helper;
      int value;
    };
    std::vector<Choice> choices;
    for (int i : in_.helpers_of(j)) {
      const size_t is = static_cast<size_t>(i);
      if (free_[is] + 1e-9 < d) continue;
      if (masks_[is] == 0) {
        const int cls = helper_class_[is];
        if (std::find(tried_empty_classes.begin(), tried_empty_classes.end(),
                      cls) != tried_empty_classes.end()) {
          continue;
        }
        tried_empty_classes.push_back(cls);
      }
      const int v = helper_value(i, masks_[is] | (std::uint64_t{1} << j), best_);
      if (aborted_) return;
      if (std::max(cur, v) >= best_) continue;
      choices.push_back({i, v});
    }
    std::stable_sort(choices.begin(), choices.end(),
                     [](const Choice& a, const Choice& b) { return a.value < b.value; });
    for (const Choice& c : choices) {
      const size_t is = static_cast<size_t>(c.helper);
      if (std::max(cur, c.value) >= best_) continue;
      const std::uint64_t saved = masks_[is];
      masks_[is] |= std::uint64_t{1} << j;
      free_[is] -= d;
      current_.helper_of[static_cast<size_t>(j)] = c.helper;
      dfs(k + 1, std::max(cur, c.value));
      current_.helper_of[static_cast<size_t>(j)] = -1;
      free_[is] += d;
      masks_[is] = saved;
      if (aborted_) return;
    }
  }

  struct PairHash {
    size_t operator()(const std::pair<int, std::uint64_t>& p) const {
      return std::hash<std::uint64_t>()(p.second * 1315423911u + static_cast<std::uint64_t>(p.first));
    }
  };

  const ProblemInstance& in_;
  double time_limit_;
  std::vector<int> helper_class_;
  std::vector<int> order_;
  int lone_bound_ = 0;
  std::vector<std::uint64_t> masks_;
  std::vector<double> free_;
  Assignment current_;
  Assignment incumbent_;
  int best_ = INT_MAX;
  std::unordered_map<std::pair<int, std::uint64_t>, Entry, PairHash> memo_;
  long long nodes_ = 0;
  bool aborted_ = false;
  Clock::time_point start_;
};

}  // namespace

HelperSolution solve_single_helper(const ProblemInstance& in, int helper,
                                   std::span<const int> clients, int cutoff,
                                   double time_limit_sec) {
  if (helper < 0 || helper >= in.num_helpers()) throw Error("unknown helper");
  for (int j : clients) {
    if (!in.connected(j, helper)) throw Error("client not connected to helper");
  }
  if (in.switching_cost()[static_cast<size_t>(helper)] > 0) {
    return single_helper_with_switching(in, helper, clients, time_limit_sec);
  }
  return SingleHelperSearch(in, helper, clients, cutoff, time_limit_sec).run();
}

SolveOutcome solve_exact(const ProblemInstance& in, const ExactConfig& config) {
  const auto start = Clock::now();
  AssignmentSearch search(in, config.time_limit_sec);
  try {
    const SolveOutcome greedy = balanced_greedy(in);
    search.seed(greedy.assignment, greedy.makespan + 1);
  } catch (const Error&) {
    // No greedy start; the search begins without an incumbent.
  }
  search.run();
  if (search.best() == INT_MAX) {
    if (search.complete()) throw Error("no memory-feasible assignment");
    throw Error("exact search hit the time limit without a solution");
  }
  const Assignment& a = search.incumbent();
  std::vector<SlotTriple> fwd, bwd;
  for (int i = 0; i < in.num_helpers(); ++i) {
    std::vector<int> clients;
    for (int j = 0; j < in.num_clients(); ++j) {
      if (a.helper_of[static_cast<size_t>(j)] == i) clients.push_back(j);
    }
    if (clients.empty()) continue;
    const HelperSolution s = solve_single_helper(in, i, clients);
    fwd.insert(fwd.end(), s.fwd.begin(), s.fwd.end());
    bwd.insert(bwd.end(), s.bwd.begin(), s.bwd.end());
  }
  SolveOutcome out = assemble_outcome(in, a, std::move(fwd), std::move(bwd));
  out.stats.solver = "exact";
  out.stats.iterations = static_cast<int>(std::min<long long>(search.nodes(), INT_MAX));
  out.stats.optimal = search.complete();
  out.stats.lower_bound = search.complete() ? out.makespan : search.lone_bound();
  out.stats.wall_seconds = seconds_since(start);
  return out;
}

SolveOutcome solve_ilp(const ProblemInstance& in, const SolverConfig& config) {
  BuiltModel built = build_full(in);
  add_switching_cost(built, in);
  const SolverResult res = solve(built.model, config);
  if (!res.has_incumbent()) {
    throw Error(std::string("full model: ") + to_string(res.status));
  }
  Assignment a;
  Schedule s;
  decode(in, built, res.values, a, s);
  SolveOutcome out = assemble_outcome(in, a, std::move(s.fwd), std::move(s.bwd));
  out.stats.solver = "ilp";
  out.stats.iterations = static_cast<int>(std::min<long long>(res.nodes, INT_MAX));
  out.stats.optimal = res.status == SolveStatus::optimal;
  out.stats.lower_bound = res.best_bound;
  out.stats.wall_seconds = res.wall_seconds;
  return out;
}

}  // namespace pslsched
