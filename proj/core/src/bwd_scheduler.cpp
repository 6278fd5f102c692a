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

#include "pslsched/bwd_scheduler.hpp"

#include <algorithm>
#include <climits>

#include "pslsched/ilp_builder.hpp"
#include "pslsched/ilp_solver.hpp"
#include "pslsched/validator.hpp"

namespace pslsched {

namespace {

// Works in compressed time: position k stands for the k-th eligible slot.
class BlockScheduler {
 public:
  BlockScheduler(std::span<const BwdTask> tasks, std::span<const int> eligible)
      : tasks_(tasks), eligible_(eligible) {
    owner_.assign(eligible.size(), -1);
    for (const BwdTask& t : tasks) {
      if (t.processing < 1) throw Error("bwd task needs at least one slot");
      const auto it =
          std::lower_bound(eligible.begin(), eligible.end(), t.release);
      release_.push_back(static_cast<int>(it - eligible.begin()));
    }
  }

  HelperBwdSchedule run() {
    std::vector<int> all(tasks_.size());
    for (size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
    place(std::move(all), 0, 0);

    HelperBwdSchedule out;
    out.slots.assign(tasks_.size(), {});
    for (size_t k = 0; k < owner_.size(); ++k) {
      if (owner_[k] >= 0) {
        out.slots[static_cast<size_t>(owner_[k])].push_back(eligible_[k]);
      }
    }
    out.finish.assign(tasks_.size(), 0);
    out.max_cost = tasks_.empty() ? 0 : INT_MIN;
    for (size_t k = 0; k < tasks_.size(); ++k) {
      if (static_cast<int>(out.slots[k].size()) != tasks_[k].processing) {
        throw InternalError("block scheduler lost units of a task");
      }
      out.finish[k] = out.slots[k].back() + 1;
      out.max_cost = std::max(out.max_cost, out.finish[k] + tasks_[k].tail);
    }
    out.blocks = std::move(blocks_);
    return out;
  }

 private:
  int real_end(int pos) const {
    return eligible_[static_cast<size_t>(pos) - 1] + 1;
  }

  // FCFS over `members` from compressed position `from`, split into blocks;
  // each block then moves its cheapest-tail task into the gaps left by the
  // recursively scheduled rest.
  void place(std::vector<int> members, int from, int depth) {
    std::sort(members.begin(), members.end(), [&](int a, int b) {
      const int ra = release_[static_cast<size_t>(a)];
      const int rb = release_[static_cast<size_t>(b)];
      if (ra != rb) return ra < rb;
      return tasks_[static_cast<size_t>(a)].label <
             tasks_[static_cast<size_t>(b)].label;
    });
    const int m = static_cast<int>(eligible_.size());
    size_t k = 0;
    int t = from;
    while (k < members.size()) {
      Block block;
      int start = std::max(t, release_[static_cast<size_t>(members[k])]);
      t = start;
      while (k < members.size() &&
             release_[static_cast<size_t>(members[k])] <= t) {
        block.members.push_back(members[k]);
        t += tasks_[static_cast<size_t>(members[k])].processing;
        ++k;
      }
      if (t > m) throw Error("horizon exhausted");
      block.start = eligible_[static_cast<size_t>(start)];
      block.end = real_end(t);
      block.depth = depth;

      int chosen = block.members.front();
      for (int j : block.members) {
        const BwdTask& a = tasks_[static_cast<size_t>(j)];
        const BwdTask& b = tasks_[static_cast<size_t>(chosen)];
        if (a.tail < b.tail || (a.tail == b.tail && a.label < b.label)) {
          chosen = j;
        }
      }
      block.chosen = chosen;
      const int end = t;
      std::vector<int> rest;
      for (int j : block.members) {
        if (j != chosen) rest.push_back(j);
      }
      blocks_.push_back(std::move(block));
      if (!rest.empty()) place(std::move(rest), start, depth + 1);

      int need = tasks_[static_cast<size_t>(chosen)].processing;
      for (int pos = start; pos < end; ++pos) {
        if (owner_[static_cast<size_t>(pos)] >= 0) continue;
        if (pos < release_[static_cast<size_t>(chosen)] || need == 0) {
          throw InternalError("block gap does not fit the rescheduled task");
        }
        owner_[static_cast<size_t>(pos)] = chosen;
        --need;
      }
      if (need != 0) {
        throw InternalError("block gaps do not cover the rescheduled task");
      }
    }
  }

  std::span<const BwdTask> tasks_;
  std::span<const int> eligible_;
  std::vector<int> release_;
  std::vector<int> owner_;
  std::vector<Block> blocks_;
};

struct HelperTasks {
  std::vector<int> clients;  // client indices
  std::vector<BwdTask> tasks;
};

// Cost of a helper's bwd plan including switching charges: max over its
// clients of phi + r' + mu * (fwd starts + bwd starts).
int helper_cost(const ProblemInstance& in, int helper,
                const std::vector<int>& clients,
                std::span<const SlotTriple> fwd,
                std::span<const SlotTriple> bwd) {
  const int mu = in.switching_cost()[static_cast<size_t>(helper)];
  int best = INT_MIN;
  for (int j : clients) {
    int phi = 0;
    for (const SlotTriple& s : bwd) {
      if (s.client == j) phi = std::max(phi, s.slot + 1);
    }
    const EdgeTiming& t = in.timing(j, helper);
    best = std::max(best, phi + t.r_prime +
                              mu * (count_task_starts(fwd, j) +
                                    count_task_starts(bwd, j)));
  }
  return best;
}

// Exact bwd plan of one helper with fwd slots held fixed, through the full
// model of the single-helper sub-instance. Empty when it cannot be used.
std::vector<SlotTriple> exact_helper_bwd(const ProblemInstance& in, int helper,
                                         const std::vector<int>& clients,
                                         std::span<const SlotTriple> fwd,
                                         double time_limit) {
  const ProblemInstance sub = in.restrict_to(helper, clients);
  for (const SlotTriple& s : fwd) {
    if (s.slot >= sub.horizon()) return {};
  }
  BuiltModel built = build_full(sub);
  add_switching_cost(built, sub);
  const ModelLayout& L = built.layout;
  std::vector<std::vector<char>> busy(clients.size(),
                                      std::vector<char>(static_cast<size_t>(L.horizon), 0));
  for (const SlotTriple& s : fwd) {
    const auto it = std::find(clients.begin(), clients.end(), s.client);
    busy[static_cast<size_t>(it - clients.begin())][static_cast<size_t>(s.slot)] = 1;
  }
  for (size_t e = 0; e < clients.size(); ++e) {
    built.model.fix(L.y[e], 1.0);
    for (int t = 0; t < L.horizon; ++t) {
      const int xc = L.x[e][static_cast<size_t>(t)];
      if (xc >= 0) {
        built.model.fix(xc, busy[e][static_cast<size_t>(t)] ? 1.0 : 0.0);
      } else if (busy[e][static_cast<size_t>(t)]) {
        return {};
      }
    }
  }
  SolverConfig cfg;
  cfg.time_limit_sec = time_limit;
  cfg.bound = BoundMode::combinatorial;
  const SolverResult res = solve(built.model, cfg);
  if (!res.has_incumbent()) return {};
  Assignment a;
  Schedule s;
  decode(sub, built, res.values, a, s);
  std::vector<SlotTriple> out;
  for (const SlotTriple& t : s.bwd) {
    out.push_back({helper, clients[static_cast<size_t>(t.client)], t.slot});
  }
  return out;
}

}  // namespace

std::vector<int> eligible_slots(int helper, std::span<const SlotTriple> fwd,
                                int horizon) {
  std::vector<char> used(static_cast<size_t>(std::max(horizon, 0)), 0);
  for (const SlotTriple& s : fwd) {
    if (s.helper == helper && s.slot >= 0 && s.slot < horizon) {
      used[static_cast<size_t>(s.slot)] = 1;
    }
  }
  std::vector<int> out;
  for (int t = 0; t < horizon; ++t) {
    if (!used[static_cast<size_t>(t)]) out.push_back(t);
  }
  return out;
}

HelperBwdSchedule schedule_bwd_on_helper(std::span<const BwdTask> tasks,
                                         std::span<const int> eligible) {
  return BlockScheduler(tasks, eligible).run();
}

int bwd_release(const EdgeTiming& e, int fwd_finish) {
  return fwd_finish + e.l + e.l_prime;
}

std::vector<SlotTriple> schedule_bwd(const ProblemInstance& in,
                                     const Assignment& assignment,
                                     std::span<const SlotTriple> fwd,
                                     const BwdOptions& options) {
  const int J = in.num_clients();
  if (static_cast<int>(assignment.helper_of.size()) != J) {
    throw Error("assignment size mismatch");
  }
  std::vector<int> fwd_finish(static_cast<size_t>(J), 0);
  std::vector<int> units(static_cast<size_t>(J), 0);
  for (const SlotTriple& s : fwd) {
    if (s.client < 0 || s.client >= J) throw Error("fwd triple with bad client");
    if (assignment.helper_of[static_cast<size_t>(s.client)] != s.helper) {
      throw Error("fwd triple on a helper the client is not assigned to");
    }
    fwd_finish[static_cast<size_t>(s.client)] =
        std::max(fwd_finish[static_cast<size_t>(s.client)], s.slot + 1);
    ++units[static_cast<size_t>(s.client)];
  }
  std::vector<HelperTasks> per(static_cast<size_t>(in.num_helpers()));
  for (int j = 0; j < J; ++j) {
    const int i = assignment.helper_of[static_cast<size_t>(j)];
    if (i < 0) throw Error("incomplete schedule: client without helper");
    const EdgeTiming& t = in.timing(j, i);
    if (units[static_cast<size_t>(j)] != t.p) {
      throw Error("incomplete schedule: fwd slots differ from p");
    }
    HelperTasks& h = per[static_cast<size_t>(i)];
    h.clients.push_back(j);
    h.tasks.push_back({in.client_ids()[static_cast<size_t>(j)],
                       bwd_release(t, fwd_finish[static_cast<size_t>(j)]),
                       t.p_prime, t.r_prime});
  }

  std::vector<SlotTriple> out;
  for (int i = 0; i < in.num_helpers(); ++i) {
    const HelperTasks& h = per[static_cast<size_t>(i)];
    if (h.clients.empty()) continue;
    const std::vector<int> eligible = eligible_slots(i, fwd, in.horizon());
    const HelperBwdSchedule hs = schedule_bwd_on_helper(h.tasks, eligible);
    std::vector<SlotTriple> mine;
    for (size_t k = 0; k < h.clients.size(); ++k) {
      for (int s : hs.slots[k]) mine.push_back({i, h.clients[k], s});
    }
    if (options.exact_when_switching &&
        in.switching_cost()[static_cast<size_t>(i)] > 0) {
      std::vector<SlotTriple> own_fwd;
      for (const SlotTriple& s : fwd) {
        if (s.helper == i) own_fwd.push_back(s);
      }
      std::vector<SlotTriple> exact = exact_helper_bwd(
          in, i, h.clients, own_fwd, options.exact_time_limit_sec);
      if (!exact.empty() &&
          helper_cost(in, i, h.clients, own_fwd, exact) <
              helper_cost(in, i, h.clients, own_fwd, mine)) {
        mine = std::move(exact);
      }
    }
    out.insert(out.end(), mine.begin(), mine.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

SolveOutcome assemble_outcome(const ProblemInstance& in,
                              const Assignment& assignment,
                              std::vector<SlotTriple> fwd,
                              std::vector<SlotTriple> bwd) {
  Schedule s{std::move(fwd), std::move(bwd)};
  s.normalize();
  ensure_valid(in, assignment, s, "assemble_outcome");
  return completion_from_schedule(in, assignment, s);
}

}  // namespace pslsched
