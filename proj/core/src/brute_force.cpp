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

#include <algorithm>
#include <climits>
#include <map>
#include <string>
#include <unordered_map>

#include "pslsched/validator.hpp"

namespace pslsched {

namespace {

constexpr int kInfeasible = INT_MAX / 4;
constexpr int kNothingLeft = INT_MIN / 4;
constexpr unsigned char kReleased = 0xFE;
constexpr unsigned char kDone = 0xFF;

struct ClientState {
  unsigned char fwd_rem = 0;
  unsigned char fwd_finish = 0;  // phi^f while bwd not yet released
  unsigned char bwd_rem = 0;
  unsigned char starts = 0;
};

/// Exact single-helper optimum by memoized search over every action per slot
/// (idle or one unit of any available task).
class HelperOracle {
 public:
  HelperOracle(const ProblemInstance& instance, int helper,
               std::vector<int> clients)
      : helper_(helper),
        clients_(std::move(clients)),
        horizon_(instance.horizon()),
        mu_(instance.switching_cost()[static_cast<size_t>(helper)]) {
    for (int j : clients_) timing_.push_back(instance.timing(j, helper));
  }

  int solve() {
    std::vector<ClientState> s(clients_.size());
    for (size_t k = 0; k < clients_.size(); ++k) {
      s[k].fwd_rem = static_cast<unsigned char>(timing_[k].p);
      s[k].bwd_rem = static_cast<unsigned char>(timing_[k].p_prime);
    }
    initial_ = s;
    return value(0, s, -1);
  }

  // Replays the memo to produce one optimal schedule.
  void reconstruct(std::vector<SlotTriple>& fwd, std::vector<SlotTriple>& bwd) {
    std::vector<ClientState> s = initial_;
    int last = -1;
    for (int t = 0; t < horizon_; ++t) {
      const int target = value(t, s, last);
      if (target == kNothingLeft) return;
      bool found = false;
      for (int a : actions(t, s)) {
        std::vector<ClientState> next = s;
        const int done = apply(t, next, a, last);
        const int v = std::max(done, value(t + 1, next, a));
        if (v == target) {
          if (a >= 0) {
            const size_t k = static_cast<size_t>(a / 2);
            SlotTriple tr{helper_, clients_[k], t};
            (a % 2 == 0 ? fwd : bwd).push_back(tr);
          }
          s = std::move(next);
          last = a;
          found = true;
          break;
        }
      }
      if (!found) throw InternalError("oracle reconstruction diverged");
    }
  }

  long long states() const { return static_cast<long long>(memo_.size()); }

 private:
  // Action codes: -1 idle, 2k fwd of client k, 2k+1 bwd of client k.
  std::vector<int> actions(int t, const std::vector<ClientState>& s) const {
    std::vector<int> out;
    for (size_t k = 0; k < s.size(); ++k) {
      const ClientState& c = s[k];
      if (c.fwd_rem == kDone) continue;
      if (c.fwd_rem > 0) {
        if (t >= timing_[k].r) out.push_back(static_cast<int>(2 * k));
      } else if (c.fwd_finish == kReleased && c.bwd_rem > 0) {
        out.push_back(static_cast<int>(2 * k + 1));
      }
    }
    out.push_back(-1);
    return out;
  }

  // Applies an action at slot t; returns the completion of a client that
  // finishes with this action, or kNothingLeft.
  int apply(int t, std::vector<ClientState>& s, int a, int last) const {
    int finished = kNothingLeft;
    if (a >= 0) {
      const size_t k = static_cast<size_t>(a / 2);
      ClientState& c = s[k];
      if (mu_ > 0 && last != a) ++c.starts;
      if (a % 2 == 0) {
        if (--c.fwd_rem == 0) c.fwd_finish = static_cast<unsigned char>(t + 1);
      } else if (--c.bwd_rem == 0) {
        finished = t + 1 + timing_[k].r_prime + mu_ * c.starts;
        c = ClientState{kDone, kDone, kDone, 0};
      }
    }
    // Normalize bwd releases that have passed.
    for (size_t k = 0; k < s.size(); ++k) {
      ClientState& c = s[k];
      if (c.fwd_rem == 0 && c.fwd_finish != kReleased &&
          c.fwd_finish + timing_[k].l + timing_[k].l_prime <= t + 1) {
        c.fwd_finish = kReleased;
      }
    }
    return finished;
  }

  int value(int t, const std::vector<ClientState>& s, int last) {
    bool any_left = false;
    for (const ClientState& c : s) any_left |= c.fwd_rem != kDone;
    if (!any_left) return kNothingLeft;
    if (t >= horizon_) return kInfeasible;
    const int last_key = mu_ > 0 ? last : -1;
    std::string key;
    key.reserve(2 + 4 * s.size());
    key.push_back(static_cast<char>(t));
    key.push_back(static_cast<char>(last_key + 1));
    for (const ClientState& c : s) {
      key.push_back(static_cast<char>(c.fwd_rem));
      key.push_back(static_cast<char>(c.fwd_finish));
      key.push_back(static_cast<char>(c.bwd_rem));
      key.push_back(static_cast<char>(c.starts));
    }
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int best = kInfeasible;
    for (int a : actions(t, s)) {
      std::vector<ClientState> next = s;
      const int done = apply(t, next, a, last);
      best = std::min(best, std::max(done, value(t + 1, next, a)));
    }
    memo_.emplace(std::move(key), best);
    return best;
  }

  int helper_;
  std::vector<int> clients_;
  std::vector<EdgeTiming> timing_;
  int horizon_;
  int mu_;
  std::vector<ClientState> initial_;
  std::unordered_map<std::string, int> memo_;
};

}  // namespace

BruteForceResult brute_force_optimum(const ProblemInstance& instance,
                                     const BruteForceCaps& caps) {
  const int J = instance.num_clients();
  const int I = instance.num_helpers();
  if (J > caps.max_clients || I > caps.max_helpers ||
      instance.horizon() > caps.max_horizon) {
    throw Error("instance exceeds brute-force caps");
  }
  if (instance.horizon() > 250) throw Error("horizon too large for oracle");

  BruteForceResult result;
  std::map<std::pair<int, unsigned>, int> subset_value;
  auto helper_value = [&](int h, unsigned mask) {
    auto key = std::make_pair(h, mask);
    auto it = subset_value.find(key);
    if (it != subset_value.end()) return it->second;
    std::vector<int> clients;
    for (int j = 0; j < J; ++j) {
      if (mask & (1u << j)) clients.push_back(j);
    }
    int v = kNothingLeft;
    if (!clients.empty()) {
      HelperOracle oracle(instance, h, clients);
      v = oracle.solve();
      result.states += oracle.states();
    }
    subset_value.emplace(key, v);
    return v;
  };

  int best = kInfeasible;
  std::vector<int> best_assign;
  std::vector<int> assign(static_cast<size_t>(J), -1);
  std::vector<size_t> choice(static_cast<size_t>(J), 0);
  bool any_memory_feasible = false;
  // Odometer over each client's helper list.
  while (true) {
    for (int j = 0; j < J; ++j) {
      assign[static_cast<size_t>(j)] =
          instance.helpers_of(j)[choice[static_cast<size_t>(j)]];
    }
    std::vector<double> load(static_cast<size_t>(I), 0.0);
    std::vector<unsigned> masks(static_cast<size_t>(I), 0u);
    for (int j = 0; j < J; ++j) {
      const size_t h = static_cast<size_t>(assign[static_cast<size_t>(j)]);
      load[h] += instance.memory_demand()[static_cast<size_t>(j)];
      masks[h] |= 1u << j;
    }
    bool feasible = true;
    for (int i = 0; i < I; ++i) {
      feasible &= load[static_cast<size_t>(i)] <=
                  instance.memory_capacity()[static_cast<size_t>(i)] + 1e-9;
    }
    if (feasible) {
      any_memory_feasible = true;
      int v = kNothingLeft;
      for (int i = 0; i < I; ++i) {
        v = std::max(v, helper_value(i, masks[static_cast<size_t>(i)]));
      }
      if (v < best) {
        best = v;
        best_assign = assign;
      }
    }
    int j = J - 1;
    while (j >= 0) {
      const size_t js = static_cast<size_t>(j);
      if (++choice[js] < instance.helpers_of(j).size()) break;
      choice[js] = 0;
      --j;
    }
    if (j < 0) break;
  }
  if (!any_memory_feasible) throw Error("no memory-feasible assignment");
  if (best >= kInfeasible) throw Error("no schedule fits the horizon");

  Schedule schedule;
  for (int i = 0; i < I; ++i) {
    std::vector<int> clients;
    for (int j = 0; j < J; ++j) {
      if (best_assign[static_cast<size_t>(j)] == i) clients.push_back(j);
    }
    if (clients.empty()) continue;
    HelperOracle oracle(instance, i, clients);
    oracle.solve();
    oracle.reconstruct(schedule.fwd, schedule.bwd);
  }
  result.makespan = best;
  result.witness =
      completion_from_schedule(instance, Assignment{best_assign}, schedule);
  result.witness.stats.solver = "brute-force";
  result.witness.stats.optimal = true;
  if (result.witness.makespan != best) {
    throw InternalError("oracle witness disagrees with its value");
  }
  return result;
}

}  // namespace pslsched
