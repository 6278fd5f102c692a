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

// Shared test data: small instances, the five-client block example, an
// exhaustive bwd oracle and the validator mutants.
#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pslsched/bwd_scheduler.hpp"
#include "pslsched/instance.hpp"
#include "pslsched/scenario.hpp"

namespace pslsched::testing {

struct EdgeSpec {
  int client;
  int helper;
  int r, p, l, lp, pp, rp;
};

inline ProblemInstance make_instance(int J, int I, const std::vector<EdgeSpec>& es,
                                     std::vector<double> demand = {},
                                     std::vector<double> capacity = {},
                                     std::vector<int> mu = {}) {
  std::vector<int> cids, hids;
  for (int j = 1; j <= J; ++j) cids.push_back(j);
  for (int i = 1; i <= I; ++i) hids.push_back(i);
  std::vector<EdgeTiming> edges;
  for (const EdgeSpec& s : es) {
    EdgeTiming e;
    e.client = s.client;
    e.helper = s.helper;
    e.r = s.r;
    e.p = s.p;
    e.l = s.l;
    e.l_prime = s.lp;
    e.p_prime = s.pp;
    e.r_prime = s.rp;
    edges.push_back(e);
  }
  if (demand.empty()) demand.assign(static_cast<size_t>(J), 1.0);
  if (capacity.empty()) capacity.assign(static_cast<size_t>(I), static_cast<double>(J));
  return ProblemInstance(cids, hids, edges, demand, capacity, 1.0, mu);
}

// Five bwd tasks on one helper; labels 1..5 in index order.
struct BlockExample {
  std::vector<BwdTask> tasks;
  std::vector<int> eligible;
};

inline BlockExample block_example() {
  BlockExample ex;
  //            label release p' tail
  ex.tasks = {{1, 0, 1, 5}, {2, 2, 3, 3}, {3, 4, 2, 8}, {4, 1, 2, 1}, {5, 9, 1, 2}};
  for (int t = 0; t < 20; ++t) ex.eligible.push_back(t);
  return ex;
}

// Minimum of max(finish + tail) over every slot filling of `eligible`,
// idle slots included. Dynamic program over (slot, remaining work).
class BwdOracle {
 public:
  BwdOracle(std::vector<BwdTask> tasks, std::vector<int> eligible)
      : tasks_(std::move(tasks)), eligible_(std::move(eligible)) {}

  int solve() {
    std::vector<int> rem;
    for (const BwdTask& t : tasks_) rem.push_back(t.processing);
    return best(0, rem);
  }

 private:
  int best(size_t pos, std::vector<int>& rem) {
    bool done = true;
    for (int v : rem) done = done && v == 0;
    if (done) return INT_MIN;
    if (pos == eligible_.size()) return INT_MAX;
    std::string key(reinterpret_cast<const char*>(rem.data()), rem.size() * sizeof(int));
    key += std::to_string(pos);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int t = eligible_[pos];
    int result = best(pos + 1, rem);  // idle
    for (size_t k = 0; k < tasks_.size(); ++k) {
      if (rem[k] == 0 || tasks_[k].release > t) continue;
      --rem[k];
      int v = best(pos + 1, rem);
      if (rem[k] == 0 && v != INT_MAX) v = std::max(v, t + 1 + tasks_[k].tail);
      ++rem[k];
      result = std::min(result, v);
    }
    memo_[key] = result;
    return result;
  }

  std::vector<BwdTask> tasks_;
  std::vector<int> eligible_;
  std::map<std::string, int> memo_;
};

// Random toy with horizon <= max_t. Three kinds, picked by `kind % 3`:
// reduction-family subsets with tight memory, scenario instances with slots
// long enough to stay small, and free-form integer timings.
inline ProblemInstance random_toy(std::uint64_t seed, int kind, int max_t = 40) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  const int J = pick(1, 4);
  const int I = pick(1, 2);
  switch (kind % 3) {
    case 0: {
      std::vector<EdgeSpec> es;
      int only_first = 0;
      for (int j = 1; j <= J; ++j) {
        const int pattern = I == 1 ? 0 : pick(0, 3);  // 0,1 both; 2 only h1; 3 only h2
        for (int i = 1; i <= I; ++i) {
          if ((pattern == 2 && i == 2) || (pattern == 3 && i == 1)) continue;
          es.push_back({j, i, 0, 1, 0, 0, 1, 0});
        }
        if (pattern == 2) ++only_first;
      }
      std::vector<double> cap(static_cast<size_t>(I), static_cast<double>(J));
      if (I == 2) {
        cap = {static_cast<double>(std::max(1, std::max(only_first, pick(1, J)))),
               static_cast<double>(J)};
      }
      return make_instance(J, I, es, {}, cap);
    }
    case 1: {
      ScenarioSpec s;
      s.scenario = pick(1, 2);
      s.model = rng() % 2 ? NnModel::resnet101 : NnModel::vgg19;
      s.num_clients = J;
      s.num_helpers = I;
      s.seed = rng();
      double slot = s.model == NnModel::resnet101 ? 1500.0 : 4000.0;
      for (int tries = 0; tries < 60; ++tries) {
        s.slot_length_ms = slot;
        ProblemInstance in = generate(s);
        if (in.horizon() <= max_t) return in;
        slot *= 1.25;
      }
      return generate(s);
    }
    default: {
      std::vector<EdgeSpec> es;
      for (int j = 1; j <= J; ++j) {
        for (int i = 1; i <= I; ++i) {
          es.push_back({j, i, pick(0, 3), pick(1, 3), pick(0, 2), pick(0, 2),
                        pick(1, 3), pick(0, 3)});
        }
      }
      std::vector<double> demand;
      for (int j = 0; j < J; ++j) demand.push_back(pick(1, 3));
      double total = 0;
      for (double d : demand) total += d;
      std::vector<double> cap(static_cast<size_t>(I), total);
      if (I == 2) cap = {std::max(3.0, total - pick(0, 3)), total};
      ProblemInstance in = make_instance(J, I, es, demand, cap);
      return in;
    }
  }
}

}  // namespace pslsched::testing
