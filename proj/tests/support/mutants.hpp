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

// Hand-built schedules that break exactly one constraint family, each paired
// with the valid schedule it was derived from.
#pragma once

#include <string>
#include <vector>

#include "fixtures.hpp"
#include "pslsched/instance.hpp"

namespace pslsched::testing {

struct Mutant {
  std::string name;
  std::string tag;
  ProblemInstance instance;
  Assignment assignment;
  Schedule schedule;
  Assignment twin_assignment;
  Schedule twin_schedule;
};

// Two clients, two helpers, T = 10.
//   client 1: r=1 p=2 l=1 l'=1 p'=2 r'=1    client 2: r=0 p=1 l=0 l'=1 p'=1 r'=2
// Memory: demand 1 each; `tight` capacities 1.5 keep one client per helper.
inline ProblemInstance mutant_base(bool tight, bool sparse = false) {
  std::vector<EdgeSpec> es = {{1, 1, 1, 2, 1, 1, 2, 1}, {1, 2, 1, 2, 1, 1, 2, 1},
                              {2, 2, 0, 1, 0, 1, 1, 2}};
  if (!sparse) es.insert(es.begin() + 2, EdgeSpec{2, 1, 0, 1, 0, 1, 1, 2});
  return make_instance(2, 2, es, {1.0, 1.0}, tight ? std::vector<double>{1.5, 1.5}
                                                  : std::vector<double>{2.0, 2.0});
}

inline std::vector<Mutant> validator_mutants() {
  // Split: client 1 on helper 1, client 2 on helper 2.
  const Assignment split{{0, 1}};
  const Schedule split_ok{{{0, 0, 1}, {0, 0, 2}, {1, 1, 0}},
                          {{0, 0, 5}, {0, 0, 6}, {1, 1, 2}}};
  // Shared: both clients on helper 1.
  const Assignment shared{{0, 0}};
  const Schedule shared_ok{{{0, 0, 1}, {0, 0, 2}, {0, 1, 0}},
                           {{0, 0, 5}, {0, 0, 6}, {0, 1, 3}}};
  const ProblemInstance tight = mutant_base(true);
  const ProblemInstance loose = mutant_base(false);
  const ProblemInstance sparse = mutant_base(true, true);

  std::vector<Mutant> m;
  auto split_mutant = [&](std::string name, std::string tag, Schedule s,
                          Assignment a = Assignment{{0, 1}},
                          const ProblemInstance* in = nullptr) {
    m.push_back({std::move(name), std::move(tag), in ? *in : tight, std::move(a),
                 std::move(s), split, split_ok});
  };

  split_mutant("fwd before release", "release",
               {{{0, 0, 0}, {0, 0, 1}, {1, 1, 0}}, split_ok.bwd});
  split_mutant("fwd unit before release", "release",
               {{{0, 0, 0}, {0, 0, 2}, {1, 1, 0}}, split_ok.bwd});
  split_mutant("bwd too early after long fwd", "precedence",
               {split_ok.fwd, {{0, 0, 4}, {0, 0, 5}, {1, 1, 2}}});
  split_mutant("bwd too early after unit fwd", "precedence",
               {split_ok.fwd, {{0, 0, 5}, {0, 0, 6}, {1, 1, 1}}});
  m.push_back({"fwd collision", "capacity", loose, shared,
               {{{0, 0, 1}, {0, 0, 2}, {0, 1, 1}}, shared_ok.bwd}, shared, shared_ok});
  m.push_back({"bwd collision", "capacity", loose, shared,
               {shared_ok.fwd, {{0, 0, 5}, {0, 0, 6}, {0, 1, 5}}}, shared, shared_ok});
  split_mutant("client unassigned", "assignment",
               {{{0, 0, 1}, {0, 0, 2}}, {{0, 0, 5}, {0, 0, 6}}}, Assignment{{0, -1}});
  split_mutant("assignment too short", "assignment",
               {{{0, 0, 1}, {0, 0, 2}}, {{0, 0, 5}, {0, 0, 6}}}, Assignment{{0}});
  split_mutant("memory on helper 1", "memory", shared_ok, shared);
  split_mutant("memory on helper 2", "memory",
               {{{1, 0, 1}, {1, 0, 2}, {1, 1, 0}}, {{1, 0, 5}, {1, 0, 6}, {1, 1, 3}}},
               Assignment{{1, 1}});
  split_mutant("fwd over quota", "fwd_quota",
               {{{0, 0, 1}, {0, 0, 2}, {0, 0, 3}, {1, 1, 0}},
                {{0, 0, 6}, {0, 0, 7}, {1, 1, 2}}});
  split_mutant("unit fwd over quota", "fwd_quota",
               {{{0, 0, 1}, {0, 0, 2}, {1, 1, 0}, {1, 1, 1}},
                {{0, 0, 5}, {0, 0, 6}, {1, 1, 3}}});
  split_mutant("bwd over quota", "bwd_quota",
               {split_ok.fwd, {{0, 0, 5}, {0, 0, 6}, {0, 0, 7}, {1, 1, 2}}});
  split_mutant("bwd missing", "bwd_quota", {split_ok.fwd, {{0, 0, 5}, {0, 0, 6}}});
  split_mutant("completion after horizon", "late_completion",
               {split_ok.fwd, {{0, 0, 8}, {0, 0, 9}, {1, 1, 2}}});
  split_mutant("slot beyond horizon", "horizon",
               {split_ok.fwd, {{0, 0, 5}, {0, 0, 6}, {0, 0, 10}, {1, 1, 2}}});
  split_mutant("assignment over a non-edge", "edge",
               {{{0, 0, 1}, {0, 0, 2}}, {{0, 0, 5}, {0, 0, 6}}}, Assignment{{0, 0}},
               &sparse);
  split_mutant("stray triple on another helper", "assigned_edge",
               {{{0, 0, 1}, {0, 0, 2}, {0, 1, 0}, {1, 1, 0}}, split_ok.bwd});
  split_mutant("duplicate triple", "duplicate",
               {{{0, 0, 1}, {0, 0, 1}, {0, 0, 2}, {1, 1, 0}}, split_ok.bwd});
  split_mutant("unknown helper index", "index",
               {{{0, 0, 1}, {0, 0, 2}, {1, 1, 0}, {7, 0, 3}}, split_ok.bwd});
  // The non-edge mutant's twin lives on the sparse instance as well.
  for (Mutant& x : m) {
    if (x.tag == "edge") x.twin_assignment = split;
  }
  return m;
}

}  // namespace pslsched::testing
