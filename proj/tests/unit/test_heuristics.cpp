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

#include "doctest.h"
#include "fixtures.hpp"
#include "pslsched/heuristics.hpp"
#include "pslsched/scenario.hpp"
#include "pslsched/validator.hpp"

using namespace pslsched;
using testing::make_instance;

TEST_CASE("FCFS serves arrivals in order on one helper") {
  // Client 1 arrives at 2, client 2 at 0. Both p = 2, l + l' = 1.
  const ProblemInstance in = make_instance(
      2, 1, {{1, 1, 2, 2, 1, 0, 1, 0}, {2, 1, 0, 2, 0, 1, 1, 0}});
  const Schedule s = fcfs_schedule(in, Assignment{{0, 0}});
  // f2 [0,2), f1 [2,4), b2 released 3 -> [4,5), b1 released 5 -> [5,6)
  const Schedule expected{{{0, 0, 2}, {0, 0, 3}, {0, 1, 0}, {0, 1, 1}},
                          {{0, 0, 5}, {0, 1, 4}}};
  CHECK(s == expected);
  CHECK(validate(in, Assignment{{0, 0}}, s).empty());
}

TEST_CASE("balanced greedy spreads clients evenly") {
  const ProblemInstance in = generate_reduction_family(7, 3);
  const SolveOutcome o = balanced_greedy(in);
  const auto loads = helper_loads(in, o.assignment);
  int lo = 100, hi = 0;
  for (const HelperLoad& h : loads) {
    lo = std::min(lo, h.load);
    hi = std::max(hi, h.load);
  }
  CHECK(hi - lo <= 1);
  CHECK(o.stats.solver == "balanced-greedy");
  CHECK(validate(in, o.assignment, o.schedule).empty());
  // Unit tasks: three clients on one helper take f f f b b b.
  CHECK(o.makespan == 6);
}

TEST_CASE("greedy honours memory and order") {
  const ProblemInstance in = make_instance(
      2, 2, {{1, 1, 0, 1, 0, 0, 1, 0}, {1, 2, 0, 1, 0, 0, 1, 0},
             {2, 1, 0, 1, 0, 0, 1, 0}, {2, 2, 0, 1, 0, 0, 1, 0}},
      {3.0, 3.0}, {4.0, 2.0});
  CHECK_THROWS_AS(balanced_greedy(in), Error);
  CHECK_THROWS_AS(balanced_greedy(in, std::vector<int>{0, 0}), Error);
  const ProblemInstance ok = make_instance(
      2, 2, {{1, 1, 0, 1, 0, 0, 1, 0}, {1, 2, 0, 1, 0, 0, 1, 0},
             {2, 1, 0, 1, 0, 0, 1, 0}, {2, 2, 0, 1, 0, 0, 1, 0}},
      {3.0, 1.0}, {3.0, 1.0});
  CHECK(balanced_greedy(ok).assignment == Assignment{{0, 1}});
  // Client 2 first takes helper 1 by index and strands client 1.
  CHECK_THROWS_AS(balanced_greedy(ok, std::vector<int>{1, 0}), Error);
  const auto loads = helper_loads(ok, Assignment{{0, 1}});
  CHECK(loads[0].free_memory == doctest::Approx(0.0));
  CHECK(loads[1].load == 1);
}

TEST_CASE("baseline is reproducible per seed") {
  const ProblemInstance in = generate_reduction_family(9, 4);
  const SolveOutcome a = baseline_random_fcfs(in, 5);
  const SolveOutcome b = baseline_random_fcfs(in, 5);
  CHECK(a.assignment == b.assignment);
  CHECK(a.schedule == b.schedule);
  CHECK(validate(in, a.assignment, a.schedule).empty());
  bool differs = false;
  for (std::uint64_t s = 6; s < 16 && !differs; ++s) {
    differs = !(baseline_random_fcfs(in, s).assignment == a.assignment);
  }
  CHECK(differs);
}
