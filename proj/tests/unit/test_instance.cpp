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
#include "pslsched/instance.hpp"
#include "pslsched/io.hpp"

using namespace pslsched;
using pslsched::testing::make_instance;

TEST_CASE("discretize rounds up to whole slots") {
  CHECK(discretize(400, 200) == 2);
  CHECK(discretize(400, 150) == 3);
  CHECK(discretize(400, 50) == 8);
  CHECK(discretize(0, 50) == 0);
  CHECK(discretize(0.001, 50) == 1);
  CHECK(discretize(200.0000001, 200) == 1);
  CHECK_THROWS_AS(discretize(-1, 50), Error);
  CHECK_THROWS_AS(discretize(10, 0), Error);
}

TEST_CASE("horizons follow the chain and work sums") {
  const ProblemInstance in = make_instance(
      2, 2,
      {{1, 1, 1, 2, 1, 1, 2, 1}, {1, 2, 2, 1, 0, 0, 3, 0}, {2, 1, 0, 1, 0, 1, 1, 2}});
  // transfers: 4, 2, 3; per-client max work 4 and 2; fwd: max r+l = 2, max p 2, 1
  CHECK(in.horizon() == 4 + 4 + 2);
  CHECK(in.fwd_horizon() == 2 + 2 + 1);
  CHECK(in.num_edges() == 3);
  CHECK(in.connected(1, 0));
  CHECK_FALSE(in.connected(1, 1));
  CHECK(in.helpers_of(0) == std::vector<int>{0, 1});
  CHECK_THROWS_AS(in.timing(1, 1), Error);
}

TEST_CASE("construction rejects broken instances") {
  using testing::EdgeSpec;
  const std::vector<EdgeSpec> ok = {{1, 1, 0, 1, 0, 0, 1, 0}};
  CHECK_NOTHROW(make_instance(1, 1, ok));
  CHECK_THROWS_AS(make_instance(1, 1, {{1, 1, 0, 0, 0, 0, 1, 0}}), Error);  // p = 0
  CHECK_THROWS_AS(make_instance(1, 1, {{1, 1, -1, 1, 0, 0, 1, 0}}), Error);
  CHECK_THROWS_AS(make_instance(2, 1, ok), Error);  // client 2 has no edge
  CHECK_THROWS_AS(make_instance(1, 1, {ok[0], ok[0]}), Error);
  CHECK_THROWS_AS(make_instance(1, 1, {{1, 3, 0, 1, 0, 0, 1, 0}}), Error);
  // Total demand above total capacity.
  CHECK_THROWS_AS(make_instance(1, 1, ok, {3.0}, {2.0}), Error);
  CHECK_THROWS_AS(make_instance(1, 1, ok, {1.0}, {1.0}, {-1}), Error);
}

TEST_CASE("instance JSON round trip") {
  const ProblemInstance in = make_instance(
      2, 2,
      {{1, 1, 1, 2, 1, 1, 2, 1}, {1, 2, 2, 1, 0, 0, 3, 0}, {2, 1, 0, 1, 0, 1, 1, 2}},
      {0.5, 0.25}, {1.0, 2.0}, {0, 2});
  const std::string text = instance_to_json(in);
  const ProblemInstance back = instance_from_json(text);
  CHECK(back == in);
  CHECK(instance_to_json(back) == text);
  CHECK_THROWS_AS(instance_from_json("{"), Error);
  CHECK_THROWS_AS(instance_from_json("{}"), Error);
}

TEST_CASE("restrict_to keeps one helper and the chosen clients") {
  const ProblemInstance in = make_instance(
      3, 2,
      {{1, 1, 1, 2, 1, 1, 2, 1}, {2, 1, 0, 1, 0, 1, 1, 2}, {2, 2, 0, 3, 0, 1, 1, 2},
       {3, 1, 2, 2, 2, 2, 2, 2}});
  const std::vector<int> clients = {0, 2};
  const ProblemInstance sub = in.restrict_to(0, clients);
  CHECK(sub.num_helpers() == 1);
  CHECK(sub.client_ids() == std::vector<int>{1, 3});
  CHECK(sub.timing(1, 0) == in.timing(2, 0));
}

TEST_CASE("completion times from a schedule") {
  // One client: r=1 p=2 l=1 l'=1 p'=2 r'=1 on one helper.
  const ProblemInstance in = make_instance(1, 1, {{1, 1, 1, 2, 1, 1, 2, 1}});
  const Assignment a{{0}};
  const Schedule s{{{0, 0, 1}, {0, 0, 2}}, {{0, 0, 5}, {0, 0, 6}}};
  const SolveOutcome o = completion_from_schedule(in, a, s);
  CHECK(o.fwd_finish[0] == 3);
  CHECK(o.fwd_completion[0] == 4);
  CHECK(o.bwd_finish[0] == 7);
  CHECK(o.completion[0] == 8);
  CHECK(o.makespan == 8);
  CHECK(o.straggler() == 0);
  CHECK(queuing_delay(in, o, 0) == 0);
  CHECK_THROWS_AS(completion_from_schedule(in, a, Schedule{s.fwd, {}}), Error);
}

TEST_CASE("switching cost counts task starts") {
  const std::vector<SlotTriple> contiguous = {{0, 0, 2}, {0, 0, 3}, {0, 0, 4}};
  const std::vector<SlotTriple> split = {{0, 0, 2}, {0, 0, 4}, {0, 1, 3}};
  CHECK(count_task_starts(contiguous, 0) == 1);
  CHECK(count_task_starts(split, 0) == 2);
  CHECK(count_task_starts(split, 1) == 1);
  CHECK(count_task_starts(split, 7) == 0);

  const ProblemInstance in = make_instance(1, 1, {{1, 1, 0, 2, 0, 0, 1, 0}}, {1.0},
                                           {1.0}, {1});
  const SolveOutcome o = completion_from_schedule(
      in, Assignment{{0}}, Schedule{{{0, 0, 0}, {0, 0, 2}}, {{0, 0, 3}}});
  CHECK(o.fwd_completion[0] == 3 + 2);
  CHECK(o.completion[0] == 4 + 3);
}
