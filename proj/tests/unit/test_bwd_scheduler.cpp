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

#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "pslsched/bwd_scheduler.hpp"
#include "pslsched/validator.hpp"

using namespace pslsched;

TEST_CASE("worked block example") {
  const testing::BlockExample ex = testing::block_example();
  const HelperBwdSchedule s = schedule_bwd_on_helper(ex.tasks, ex.eligible);
  REQUIRE(s.blocks.size() == 5);
  auto labels = [&](const Block& b) {
    std::vector<int> out;
    for (int k : b.members) out.push_back(ex.tasks[static_cast<size_t>(k)].label);
    return out;
  };
  auto chosen = [&](const Block& b) {
    return ex.tasks[static_cast<size_t>(b.chosen)].label;
  };
  // Top level: {1,4,2,3} then {5}.
  CHECK(labels(s.blocks[0]) == std::vector<int>{1, 4, 2, 3});
  CHECK(s.blocks[0].start == 0);
  CHECK(s.blocks[0].end == 8);
  CHECK(chosen(s.blocks[0]) == 4);
  CHECK(s.blocks[0].depth == 0);
  CHECK(labels(s.blocks[1]) == std::vector<int>{1});
  CHECK(labels(s.blocks[2]) == std::vector<int>{2, 3});
  CHECK(s.blocks[2].end == 7);
  CHECK(chosen(s.blocks[2]) == 2);
  CHECK(labels(s.blocks[3]) == std::vector<int>{3});
  CHECK(labels(s.blocks[4]) == std::vector<int>{5});
  CHECK(s.blocks[4].start == 9);
  CHECK(s.blocks[4].end == 10);
  CHECK(s.blocks[4].depth == 0);

  CHECK(s.finish == std::vector<int>{1, 7, 6, 8, 10});
  CHECK(s.max_cost == 14);
  CHECK(testing::BwdOracle(ex.tasks, ex.eligible).solve() == 14);
}

TEST_CASE("single task runs contiguously from its release") {
  const std::vector<BwdTask> one = {{7, 3, 4, 1}};
  std::vector<int> eligible;
  for (int t = 0; t < 10; ++t) eligible.push_back(t);
  const HelperBwdSchedule s = schedule_bwd_on_helper(one, eligible);
  CHECK(s.slots[0] == std::vector<int>{3, 4, 5, 6});
  CHECK(s.finish[0] == 7);
  CHECK(s.max_cost == 8);
}

TEST_CASE("block algorithm is optimal on random helpers") {
  std::mt19937 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<BwdTask> tasks;
    for (int k = 0; k < n; ++k) {
      tasks.push_back({k + 1, static_cast<int>(rng() % 9),
                       1 + static_cast<int>(rng() % 3), static_cast<int>(rng() % 7)});
    }
    std::vector<int> eligible;
    for (int t = 0; t < 32; ++t) {
      if (rng() % 3 != 0) eligible.push_back(t);
    }
    const int oracle = testing::BwdOracle(tasks, eligible).solve();
    CAPTURE(trial);
    if (oracle == INT_MAX) {
      CHECK_THROWS_AS(schedule_bwd_on_helper(tasks, eligible), Error);
      continue;
    }
    const HelperBwdSchedule s = schedule_bwd_on_helper(tasks, eligible);
    CHECK(s.max_cost == oracle);
    for (size_t k = 0; k < tasks.size(); ++k) {
      CHECK(static_cast<int>(s.slots[k].size()) == tasks[k].processing);
      for (int slot : s.slots[k]) {
        CHECK(slot >= tasks[k].release);
        CHECK(std::binary_search(eligible.begin(), eligible.end(), slot));
      }
    }
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("eligible slots skip the helper's fwd units") {
  const std::vector<SlotTriple> fwd = {{0, 0, 1}, {0, 1, 2}, {1, 2, 0}};
  CHECK(eligible_slots(0, fwd, 5) == std::vector<int>{0, 3, 4});
  CHECK(eligible_slots(1, fwd, 3) == std::vector<int>{1, 2});
  EdgeTiming e;
  e.l = 2;
  e.l_prime = 3;
  CHECK(bwd_release(e, 4) == 9);
}

TEST_CASE("too few slots is reported") {
  const std::vector<BwdTask> tasks = {{1, 0, 3, 0}};
  const std::vector<int> eligible = {0, 1};
  CHECK_THROWS_AS(schedule_bwd_on_helper(tasks, eligible), Error);
}

TEST_CASE("bwd plan on optimal fwd slots recovers the optimum") {
  for (std::uint64_t seed = 400; seed < 420; ++seed) {
    const ProblemInstance in = testing::random_toy(seed, static_cast<int>(seed));
    const BruteForceResult opt = brute_force_optimum(in);
    const auto& a = opt.witness.assignment;
    const auto& fwd = opt.witness.schedule.fwd;
    const std::vector<SlotTriple> bwd = schedule_bwd(in, a, fwd);
    const SolveOutcome o = assemble_outcome(in, a, fwd, bwd);
    CAPTURE(seed);
    CHECK(o.makespan == opt.makespan);
  }
}
