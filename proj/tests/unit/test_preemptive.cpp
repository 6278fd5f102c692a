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
#include "preemptive.hpp"

using namespace pslsched;
using detail::PreemptiveJob;

TEST_CASE("largest tail first matches the slot oracle") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    std::vector<PreemptiveJob> jobs;
    std::vector<BwdTask> tasks;
    for (int k = 0; k < n; ++k) {
      PreemptiveJob j{static_cast<int>(rng() % 7), 1 + static_cast<int>(rng() % 3),
                      static_cast<int>(rng() % 6)};
      jobs.push_back(j);
      tasks.push_back({k + 1, j.release, j.work, j.tail});
    }
    std::vector<char> available(24);
    std::vector<int> eligible;
    for (int t = 0; t < 24; ++t) {
      available[static_cast<size_t>(t)] = rng() % 4 != 0;
      if (available[static_cast<size_t>(t)]) eligible.push_back(t);
    }
    std::vector<std::vector<int>> slots;
    const int got = detail::largest_tail_first(jobs, available, &slots);
    const int oracle = testing::BwdOracle(tasks, eligible).solve();
    CAPTURE(trial);
    if (oracle == INT_MAX) {
      CHECK(got == detail::kNoFit);
      continue;
    }
    CHECK(got == oracle);
    for (int k = 0; k < n; ++k) {
      CHECK(static_cast<int>(slots[static_cast<size_t>(k)].size()) ==
            jobs[static_cast<size_t>(k)].work);
      for (int s : slots[static_cast<size_t>(k)]) {
        CHECK(available[static_cast<size_t>(s)]);
        CHECK(s >= jobs[static_cast<size_t>(k)].release);
      }
    }
    // With every slot open the event-driven variant agrees.
    std::vector<char> open(64, 1);
    CHECK(detail::largest_tail_first_from(jobs, 0) ==
          detail::largest_tail_first(jobs, open));
  }
}

TEST_CASE("no jobs and a late start") {
  const std::vector<PreemptiveJob> none;
  const std::vector<char> open(4, 1);
  CHECK(detail::largest_tail_first(none, open) == INT_MIN);
  const std::vector<PreemptiveJob> one = {{0, 2, 3}};
  CHECK(detail::largest_tail_first_from(one, 5) == 5 + 2 + 3);
}
