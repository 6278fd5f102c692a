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
#include "pslsched/admm.hpp"
#include "pslsched/heuristics.hpp"
#include "pslsched/scenario.hpp"
#include "pslsched/validator.hpp"

using namespace pslsched;
using testing::make_instance;

TEST_CASE("unit-task family: hand-counted optima") {
  // One helper takes two of the three clients: f, f, b, b -> 4 slots.
  CHECK(brute_force_optimum(generate_reduction_family(3, 2)).makespan == 4);
  for (int n = 1; n <= 2; ++n) {
    CHECK(brute_force_optimum(generate_reduction_family(n, n)).makespan == 2);
  }
  for (int n = 1; n <= 4; ++n) {
    CHECK(brute_force_optimum(generate_reduction_family(n, 1)).makespan == 2 * n);
  }
}

TEST_CASE("single client: the chain length") {
  const ProblemInstance in = make_instance(1, 1, {{1, 1, 2, 3, 1, 2, 2, 4}});
  const BruteForceResult r = brute_force_optimum(in);
  CHECK(r.makespan == 2 + 3 + 1 + 2 + 2 + 4);
  CHECK(validate(in, r.witness.assignment, r.witness.schedule).empty());
}

TEST_CASE("symmetric clients tie on one helper") {
  const ProblemInstance in = make_instance(
      2, 1, {{1, 1, 0, 1, 0, 1, 1, 1}, {2, 1, 0, 1, 0, 1, 1, 1}});
  const BruteForceResult a = brute_force_optimum(in);
  const BruteForceResult b = brute_force_optimum(in);
  CHECK(a.makespan == b.makespan);
  // Best order: f1 f2 b1 b2 with l' = 1 between each f and its b.
  CHECK(a.makespan == 5);
  CHECK(a.witness.schedule == b.witness.schedule);
}

TEST_CASE("oracle caps and infeasibility") {
  CHECK_THROWS_AS(brute_force_optimum(generate_reduction_family(5, 1)), Error);
  CHECK_THROWS_AS(brute_force_optimum(generate_reduction_family(2, 3)), Error);
  // Feasible in total memory, but no helper holds both clients.
  const ProblemInstance in = make_instance(
      2, 2, {{1, 1, 0, 1, 0, 0, 1, 0}, {2, 1, 0, 1, 0, 0, 1, 0}}, {3.0, 3.0}, {4.0, 2.0});
  CHECK_THROWS_AS(brute_force_optimum(in), Error);
}

TEST_CASE("oracle bounds every method on small instances") {
  for (std::uint64_t seed = 1; seed <= 24; ++seed) {
    const ProblemInstance in = testing::random_toy(seed, static_cast<int>(seed));
    CAPTURE(seed);
    const BruteForceResult opt = brute_force_optimum(in);
    CHECK(validate(in, opt.witness.assignment, opt.witness.schedule).empty());
    CHECK(opt.witness.makespan == opt.makespan);
    CHECK(opt.makespan <= balanced_greedy(in).makespan);
    CHECK(opt.makespan <= baseline_random_fcfs(in, seed).makespan);
    CHECK(opt.makespan <= admm_plus_bwd(in).makespan);
  }
}
