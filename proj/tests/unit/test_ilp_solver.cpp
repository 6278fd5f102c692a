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
#include "pslsched/ilp_model.hpp"
#include "pslsched/ilp_solver.hpp"
#include "pslsched/instance.hpp"

using namespace pslsched;

namespace {

struct Knapsack {
  std::vector<int> weight, value;
  int capacity;
};

IlpModel knapsack_model(const Knapsack& k) {
  IlpModel m;
  std::vector<IlpTerm> row;
  for (size_t i = 0; i < k.weight.size(); ++i) {
    const int c = m.add_binary("x" + std::to_string(i));
    m.add_objective(c, -k.value[i]);
    row.push_back({c, static_cast<double>(k.weight[i])});
  }
  m.add_constraint("cap", row, Relation::le, k.capacity);
  return m;
}

int knapsack_by_enumeration(const Knapsack& k) {
  const size_t n = k.weight.size();
  int best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    int w = 0, v = 0;
    for (size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        w += k.weight[i];
        v += k.value[i];
      }
    }
    if (w <= k.capacity) best = std::max(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("model bookkeeping") {
  IlpModel m;
  const int a = m.add_binary("a");
  const int b = m.add_integer("b", 0, 5);
  m.add_constraint("r", {{a, 1}, {b, 1}}, Relation::le, 3);
  CHECK(m.column("b") == b);
  CHECK(m.column("zz") == -1);
  CHECK_THROWS_AS(m.add_binary("a"), Error);
  CHECK_THROWS_AS(m.add_constraint("bad", {{9, 1}}, Relation::le, 0), Error);
  const std::vector<double> point = {1, 3};
  CHECK_FALSE(m.violations(point).empty());
  const std::vector<double> good = {1, 2};
  CHECK(m.violations(good).empty());
  m.fix(b, 1);
  CHECK(m.variable(b).lower == 1);
  CHECK(m.variable(b).upper == 1);
  CHECK(m.to_lp_format().find("Subject To") != std::string::npos);
}

TEST_CASE("knapsack optimum matches enumeration under both bound modes") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> w(1, 9), v(1, 12);
  for (int trial = 0; trial < 40; ++trial) {
    Knapsack k;
    const int n = 4 + trial % 7;
    for (int i = 0; i < n; ++i) {
      k.weight.push_back(w(rng));
      k.value.push_back(v(rng));
    }
    k.capacity = 5 + trial % 15;
    const IlpModel m = knapsack_model(k);
    const int expected = knapsack_by_enumeration(k);
    for (BoundMode mode : {BoundMode::lp, BoundMode::combinatorial}) {
      SolverConfig cfg;
      cfg.bound = mode;
      const SolverResult r = solve(m, cfg);
      CAPTURE(trial);
      REQUIRE(r.status == SolveStatus::optimal);
      CHECK(-r.objective == doctest::Approx(expected));
      CHECK(m.violations(r.values).empty());
    }
    SolverConfig rnd;
    rnd.branching = BranchingRule::random;
    rnd.seed = 11;
    CHECK(-solve(m, rnd).objective == doctest::Approx(expected));
  }
}

TEST_CASE("infeasible model and limits") {
  IlpModel m;
  const int a = m.add_binary("a");
  const int b = m.add_binary("b");
  m.add_constraint("r", {{a, 1}, {b, 1}}, Relation::ge, 3);
  CHECK(solve(m).status == SolveStatus::infeasible);

  Knapsack k{{3, 4, 5, 6, 7, 8, 9, 10}, {4, 5, 6, 7, 8, 9, 10, 11}, 20};
  const IlpModel km = knapsack_model(k);
  SolverConfig one;
  one.node_limit = 1;
  one.bound = BoundMode::combinatorial;
  const SolverResult r = solve(km, one);
  CHECK((r.status == SolveStatus::feasible || r.status == SolveStatus::limit ||
         r.status == SolveStatus::optimal));
  CHECK(r.nodes <= 1);
}

TEST_CASE("warm start is kept as the incumbent") {
  Knapsack k{{3, 4, 5}, {4, 5, 6}, 7};
  const IlpModel m = knapsack_model(k);
  SolverConfig cfg;
  cfg.node_limit = 1;
  cfg.warm_start = {1, 1, 0};
  const SolverResult r = solve(m, cfg);
  REQUIRE(r.has_incumbent());
  CHECK(-r.objective >= 9);
  SolverConfig bad;
  bad.warm_start = {1, 1, 1};  // infeasible, ignored
  CHECK(-solve(m, bad).objective == doctest::Approx(knapsack_by_enumeration(k)));
}

TEST_CASE("status names") {
  CHECK(std::string(to_string(SolveStatus::optimal)) == "optimal");
  CHECK(std::string(to_string(SolveStatus::infeasible)) == "infeasible");
}
