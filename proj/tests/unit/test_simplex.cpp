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

#include <cmath>
#include <random>

#include "doctest.h"
#include "pslsched/instance.hpp"
#include "pslsched/simplex.hpp"

using namespace pslsched;

TEST_CASE("two-variable LP with a known vertex") {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, 0 <= x <= 3, y >= 0
  LpProblem lp;
  lp.num_cols = 2;
  lp.cost = {-3, -2};
  lp.lower = {0, 0};
  lp.upper = {3, 1e9};
  lp.rows = {{"a", {{0, 1}, {1, 1}}, Relation::le, 4},
             {"b", {{0, 1}, {1, 3}}, Relation::le, 6}};
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(-11.0));
  CHECK(r.x[0] == doctest::Approx(3.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
}

TEST_CASE("equality and >= rows") {
  // min x + 2y + 3z  s.t. x + y + z = 3, y + z >= 2, all in [0, 2]
  LpProblem lp;
  lp.num_cols = 3;
  lp.cost = {1, 2, 3};
  lp.lower = {0, 0, 0};
  lp.upper = {2, 2, 2};
  lp.rows = {{"s", {{0, 1}, {1, 1}, {2, 1}}, Relation::eq, 3},
             {"t", {{1, 1}, {2, 1}}, Relation::ge, 2}};
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(1 + 4));
}

TEST_CASE("infeasible and unboxed problems") {
  LpProblem lp;
  lp.num_cols = 1;
  lp.cost = {1};
  lp.lower = {0};
  lp.upper = {1};
  lp.rows = {{"r", {{0, 1}}, Relation::ge, 2}};
  CHECK(solve_lp(lp).status == LpStatus::infeasible);

  LpProblem un;
  un.num_cols = 2;
  un.cost = {-1, 0};
  un.lower = {0, 0};
  un.upper = {INFINITY, 1};
  un.rows = {{"r", {{0, 1}, {1, -1}}, Relation::ge, 0}};
  // Columns must be boxed; an open column is rejected up front.
  CHECK_THROWS_AS(solve_lp(un), Error);
}

TEST_CASE("random box LPs agree with vertex enumeration") {
  // Two variables, two random rows: check against every vertex of the
  // feasible polygon found by intersecting constraint lines.
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-3, 5);
  for (int trial = 0; trial < 200; ++trial) {
    LpProblem lp;
    lp.num_cols = 2;
    lp.cost = {static_cast<double>(coef(rng)), static_cast<double>(coef(rng))};
    lp.lower = {0, 0};
    lp.upper = {4, 4};
    struct Line { double a, b, c; };
    std::vector<Line> lines = {{1, 0, 0}, {1, 0, 4}, {0, 1, 0}, {0, 1, 4}};
    for (int k = 0; k < 2; ++k) {
      Line l{static_cast<double>(coef(rng)), static_cast<double>(coef(rng)),
             static_cast<double>(coef(rng) + 4)};
      lp.rows.push_back({"r", {{0, l.a}, {1, l.b}}, Relation::le, l.c});
      lines.push_back(l);
    }
    auto feasible = [&](double x, double y) {
      if (x < -1e-9 || x > 4 + 1e-9 || y < -1e-9 || y > 4 + 1e-9) return false;
      for (size_t k = 4; k < lines.size(); ++k) {
        if (lines[k].a * x + lines[k].b * y > lines[k].c + 1e-9) return false;
      }
      return true;
    };
    double best = INFINITY;
    for (size_t i = 0; i < lines.size(); ++i) {
      for (size_t j = i + 1; j < lines.size(); ++j) {
        const double det = lines[i].a * lines[j].b - lines[j].a * lines[i].b;
        if (std::abs(det) < 1e-12) continue;
        const double x = (lines[i].c * lines[j].b - lines[j].c * lines[i].b) / det;
        const double y = (lines[i].a * lines[j].c - lines[j].a * lines[i].c) / det;
        if (feasible(x, y)) best = std::min(best, lp.cost[0] * x + lp.cost[1] * y);
      }
    }
    const LpResult r = solve_lp(lp);
    CAPTURE(trial);
    if (std::isinf(best)) {
      CHECK(r.status == LpStatus::infeasible);
    } else {
      REQUIRE(r.status == LpStatus::optimal);
      CHECK(r.objective == doctest::Approx(best).epsilon(1e-6));
    }
  }
}
