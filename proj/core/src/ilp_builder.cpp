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

#include "pslsched/ilp_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

#include "preemptive.hpp"

namespace pslsched {

namespace {

constexpr int kAssignPriority = 1000000;
constexpr int kAuxPriority = -1000000;
constexpr double kInf = std::numeric_limits<double>::infinity();

using detail::kNoFit;
using detail::PreemptiveJob;

// Instance data captured by the bound hooks, so a BuiltModel can outlive the
// instance it was built from.
struct HookData {
  int num_clients = 0;
  int num_helpers = 0;
  std::vector<EdgeTiming> timing;
  std::vector<int> edge_client;
  std::vector<int> edge_helper;
  std::vector<std::vector<int>> edges_of_client;
  std::vector<std::vector<int>> edges_of_helper;
  std::vector<int> mu;
  ModelLayout layout;
  double constant = 0.0;  // correction: value of the lambda terms
  double half_rho = 0.0;
};

std::string pair_tag(const ProblemInstance& in, int e) {
  return std::to_string(in.helper_ids()[static_cast<size_t>(in.edge_helper(e))]) +
         "," +
         std::to_string(in.client_ids()[static_cast<size_t>(in.edge_client(e))]);
}

std::string client_tag(const ProblemInstance& in, int j) {
  return std::to_string(in.client_ids()[static_cast<size_t>(j)]);
}

std::string helper_tag(const ProblemInstance& in, int i) {
  return std::to_string(in.helper_ids()[static_cast<size_t>(i)]);
}

std::vector<std::vector<int>> edges_by_helper(const ProblemInstance& in) {
  std::vector<std::vector<int>> out(static_cast<size_t>(in.num_helpers()));
  for (int e = 0; e < in.num_edges(); ++e) {
    out[static_cast<size_t>(in.edge_helper(e))].push_back(e);
  }
  return out;
}

std::vector<std::vector<int>> edges_by_client(const ProblemInstance& in) {
  std::vector<std::vector<int>> out(static_cast<size_t>(in.num_clients()));
  for (int e = 0; e < in.num_edges(); ++e) {
    out[static_cast<size_t>(in.edge_client(e))].push_back(e);
  }
  return out;
}

ModelLayout make_layout(const ProblemInstance& in, ModelKind kind,
                        int horizon) {
  const size_t E = static_cast<size_t>(in.num_edges());
  const size_t J = static_cast<size_t>(in.num_clients());
  const std::vector<int> none(static_cast<size_t>(horizon), -1);
  ModelLayout L;
  L.kind = kind;
  L.horizon = horizon;
  L.x.assign(E, none);
  L.z.assign(E, none);
  L.y.assign(E, -1);
  L.phi.assign(J, -1);
  L.c.assign(J, -1);
  L.phif.assign(J, -1);
  L.cf.assign(J, -1);
  L.slack_plus.assign(E, -1);
  L.slack_minus.assign(E, -1);
  L.fwd_start.assign(E, none);
  L.bwd_start.assign(E, none);
  L.c_row.assign(J, -1);
  L.cf_row.assign(J, -1);
  return L;
}

std::shared_ptr<HookData> make_hook_data(const ProblemInstance& in,
                                         const ModelLayout& layout) {
  auto d = std::make_shared<HookData>();
  d->num_clients = in.num_clients();
  d->num_helpers = in.num_helpers();
  d->timing = in.edges();
  for (int e = 0; e < in.num_edges(); ++e) {
    d->edge_client.push_back(in.edge_client(e));
    d->edge_helper.push_back(in.edge_helper(e));
  }
  d->edges_of_client = edges_by_client(in);
  d->edges_of_helper = edges_by_helper(in);
  d->mu = in.switching_cost();
  d->layout = layout;
  return d;
}

void add_fwd_columns(BuiltModel& b, const ProblemInstance& in) {
  for (int e = 0; e < in.num_edges(); ++e) {
    const EdgeTiming& t = in.edges()[static_cast<size_t>(e)];
    for (int s = t.r; s < b.layout.horizon; ++s) {
      b.layout.x[static_cast<size_t>(e)][static_cast<size_t>(s)] =
          b.model.add_binary("x(" + pair_tag(in, e) + "," + std::to_string(s) +
                                 ")",
                             slot_priority(s));
    }
  }
}

void add_capacity_rows(BuiltModel& b, const ProblemInstance& in,
                       bool with_bwd) {
  const auto by_helper = edges_by_helper(in);
  for (int i = 0; i < in.num_helpers(); ++i) {
    for (int s = 0; s < b.layout.horizon; ++s) {
      std::vector<IlpTerm> terms;
      for (int e : by_helper[static_cast<size_t>(i)]) {
        const int xc = b.layout.x[static_cast<size_t>(e)][static_cast<size_t>(s)];
        if (xc >= 0) terms.push_back({xc, 1.0});
        if (with_bwd) {
          const int zc =
              b.layout.z[static_cast<size_t>(e)][static_cast<size_t>(s)];
          if (zc >= 0) terms.push_back({zc, 1.0});
        }
      }
      // A single binary term is already bounded by one.
      if (terms.size() < 2) continue;
      b.model.add_constraint(
          "cap(" + helper_tag(in, i) + "," + std::to_string(s) + ")",
          std::move(terms), Relation::le, 1.0);
    }
  }
}

void add_assignment_rows(BuiltModel& b, const ProblemInstance& in) {
  const auto by_client = edges_by_client(in);
  for (int j = 0; j < in.num_clients(); ++j) {
    std::vector<IlpTerm> terms;
    for (int e : by_client[static_cast<size_t>(j)]) {
      terms.push_back({b.layout.y[static_cast<size_t>(e)], 1.0});
    }
    b.model.add_constraint("assign(" + client_tag(in, j) + ")",
                           std::move(terms), Relation::eq, 1.0);
  }
  const auto by_helper = edges_by_helper(in);
  for (int i = 0; i < in.num_helpers(); ++i) {
    std::vector<IlpTerm> terms;
    for (int e : by_helper[static_cast<size_t>(i)]) {
      const double d =
          in.memory_demand()[static_cast<size_t>(in.edge_client(e))];
      if (d != 0.0) terms.push_back({b.layout.y[static_cast<size_t>(e)], d});
    }
    if (terms.empty()) continue;
    b.model.add_constraint("mem(" + helper_tag(in, i) + ")", std::move(terms),
                           Relation::le,
                           in.memory_capacity()[static_cast<size_t>(i)]);
  }
}

void add_y_columns(BuiltModel& b, const ProblemInstance& in) {
  for (int e = 0; e < in.num_edges(); ++e) {
    b.layout.y[static_cast<size_t>(e)] =
        b.model.add_binary("y(" + pair_tag(in, e) + ")", kAssignPriority);
  }
}

// phi^f >= (t+1) x, c^f = phi^f + sum l y (y from columns or parameters),
// xi >= c^f, objective + xi.
void add_fwd_completion(BuiltModel& b, const ProblemInstance& in) {
  ModelLayout& L = b.layout;
  const double H = L.horizon;
  const auto by_client = edges_by_client(in);
  for (int j = 0; j < in.num_clients(); ++j) {
    const size_t js = static_cast<size_t>(j);
    L.phif[js] =
        b.model.add_integer("phif(" + client_tag(in, j) + ")", 0, H, kAuxPriority);
    L.cf[js] =
        b.model.add_integer("cf(" + client_tag(in, j) + ")", 0, H, kAuxPriority);
  }
  L.xi = b.model.add_integer("xi", 0, H, kAuxPriority);
  for (int j = 0; j < in.num_clients(); ++j) {
    const size_t js = static_cast<size_t>(j);
    double fixed_l = 0.0;
    std::vector<IlpTerm> comp{{L.cf[js], 1.0}, {L.phif[js], -1.0}};
    for (int e : by_client[js]) {
      const size_t es = static_cast<size_t>(e);
      const EdgeTiming& t = in.edges()[es];
      for (int s = 0; s < L.horizon; ++s) {
        const int xc = L.x[es][static_cast<size_t>(s)];
        if (xc < 0) continue;
        b.model.add_constraint(
            "phif(" + pair_tag(in, e) + "," + std::to_string(s) + ")",
            {{L.phif[js], 1.0}, {xc, -(s + 1.0)}}, Relation::ge, 0.0);
      }
      if (L.y[es] >= 0) {
        if (t.l != 0) comp.push_back({L.y[es], -static_cast<double>(t.l)});
      } else if (!L.y_param.empty() && L.y_param[es] != 0) {
        fixed_l += t.l;
      }
    }
    L.cf_row[js] = b.model.add_constraint("compf(" + client_tag(in, j) + ")",
                                          std::move(comp), Relation::eq, fixed_l);
    b.model.add_constraint("xi(" + client_tag(in, j) + ")",
                           {{L.xi, 1.0}, {L.cf[js], -1.0}}, Relation::ge, 0.0);
  }
  b.model.add_objective(L.xi, 1.0);
}

// Finish slot (last unit + 1) of `need` units placed on the columns `cols`
// at or after `from`, never earlier than a unit already fixed to one.
int earliest_finish(const std::vector<int>& cols, int from, int need,
                    std::span<const double> lo, std::span<const double> hi) {
  int count = 0;
  int reached = -1;
  int last_fixed = -1;
  for (int t = 0; t < static_cast<int>(cols.size()); ++t) {
    const int c = cols[static_cast<size_t>(t)];
    if (c < 0) continue;
    if (lo[static_cast<size_t>(c)] > 0.5) last_fixed = t;
    if (reached < 0 && t >= from && hi[static_cast<size_t>(c)] > 0.5 &&
        ++count == need) {
      reached = t;
    }
  }
  if (need > 0 && reached < 0) return kNoFit;
  return std::max(reached, last_fixed) + 1;
}

struct UnitCount {
  int fixed = 0;           // units fixed to one
  int first_free = kNoFit;  // first slot whose unit is still open
};

UnitCount count_units(const std::vector<int>& cols, std::span<const double> lo,
                      std::span<const double> hi) {
  UnitCount u;
  for (int t = 0; t < static_cast<int>(cols.size()); ++t) {
    const int c = cols[static_cast<size_t>(t)];
    if (c < 0) continue;
    if (lo[static_cast<size_t>(c)] > 0.5) {
      ++u.fixed;
    } else if (hi[static_cast<size_t>(c)] > 0.5 && u.first_free == kNoFit) {
      u.first_free = t;
    }
  }
  return u;
}

// Slots of a helper still usable by some task: none of its units is fixed to
// one and at least one is open.
std::vector<char> open_slots(const HookData& d, int helper, bool with_bwd,
                             std::span<const double> lo,
                             std::span<const double> hi) {
  const ModelLayout& L = d.layout;
  std::vector<char> avail(static_cast<size_t>(L.horizon), 0);
  for (int s = 0; s < L.horizon; ++s) {
    bool busy = false;
    bool open = false;
    for (int e : d.edges_of_helper[static_cast<size_t>(helper)]) {
      for (int k = 0; k < (with_bwd ? 2 : 1); ++k) {
        const int c = (k == 0 ? L.x : L.z)[static_cast<size_t>(e)]
                                          [static_cast<size_t>(s)];
        if (c < 0) continue;
        if (lo[static_cast<size_t>(c)] > 0.5) busy = true;
        if (hi[static_cast<size_t>(c)] > 0.5) open = true;
      }
    }
    avail[static_cast<size_t>(s)] = (!busy && open) ? 1 : 0;
  }
  return avail;
}

// Lower bound on max c (with_bwd) or max c^f over clients, for models with
// y columns (full, fwd) or a fixed assignment (correction, `forced`).
double schedule_bound(const HookData& d, bool with_bwd,
                      std::span<const double> lo, std::span<const double> hi,
                      const std::vector<int>* forced) {
  const ModelLayout& L = d.layout;
  const size_t E = d.timing.size();
  auto allowed = [&](size_t e) {
    if (forced) return (*forced)[e] != 0;
    return hi[static_cast<size_t>(L.y[e])] > 0.5;
  };
  auto required = [&](size_t e) {
    if (forced) return (*forced)[e] != 0;
    return lo[static_cast<size_t>(L.y[e])] > 0.5;
  };

  double best = -kInf;
  std::vector<int> fwd_done(E, kNoFit);
  for (int j = 0; j < d.num_clients; ++j) {
    int client_best = kNoFit;
    for (int e : d.edges_of_client[static_cast<size_t>(j)]) {
      const size_t es = static_cast<size_t>(e);
      if (!allowed(es)) continue;
      const EdgeTiming& t = d.timing[es];
      const int mu = d.mu[static_cast<size_t>(d.edge_helper[es])];
      const int F = earliest_finish(L.x[es], 0, t.p, lo, hi);
      if (F == kNoFit) continue;
      fwd_done[es] = F;
      int value = F + t.l + mu;
      if (with_bwd) {
        const int phi = earliest_finish(L.z[es], F + t.l + t.l_prime,
                                        t.p_prime, lo, hi);
        if (phi == kNoFit) continue;
        value = phi + t.r_prime + 2 * mu;
      }
      client_best = std::min(client_best, value);
    }
    if (client_best == kNoFit) return kInf;
    best = std::max(best, static_cast<double>(client_best));
  }

  std::vector<PreemptiveJob> jobs;
  for (int i = 0; i < d.num_helpers; ++i) {
    jobs.clear();
    for (int e : d.edges_of_helper[static_cast<size_t>(i)]) {
      const size_t es = static_cast<size_t>(e);
      if (!required(es)) continue;
      if (fwd_done[es] == kNoFit) return kInf;
      const EdgeTiming& t = d.timing[es];
      const UnitCount fx = count_units(L.x[es], lo, hi);
      if (fx.fixed < t.p) {
        if (fx.first_free == kNoFit) return kInf;
        const int tail = with_bwd ? t.l + t.l_prime + t.p_prime + t.r_prime : t.l;
        jobs.push_back({fx.first_free, t.p - fx.fixed, tail});
      }
      if (with_bwd) {
        const UnitCount bz = count_units(L.z[es], lo, hi);
        if (bz.fixed < t.p_prime) {
          if (bz.first_free == kNoFit) return kInf;
          jobs.push_back({std::max(bz.first_free, fwd_done[es] + t.l + t.l_prime),
                          t.p_prime - bz.fixed, t.r_prime});
        }
      }
    }
    if (jobs.empty()) continue;
    const std::vector<char> avail = open_slots(d, i, with_bwd, lo, hi);
    const int v = detail::largest_tail_first(jobs, avail);
    if (v == kNoFit) return kInf;
    best = std::max(best, static_cast<double>(v));
  }
  return best;
}

void install_bound_hook(BuiltModel& b, const ProblemInstance& in,
                        bool with_bwd) {
  auto d = make_hook_data(in, b.layout);
  b.model.lower_bound_hook = [d, with_bwd](std::span<const double> lo,
                                           std::span<const double> hi) {
    const int xi = d->layout.xi;
    double v = schedule_bound(*d, with_bwd, lo, hi, nullptr);
    v = std::max(v, lo[static_cast<size_t>(xi)]);
    if (v > hi[static_cast<size_t>(xi)] + 1e-9) return kInf;
    return v;
  };
}

void add_slack_pair(BuiltModel& b, const ProblemInstance& in, int e,
                    double plus_ub, double minus_ub, double half_rho) {
  const size_t es = static_cast<size_t>(e);
  b.layout.slack_plus[es] = b.model.add_integer("sp(" + pair_tag(in, e) + ")",
                                                0, plus_ub, kAuxPriority);
  b.layout.slack_minus[es] = b.model.add_integer("sm(" + pair_tag(in, e) + ")",
                                                 0, minus_ub, kAuxPriority);
  b.model.add_objective(b.layout.slack_plus[es], half_rho);
  b.model.add_objective(b.layout.slack_minus[es], half_rho);
}

int count_columns(const std::vector<int>& cols) {
  return static_cast<int>(
      std::count_if(cols.begin(), cols.end(), [](int c) { return c >= 0; }));
}

// Shared body of the w-subproblem and the feasibility correction.
BuiltModel build_schedule_model(const ProblemInstance& in, ModelKind kind,
                                std::span<const int> y_fixed,
                                std::span<const double> lambda, double rho) {
  if (!(rho > 0.0)) throw Error("rho must be positive");
  const int E = in.num_edges();
  if (static_cast<int>(y_fixed.size()) != E ||
      static_cast<int>(lambda.size()) != E) {
    throw Error("y and lambda must have one entry per edge");
  }
  BuiltModel b;
  b.layout = make_layout(in, kind, in.fwd_horizon());
  b.layout.y_param.assign(y_fixed.begin(), y_fixed.end());
  for (int& v : b.layout.y_param) {
    if (v != 0 && v != 1) throw Error("y entries must be 0 or 1");
  }
  add_fwd_columns(b, in);
  add_capacity_rows(b, in, false);
  add_fwd_completion(b, in);
  const ModelLayout& L = b.layout;

  // Processing-time tightening, scaled by the lcm of the client's p so that
  // every coefficient stays integral.
  const auto by_client = edges_by_client(in);
  for (int j = 0; j < in.num_clients(); ++j) {
    long long lcm = 1;
    for (int e : by_client[static_cast<size_t>(j)]) {
      lcm = std::lcm(lcm, static_cast<long long>(
                              in.edges()[static_cast<size_t>(e)].p));
    }
    std::vector<IlpTerm> terms;
    for (int e : by_client[static_cast<size_t>(j)]) {
      const double w = static_cast<double>(
          lcm / in.edges()[static_cast<size_t>(e)].p);
      for (int xc : L.x[static_cast<size_t>(e)]) {
        if (xc >= 0) terms.push_back({xc, w});
      }
    }
    b.model.add_constraint("share(" + client_tag(in, j) + ")", std::move(terms),
                           Relation::eq, static_cast<double>(lcm));
  }

  const double half_rho = rho / 2.0;
  double lambda_const = 0.0;
  for (int e = 0; e < E; ++e) {
    const size_t es = static_cast<size_t>(e);
    const EdgeTiming& t = in.edges()[es];
    const double target = static_cast<double>(y_fixed[es]) * t.p;
    std::vector<IlpTerm> sum;
    for (int xc : L.x[es]) {
      if (xc < 0) continue;
      sum.push_back({xc, 1.0});
      if (lambda[es] != 0.0) b.model.add_objective(xc, lambda[es]);
    }
    b.model.add_objective_offset(-lambda[es] * target);
    lambda_const += lambda[es] * target;
    add_slack_pair(b, in, e, count_columns(L.x[es]), target, half_rho);
    std::vector<IlpTerm> resid = sum;
    resid.push_back({L.slack_plus[es], -1.0});
    resid.push_back({L.slack_minus[es], 1.0});
    b.model.add_constraint("resid(" + pair_tag(in, e) + ")", std::move(resid),
                           Relation::eq, target);
    if (kind == ModelKind::correction) {
      b.model.add_constraint("fwdq(" + pair_tag(in, e) + ")", std::move(sum),
                             Relation::eq, target);
    }
  }

  auto d = make_hook_data(in, b.layout);
  d->half_rho = half_rho;
  if (kind == ModelKind::correction) {
    // Under the hard quotas the lambda terms equal their targets exactly.
    d->constant = b.model.objective_offset() + lambda_const;
    b.model.lower_bound_hook = [d](std::span<const double> lo,
                                   std::span<const double> hi) {
      const ModelLayout& L = d->layout;
      double v = schedule_bound(*d, false, lo, hi, &L.y_param);
      v = std::max(v, lo[static_cast<size_t>(L.xi)]);
      if (v > hi[static_cast<size_t>(L.xi)] + 1e-9) return kInf;
      double rest = d->constant;
      for (size_t e = 0; e < L.slack_plus.size(); ++e) {
        rest += d->half_rho * (lo[static_cast<size_t>(L.slack_plus[e])] +
                               lo[static_cast<size_t>(L.slack_minus[e])]);
      }
      return v + rest;
    };
    return b;
  }

  // w-subproblem: objective activity of the non-xi terms plus a bound on max
  // c^f. A client whose units may sit on several helpers finishes no earlier
  // than its first open slot plus min p split evenly over those helpers.
  const std::vector<double> objective = b.model.objective();
  const double offset = b.model.objective_offset();
  b.model.lower_bound_hook = [d, objective, offset](
                                 std::span<const double> lo,
                                 std::span<const double> hi) {
    const ModelLayout& L = d->layout;
    double rest = offset;
    for (size_t k = 0; k < objective.size(); ++k) {
      const double c = objective[k];
      if (static_cast<int>(k) == L.xi || c == 0.0) continue;
      rest += c > 0 ? c * lo[k] : c * hi[k];
    }
    double cf = lo[static_cast<size_t>(L.xi)];
    for (int j = 0; j < d->num_clients; ++j) {
      int open_edges = 0;
      int single = -1;
      int first = kNoFit;
      int min_p = kNoFit;
      int last_fixed = -1;
      int fixed_l = 0;
      for (int e : d->edges_of_client[static_cast<size_t>(j)]) {
        const size_t es = static_cast<size_t>(e);
        if (L.y_param[es]) fixed_l += d->timing[es].l;
        int first_open = kNoFit;
        for (int t = 0; t < L.horizon; ++t) {
          const int c = L.x[es][static_cast<size_t>(t)];
          if (c < 0) continue;
          if (lo[static_cast<size_t>(c)] > 0.5) last_fixed = t;
          if (first_open == kNoFit && hi[static_cast<size_t>(c)] > 0.5) {
            first_open = t;
          }
        }
        if (first_open == kNoFit) continue;
        ++open_edges;
        single = e;
        first = std::min(first, first_open);
        min_p = std::min(min_p, d->timing[es].p);
      }
      if (open_edges == 0) return kInf;
      int finish;
      if (open_edges == 1) {
        const size_t es = static_cast<size_t>(single);
        finish = earliest_finish(L.x[es], 0, d->timing[es].p, lo, hi);
        if (finish == kNoFit) return kInf;
        finish += d->mu[static_cast<size_t>(d->edge_helper[es])];
      } else {
        finish = std::max(first + (min_p + open_edges - 1) / open_edges,
                          last_fixed + 1);
      }
      cf = std::max(cf, static_cast<double>(finish + fixed_l));
    }
    if (cf > hi[static_cast<size_t>(L.xi)] + 1e-9) return kInf;
    return rest + cf;
  };
  return b;
}

int helper_of_edge_vector(const ModelLayout& L, std::span<const double> values,
                          size_t e) {
  if (L.y[e] >= 0) return values[static_cast<size_t>(L.y[e])] > 0.5 ? 1 : 0;
  if (!L.y_param.empty()) return L.y_param[e];
  return 0;
}

}  // namespace

int slot_priority(int slot) { return 100000 - slot; }

BuiltModel build_full(const ProblemInstance& in) {
  BuiltModel b;
  b.layout = make_layout(in, ModelKind::full, in.horizon());
  ModelLayout& L = b.layout;
  const double T = in.horizon();
  add_y_columns(b, in);
  add_fwd_columns(b, in);
  for (int e = 0; e < in.num_edges(); ++e) {
    const EdgeTiming& t = in.edges()[static_cast<size_t>(e)];
    for (int s = t.r + t.p + t.l + t.l_prime; s < L.horizon; ++s) {
      L.z[static_cast<size_t>(e)][static_cast<size_t>(s)] =
          b.model.add_binary("z(" + pair_tag(in, e) + "," + std::to_string(s) +
                                 ")",
                             slot_priority(s));
    }
  }
  for (int j = 0; j < in.num_clients(); ++j) {
    L.phi[static_cast<size_t>(j)] =
        b.model.add_integer("phi(" + client_tag(in, j) + ")", 0, T, kAuxPriority);
    L.c[static_cast<size_t>(j)] =
        b.model.add_integer("c(" + client_tag(in, j) + ")", 0, T, kAuxPriority);
  }
  L.xi = b.model.add_integer("xi", 0, T, kAuxPriority);

  // Precedence: a bwd unit at s needs all p fwd units before s - l - l'.
  for (int e = 0; e < in.num_edges(); ++e) {
    const size_t es = static_cast<size_t>(e);
    const EdgeTiming& t = in.edges()[es];
    for (int s = 0; s < L.horizon; ++s) {
      const int zc = L.z[es][static_cast<size_t>(s)];
      if (zc < 0) continue;
      std::vector<IlpTerm> terms{{zc, static_cast<double>(t.p)}};
      for (int tau = 0; tau < s - t.l - t.l_prime; ++tau) {
        const int xc = L.x[es][static_cast<size_t>(tau)];
        if (xc >= 0) terms.push_back({xc, -1.0});
      }
      b.model.add_constraint(
          "prec(" + pair_tag(in, e) + "," + std::to_string(s) + ")",
          std::move(terms), Relation::le, 0.0);
    }
  }
  add_capacity_rows(b, in, true);
  add_assignment_rows(b, in);
  for (int e = 0; e < in.num_edges(); ++e) {
    const size_t es = static_cast<size_t>(e);
    const EdgeTiming& t = in.edges()[es];
    std::vector<IlpTerm> fq{{L.y[es], -static_cast<double>(t.p)}};
    std::vector<IlpTerm> bq{{L.y[es], -static_cast<double>(t.p_prime)}};
    for (int s = 0; s < L.horizon; ++s) {
      if (L.x[es][static_cast<size_t>(s)] >= 0) {
        fq.push_back({L.x[es][static_cast<size_t>(s)], 1.0});
      }
      if (L.z[es][static_cast<size_t>(s)] >= 0) {
        bq.push_back({L.z[es][static_cast<size_t>(s)], 1.0});
      }
    }
    b.model.add_constraint("fwdq(" + pair_tag(in, e) + ")", std::move(fq),
                           Relation::eq, 0.0);
    b.model.add_constraint("bwdq(" + pair_tag(in, e) + ")", std::move(bq),
                           Relation::eq, 0.0);
  }
  const auto by_client = edges_by_client(in);
  for (int j = 0; j < in.num_clients(); ++j) {
    const size_t js = static_cast<size_t>(j);
    std::vector<IlpTerm> comp{{L.c[js], 1.0}, {L.phi[js], -1.0}};
    for (int e : by_client[js]) {
      const size_t es = static_cast<size_t>(e);
      const EdgeTiming& t = in.edges()[es];
      for (int s = 0; s < L.horizon; ++s) {
        const int zc = L.z[es][static_cast<size_t>(s)];
        if (zc < 0) continue;
        b.model.add_constraint(
            "phi(" + pair_tag(in, e) + "," + std::to_string(s) + ")",
            {{L.phi[js], 1.0}, {zc, -(s + 1.0)}}, Relation::ge, 0.0);
      }
      if (t.r_prime != 0) {
        comp.push_back({L.y[es], -static_cast<double>(t.r_prime)});
      }
    }
    L.c_row[js] = b.model.add_constraint("comp(" + client_tag(in, j) + ")",
                                         std::move(comp), Relation::eq, 0.0);
    b.model.add_constraint("xi(" + client_tag(in, j) + ")",
                           {{L.xi, 1.0}, {L.c[js], -1.0}}, Relation::ge, 0.0);
  }
  b.model.add_objective(L.xi, 1.0);
  install_bound_hook(b, in, true);
  return b;
}

BuiltModel build_fwd(const ProblemInstance& in) {
  BuiltModel b;
  b.layout = make_layout(in, ModelKind::fwd, in.fwd_horizon());
  add_y_columns(b, in);
  add_fwd_columns(b, in);
  add_capacity_rows(b, in, false);
  add_assignment_rows(b, in);
  for (int e = 0; e < in.num_edges(); ++e) {
    const size_t es = static_cast<size_t>(e);
    std::vector<IlpTerm> fq{
        {b.layout.y[es], -static_cast<double>(in.edges()[es].p)}};
    for (int xc : b.layout.x[es]) {
      if (xc >= 0) fq.push_back({xc, 1.0});
    }
    b.model.add_constraint("fwdq(" + pair_tag(in, e) + ")", std::move(fq),
                           Relation::eq, 0.0);
  }
  add_fwd_completion(b, in);
  install_bound_hook(b, in, false);
  return b;
}

BuiltModel build_w_subproblem(const ProblemInstance& in,
                              std::span<const int> y_fixed,
                              std::span<const double> lambda, double rho) {
  return build_schedule_model(in, ModelKind::w_subproblem, y_fixed, lambda,
                              rho);
}

BuiltModel build_y_subproblem(const ProblemInstance& in,
                              std::span<const int> x_sum,
                              std::span<const double> lambda, double rho,
                              double max_cf) {
  if (!(rho > 0.0)) throw Error("rho must be positive");
  const int E = in.num_edges();
  if (static_cast<int>(x_sum.size()) != E ||
      static_cast<int>(lambda.size()) != E) {
    throw Error("x sums and lambda must have one entry per edge");
  }
  BuiltModel b;
  b.layout = make_layout(in, ModelKind::y_subproblem, 0);
  b.layout.x_sum.assign(x_sum.begin(), x_sum.end());
  add_y_columns(b, in);
  add_assignment_rows(b, in);
  double offset = max_cf;
  for (int e = 0; e < E; ++e) {
    const size_t es = static_cast<size_t>(e);
    const int p = in.edges()[es].p;
    const int X = x_sum[es];
    if (X < 0) throw Error("x sums must be nonnegative");
    add_slack_pair(b, in, e, std::max(X, p), std::max(X, p), rho / 2.0);
    // p y + s+ - s- = X, i.e. s+ - s- = X - p y.
    b.model.add_constraint("resid(" + pair_tag(in, e) + ")",
                           {{b.layout.y[es], static_cast<double>(p)},
                            {b.layout.slack_plus[es], 1.0},
                            {b.layout.slack_minus[es], -1.0}},
                           Relation::eq, static_cast<double>(X));
    b.model.add_objective(b.layout.y[es], -lambda[es] * p);
    offset += lambda[es] * X;
  }
  b.model.add_objective_offset(offset);
  return b;
}

BuiltModel build_feasibility_correction(const ProblemInstance& in,
                                        std::span<const int> y_star,
                                        std::span<const double> lambda_star,
                                        double rho) {
  if (static_cast<int>(y_star.size()) != in.num_edges()) {
    throw Error("y must have one entry per edge");
  }
  std::vector<int> count(static_cast<size_t>(in.num_clients()), 0);
  std::vector<double> load(static_cast<size_t>(in.num_helpers()), 0.0);
  for (int e = 0; e < in.num_edges(); ++e) {
    if (!y_star[static_cast<size_t>(e)]) continue;
    ++count[static_cast<size_t>(in.edge_client(e))];
    load[static_cast<size_t>(in.edge_helper(e))] +=
        in.memory_demand()[static_cast<size_t>(in.edge_client(e))];
  }
  for (int c : count) {
    if (c != 1) throw Error("assignment is not total");
  }
  for (int i = 0; i < in.num_helpers(); ++i) {
    if (load[static_cast<size_t>(i)] >
        in.memory_capacity()[static_cast<size_t>(i)] + 1e-9) {
      throw Error("assignment violates helper memory");
    }
  }
  return build_schedule_model(in, ModelKind::correction, y_star, lambda_star,
                              rho);
}

void add_switching_cost(BuiltModel& b, const ProblemInstance& in) {
  if (!in.has_switching_cost()) return;
  ModelLayout& L = b.layout;
  if (L.kind == ModelKind::y_subproblem) return;
  const bool full = L.kind == ModelKind::full;
  int extra = 0;
  auto add_starts = [&](int e, const std::vector<int>& cols,
                        std::vector<int>& starts, const char* prefix, int row,
                        int mu) {
    for (int s = 0; s < L.horizon; ++s) {
      const int xc = cols[static_cast<size_t>(s)];
      if (xc < 0) continue;
      const int u = b.model.add_binary(std::string(prefix) + "(" +
                                           pair_tag(in, e) + "," +
                                           std::to_string(s) + ")",
                                       kAuxPriority);
      starts[static_cast<size_t>(s)] = u;
      std::vector<IlpTerm> terms{{u, 1.0}, {xc, -1.0}};
      if (s > 0 && cols[static_cast<size_t>(s - 1)] >= 0) {
        terms.push_back({cols[static_cast<size_t>(s - 1)], 1.0});
      }
      b.model.add_constraint(std::string(prefix) + "row(" + pair_tag(in, e) +
                                 "," + std::to_string(s) + ")",
                             std::move(terms), Relation::ge, 0.0);
      b.model.add_term(row, u, -static_cast<double>(mu));
    }
  };
  for (int e = 0; e < in.num_edges(); ++e) {
    const size_t es = static_cast<size_t>(e);
    const int mu =
        in.switching_cost()[static_cast<size_t>(in.edge_helper(e))];
    if (mu == 0) continue;
    const EdgeTiming& t = in.edges()[es];
    const size_t js = static_cast<size_t>(in.edge_client(e));
    const int row = full ? L.c_row[js] : L.cf_row[js];
    add_starts(e, L.x[es], L.fwd_start[es], "u", row, mu);
    if (full) add_starts(e, L.z[es], L.bwd_start[es], "v", row, mu);
    extra = std::max(extra, mu * (full ? t.p + t.p_prime : t.p));
  }
  auto widen = [&](int col) {
    if (col < 0) return;
    const IlpVariable& v = b.model.variable(col);
    b.model.set_bounds(col, v.lower, v.upper + extra);
  };
  for (size_t j = 0; j < L.c.size(); ++j) {
    widen(L.c[j]);
    widen(L.cf[j]);
  }
  widen(L.xi);
}

void decode(const ProblemInstance& in, const BuiltModel& built,
            std::span<const double> values, Assignment& assignment,
            Schedule& schedule) {
  const ModelLayout& L = built.layout;
  if (static_cast<int>(values.size()) != built.model.num_variables()) {
    throw Error("value vector does not match the model");
  }
  assignment = Assignment::unassigned(in.num_clients());
  schedule = Schedule{};
  for (int e = 0; e < in.num_edges(); ++e) {
    const size_t es = static_cast<size_t>(e);
    const int j = in.edge_client(e);
    const int i = in.edge_helper(e);
    if (helper_of_edge_vector(L, values, es)) {
      assignment.helper_of[static_cast<size_t>(j)] = i;
    }
    for (int s = 0; s < L.horizon; ++s) {
      const int xc = L.x[es][static_cast<size_t>(s)];
      const int zc = L.z[es][static_cast<size_t>(s)];
      if (xc >= 0 && values[static_cast<size_t>(xc)] > 0.5) {
        schedule.fwd.push_back({i, j, s});
      }
      if (zc >= 0 && values[static_cast<size_t>(zc)] > 0.5) {
        schedule.bwd.push_back({i, j, s});
      }
    }
  }
  schedule.normalize();
}

std::vector<double> encode(const ProblemInstance& in, const BuiltModel& built,
                           const Assignment& assignment,
                           const Schedule& schedule) {
  const ModelLayout& L = built.layout;
  const size_t E = static_cast<size_t>(in.num_edges());
  const size_t J = static_cast<size_t>(in.num_clients());
  std::vector<double> v(static_cast<size_t>(built.model.num_variables()), 0.0);
  auto set = [&](int col, double value) {
    if (col >= 0) v[static_cast<size_t>(col)] = value;
  };

  std::vector<int> y(E, 0);
  if (L.kind == ModelKind::w_subproblem || L.kind == ModelKind::correction) {
    y = L.y_param;
  } else if (assignment.helper_of.size() == J) {
    for (size_t e = 0; e < E; ++e) {
      y[e] = assignment.helper_of[static_cast<size_t>(in.edge_client(
                 static_cast<int>(e)))] == in.edge_helper(static_cast<int>(e));
    }
  }
  for (size_t e = 0; e < E; ++e) set(L.y[e], y[e]);

  std::vector<std::vector<char>> xo(E), zo(E);
  std::vector<int> xs(E, 0), zs(E, 0);
  std::vector<int> phif(J, 0), phi(J, 0);
  auto place = [&](const SlotTriple& tr, bool bwd) {
    const int e = in.edge_index(tr.client, tr.helper);
    if (e < 0 || tr.slot < 0 || tr.slot >= L.horizon) {
      throw Error("schedule triple outside the model");
    }
    const size_t es = static_cast<size_t>(e);
    const int col = (bwd ? L.z : L.x)[es][static_cast<size_t>(tr.slot)];
    if (col < 0) throw Error("schedule uses a column absent from the model");
    auto& occ = bwd ? zo[es] : xo[es];
    if (occ.empty()) occ.assign(static_cast<size_t>(L.horizon), 0);
    occ[static_cast<size_t>(tr.slot)] = 1;
    v[static_cast<size_t>(col)] = 1.0;
    ++(bwd ? zs : xs)[es];
    int& fin = (bwd ? phi : phif)[static_cast<size_t>(tr.client)];
    fin = std::max(fin, tr.slot + 1);
  };
  for (const SlotTriple& tr : schedule.fwd) place(tr, false);
  for (const SlotTriple& tr : schedule.bwd) place(tr, true);

  std::vector<int> fstarts(J, 0), bstarts(J, 0);
  for (size_t e = 0; e < E; ++e) {
    const size_t js = static_cast<size_t>(in.edge_client(static_cast<int>(e)));
    for (int s = 0; s < L.horizon; ++s) {
      const size_t ss = static_cast<size_t>(s);
      if (!xo[e].empty() && xo[e][ss] && (s == 0 || !xo[e][ss - 1])) {
        if (L.fwd_start[e][ss] >= 0) {
          set(L.fwd_start[e][ss], 1.0);
          const int mu = in.switching_cost()[static_cast<size_t>(
              in.edge_helper(static_cast<int>(e)))];
          fstarts[js] += mu;
        }
      }
      if (!zo[e].empty() && zo[e][ss] && (s == 0 || !zo[e][ss - 1])) {
        if (L.bwd_start[e][ss] >= 0) {
          set(L.bwd_start[e][ss], 1.0);
          const int mu = in.switching_cost()[static_cast<size_t>(
              in.edge_helper(static_cast<int>(e)))];
          bstarts[js] += mu;
        }
      }
    }
  }

  double xi = 0.0;
  for (size_t j = 0; j < J; ++j) {
    int l = 0;
    int rp = 0;
    for (size_t e = 0; e < E; ++e) {
      if (static_cast<size_t>(in.edge_client(static_cast<int>(e))) != j ||
          !y[e]) {
        continue;
      }
      l += in.edges()[e].l;
      rp += in.edges()[e].r_prime;
    }
    set(L.phif[j], phif[j]);
    set(L.phi[j], phi[j]);
    const double cf = phif[j] + l + fstarts[j];
    const double c = phi[j] + rp + fstarts[j] + bstarts[j];
    set(L.cf[j], cf);
    set(L.c[j], c);
    if (L.kind == ModelKind::full) {
      xi = std::max(xi, c);
    } else if (L.cf[j] >= 0) {
      xi = std::max(xi, cf);
    }
  }
  set(L.xi, xi);

  for (size_t e = 0; e < E; ++e) {
    if (L.slack_plus[e] < 0) continue;
    const int p = in.edges()[e].p;
    const int resid = L.kind == ModelKind::y_subproblem ? L.x_sum[e] - p * y[e]
                                                        : xs[e] - p * y[e];
    set(L.slack_plus[e], std::max(resid, 0));
    set(L.slack_minus[e], std::max(-resid, 0));
  }
  return v;
}

std::vector<int> assignment_to_edge_vector(const ProblemInstance& in,
                                           const Assignment& assignment) {
  if (static_cast<int>(assignment.helper_of.size()) != in.num_clients()) {
    throw Error("assignment size mismatch");
  }
  std::vector<int> y(static_cast<size_t>(in.num_edges()), 0);
  for (int j = 0; j < in.num_clients(); ++j) {
    const int i = assignment.helper_of[static_cast<size_t>(j)];
    if (i < 0) continue;
    const int e = in.edge_index(j, i);
    if (e < 0) throw Error("assignment uses a non-edge");
    y[static_cast<size_t>(e)] = 1;
  }
  return y;
}

Assignment edge_vector_to_assignment(const ProblemInstance& in,
                                     std::span<const int> y) {
  if (static_cast<int>(y.size()) != in.num_edges()) {
    throw Error("edge vector size mismatch");
  }
  Assignment a = Assignment::unassigned(in.num_clients());
  for (int e = 0; e < in.num_edges(); ++e) {
    if (!y[static_cast<size_t>(e)]) continue;
    int& slot = a.helper_of[static_cast<size_t>(in.edge_client(e))];
    if (slot >= 0) throw Error("client assigned to more than one helper");
    slot = in.edge_helper(e);
  }
  return a;
}

}  // namespace pslsched
