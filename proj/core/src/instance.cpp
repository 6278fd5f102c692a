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

#include "pslsched/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace pslsched {

int discretize(double raw_ms, double slot_length_ms) {
  if (!(slot_length_ms > 0.0)) throw Error("slot length must be positive");
  if (raw_ms < 0.0 || std::isnan(raw_ms)) {
    throw Error("negative duration cannot be discretized");
  }
  if (raw_ms == 0.0) return 0;
  // The epsilon keeps exact multiples (400 / 200) from rounding up.
  const double slots = std::ceil(raw_ms / slot_length_ms - 1e-9);
  return std::max(1, static_cast<int>(slots));
}

namespace {

int horizon_impl(std::span<const EdgeTiming> edges, bool fwd_only) {
  if (edges.empty()) throw Error("degenerate instance: no edges");
  int worst_transfer = 0;
  std::map<int, int> worst_work;  // client id -> max helper work
  for (const EdgeTiming& e : edges) {
    const int transfer =
        fwd_only ? e.r + e.l : e.r + e.l + e.r_prime + e.l_prime;
    worst_transfer = std::max(worst_transfer, transfer);
    const int work = fwd_only ? e.p : e.p + e.p_prime;
    auto [it, inserted] = worst_work.emplace(e.client, work);
    if (!inserted) it->second = std::max(it->second, work);
  }
  int total = worst_transfer;
  for (const auto& [client, work] : worst_work) total += work;
  return total;
}

}  // namespace

int compute_horizon(std::span<const EdgeTiming> edges) {
  return horizon_impl(edges, false);
}

int compute_fwd_horizon(std::span<const EdgeTiming> edges) {
  return horizon_impl(edges, true);
}

ProblemInstance::ProblemInstance(std::vector<int> client_ids,
                                 std::vector<int> helper_ids,
                                 std::vector<EdgeTiming> edges,
                                 std::vector<double> memory_demand,
                                 std::vector<double> memory_capacity,
                                 double slot_length_ms,
                                 std::vector<int> switching_cost)
    : client_ids_(std::move(client_ids)),
      helper_ids_(std::move(helper_ids)),
      memory_demand_(std::move(memory_demand)),
      memory_capacity_(std::move(memory_capacity)),
      slot_length_ms_(slot_length_ms),
      switching_cost_(std::move(switching_cost)) {
  const size_t J = client_ids_.size();
  const size_t I = helper_ids_.size();
  if (J == 0 || I == 0) throw Error("degenerate instance: no clients or helpers");
  if (std::set<int>(client_ids_.begin(), client_ids_.end()).size() != J) {
    throw Error("duplicate client id");
  }
  if (std::set<int>(helper_ids_.begin(), helper_ids_.end()).size() != I) {
    throw Error("duplicate helper id");
  }
  if (memory_demand_.size() != J) throw Error("memory_demand size mismatch");
  if (memory_capacity_.size() != I) {
    throw Error("memory_capacity size mismatch");
  }
  if (switching_cost_.empty()) switching_cost_.assign(I, 0);
  if (switching_cost_.size() != I) throw Error("switching_cost size mismatch");
  if (!(slot_length_ms_ > 0.0)) throw Error("slot length must be positive");
  for (double d : memory_demand_) {
    if (!(d >= 0.0)) throw Error("memory demand must be nonnegative");
  }
  for (double m : memory_capacity_) {
    if (!(m > 0.0)) throw Error("memory capacity must be positive");
  }
  for (int mu : switching_cost_) {
    if (mu < 0) throw Error("switching cost must be nonnegative");
  }

  edge_lookup_.assign(J * I, -1);
  std::vector<std::pair<std::pair<int, int>, EdgeTiming>> keyed;
  keyed.reserve(edges.size());
  for (const EdgeTiming& e : edges) {
    const int c = client_index(e.client);
    const int h = helper_index(e.helper);
    if (c < 0 || h < 0) throw Error("edge references unknown node");
    if (e.r < 0 || e.r_prime < 0 || e.l < 0 || e.l_prime < 0) {
      throw Error("edge timings must be nonnegative");
    }
    if (e.p < 1 || e.p_prime < 1) {
      throw Error("helper tasks must take at least one slot");
    }
    keyed.push_back({{c, h}, e});
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t k = 1; k < keyed.size(); ++k) {
    if (keyed[k].first == keyed[k - 1].first) throw Error("duplicate edge");
  }
  helpers_of_.assign(J, {});
  for (const auto& [key, e] : keyed) {
    const int pos = static_cast<int>(edges_.size());
    edge_lookup_[static_cast<size_t>(key.first) * I +
                 static_cast<size_t>(key.second)] = pos;
    edges_.push_back(e);
    edge_client_.push_back(key.first);
    edge_helper_.push_back(key.second);
    helpers_of_[static_cast<size_t>(key.first)].push_back(key.second);
  }
  for (size_t c = 0; c < J; ++c) {
    if (helpers_of_[c].empty()) throw Error("client without any helper edge");
  }
  const double total_demand =
      std::accumulate(memory_demand_.begin(), memory_demand_.end(), 0.0);
  const double total_capacity =
      std::accumulate(memory_capacity_.begin(), memory_capacity_.end(), 0.0);
  if (total_demand > total_capacity + 1e-9) {
    throw Error("total memory demand exceeds total helper capacity");
  }
  horizon_ = compute_horizon(edges_);
  fwd_horizon_ = compute_fwd_horizon(edges_);
}

int ProblemInstance::client_index(int id) const {
  auto it = std::find(client_ids_.begin(), client_ids_.end(), id);
  return it == client_ids_.end() ? -1
                                 : static_cast<int>(it - client_ids_.begin());
}

int ProblemInstance::helper_index(int id) const {
  auto it = std::find(helper_ids_.begin(), helper_ids_.end(), id);
  return it == helper_ids_.end() ? -1
                                 : static_cast<int>(it - helper_ids_.begin());
}

const EdgeTiming& ProblemInstance::timing(int client, int helper) const {
  if (client < 0 || client >= num_clients() || helper < 0 ||
      helper >= num_helpers()) {
    throw Error("node index out of range");
  }
  const int e = edge_index(client, helper);
  if (e < 0) throw Error("client and helper are not connected");
  return edges_[static_cast<size_t>(e)];
}

bool ProblemInstance::has_switching_cost() const {
  return std::any_of(switching_cost_.begin(), switching_cost_.end(),
                     [](int mu) { return mu > 0; });
}

ProblemInstance ProblemInstance::restrict_to(
    int helper, std::span<const int> clients) const {
  std::vector<int> cids;
  std::vector<double> demand;
  std::vector<EdgeTiming> sub_edges;
  for (int c : clients) {
    cids.push_back(client_ids_[static_cast<size_t>(c)]);
    demand.push_back(memory_demand_[static_cast<size_t>(c)]);
    sub_edges.push_back(timing(c, helper));
  }
  const size_t h = static_cast<size_t>(helper);
  return ProblemInstance(std::move(cids), {helper_ids_[h]},
                         std::move(sub_edges), std::move(demand),
                         {memory_capacity_[h]}, slot_length_ms_,
                         {switching_cost_[h]});
}

bool operator==(const ProblemInstance& a, const ProblemInstance& b) {
  return a.client_ids_ == b.client_ids_ && a.helper_ids_ == b.helper_ids_ &&
         a.edges_ == b.edges_ && a.memory_demand_ == b.memory_demand_ &&
         a.memory_capacity_ == b.memory_capacity_ &&
         a.slot_length_ms_ == b.slot_length_ms_ &&
         a.switching_cost_ == b.switching_cost_;
}

void Schedule::normalize() {
  std::sort(fwd.begin(), fwd.end());
  std::sort(bwd.begin(), bwd.end());
}

int SolveOutcome::straggler() const {
  if (completion.empty()) return -1;
  return static_cast<int>(
      std::max_element(completion.begin(), completion.end()) -
      completion.begin());
}

int count_task_starts(std::span<const SlotTriple> triples, int client) {
  std::vector<int> slots;
  for (const SlotTriple& t : triples) {
    if (t.client == client) slots.push_back(t.slot);
  }
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  int starts = 0;
  for (size_t k = 0; k < slots.size(); ++k) {
    if (k == 0 || slots[k - 1] != slots[k] - 1) ++starts;
  }
  return starts;
}

SolveOutcome completion_from_schedule(const ProblemInstance& instance,
                                      const Assignment& assignment,
                                      const Schedule& schedule) {
  const int J = instance.num_clients();
  if (static_cast<int>(assignment.helper_of.size()) != J) {
    throw Error("assignment size mismatch");
  }
  SolveOutcome out;
  out.assignment = assignment;
  out.schedule = schedule;
  out.schedule.normalize();
  out.bwd_finish.assign(static_cast<size_t>(J), -1);
  out.fwd_finish.assign(static_cast<size_t>(J), -1);
  out.completion.assign(static_cast<size_t>(J), 0);
  out.fwd_completion.assign(static_cast<size_t>(J), 0);
  for (const SlotTriple& t : out.schedule.fwd) {
    if (t.client < 0 || t.client >= J) throw Error("client index out of range");
    int& f = out.fwd_finish[static_cast<size_t>(t.client)];
    f = std::max(f, t.slot + 1);
  }
  for (const SlotTriple& t : out.schedule.bwd) {
    if (t.client < 0 || t.client >= J) throw Error("client index out of range");
    int& f = out.bwd_finish[static_cast<size_t>(t.client)];
    f = std::max(f, t.slot + 1);
  }
  std::vector<std::vector<SlotTriple>> fwd_by_client(static_cast<size_t>(J));
  std::vector<std::vector<SlotTriple>> bwd_by_client(static_cast<size_t>(J));
  for (const SlotTriple& t : out.schedule.fwd) {
    fwd_by_client[static_cast<size_t>(t.client)].push_back(t);
  }
  for (const SlotTriple& t : out.schedule.bwd) {
    bwd_by_client[static_cast<size_t>(t.client)].push_back(t);
  }
  out.makespan = 0;
  for (int j = 0; j < J; ++j) {
    const size_t js = static_cast<size_t>(j);
    const int h = assignment.helper_of[js];
    if (h < 0) throw Error("incomplete schedule: unassigned client");
    if (out.fwd_finish[js] < 0 || out.bwd_finish[js] < 0) {
      throw Error("incomplete schedule: client without fwd or bwd slots");
    }
    const EdgeTiming& e = instance.timing(j, h);
    const int mu = instance.switching_cost()[static_cast<size_t>(h)];
    const int fwd_starts = mu > 0 ? count_task_starts(fwd_by_client[js], j) : 0;
    const int bwd_starts = mu > 0 ? count_task_starts(bwd_by_client[js], j) : 0;
    out.fwd_completion[js] = out.fwd_finish[js] + e.l + mu * fwd_starts;
    out.completion[js] =
        out.bwd_finish[js] + e.r_prime + mu * (fwd_starts + bwd_starts);
    out.makespan = std::max(out.makespan, out.completion[js]);
  }
  return out;
}

int queuing_delay(const ProblemInstance& instance, const SolveOutcome& outcome,
                  int client) {
  const size_t c = static_cast<size_t>(client);
  const EdgeTiming& e =
      instance.timing(client, outcome.assignment.helper_of[c]);
  return outcome.bwd_finish[c] - (e.r + e.p + e.l + e.l_prime + e.p_prime);
}

}  // namespace pslsched
