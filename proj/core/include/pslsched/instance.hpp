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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pslsched {

/// Raised for invalid inputs (malformed instances, broken preconditions).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a result produced by this library fails its own checks.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class NodeRole { client, helper };

struct DeviceProfile {
  int id = 0;
  double compute_capacity = 1.0;  // abstract cycles/sec
  double memory_capacity = 1.0;   // GB
  NodeRole role = NodeRole::client;
};

/// Per-edge timing, in slots. `client`/`helper` hold ids, not indices.
struct EdgeTiming {
  int client = 0;
  int helper = 0;
  int r = 0;        // part-1 fwd + activation upload
  int r_prime = 0;  // gradient download + part-1 bwd
  int p = 1;        // helper fwd of part-2
  int p_prime = 1;  // helper bwd of part-2
  int l = 0;        // activation download + part-3 fwd + loss
  int l_prime = 0;  // part-3 bwd + gradient upload
  double link_delay_per_byte = 0.0;  // seconds, before discretization

  int chain_length() const { return r + p + l + l_prime + p_prime + r_prime; }

  friend bool operator==(const EdgeTiming&, const EdgeTiming&) = default;
};

/// Ceil-rounds a raw duration to whole slots; zero only for a zero duration.
int discretize(double raw_ms, double slot_length_ms);

/// T = max_e{r + l + r' + l'} + sum_j max_i{p + p'}.
int compute_horizon(std::span<const EdgeTiming> edges);

/// T_f = max_e{r + l} + sum_j max_i{p}.
int compute_fwd_horizon(std::span<const EdgeTiming> edges);

/// Immutable problem description. Clients and helpers are addressed by dense
/// indices internally (position in `client_ids()` / `helper_ids()`); ids are
/// only used for I/O.
class ProblemInstance {
 public:
  ProblemInstance(std::vector<int> client_ids, std::vector<int> helper_ids,
                  std::vector<EdgeTiming> edges,
                  std::vector<double> memory_demand,
                  std::vector<double> memory_capacity, double slot_length_ms,
                  std::vector<int> switching_cost = {});

  int num_clients() const { return static_cast<int>(client_ids_.size()); }
  int num_helpers() const { return static_cast<int>(helper_ids_.size()); }
  const std::vector<int>& client_ids() const { return client_ids_; }
  const std::vector<int>& helper_ids() const { return helper_ids_; }
  int client_index(int id) const;  // -1 when unknown
  int helper_index(int id) const;  // -1 when unknown

  /// Edges in canonical order (client index, then helper index).
  const std::vector<EdgeTiming>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  /// Edge position in `edges()`, or -1 when (client, helper) is not connected.
  int edge_index(int client, int helper) const {
    return edge_lookup_[static_cast<size_t>(client) * helper_ids_.size() +
                        static_cast<size_t>(helper)];
  }
  bool connected(int client, int helper) const {
    return edge_index(client, helper) >= 0;
  }
  /// Timing of an existing edge; throws Error when not connected.
  const EdgeTiming& timing(int client, int helper) const;
  int edge_client(int e) const { return edge_client_[e]; }
  int edge_helper(int e) const { return edge_helper_[e]; }
  /// Helper indices connected to a client, ascending.
  const std::vector<int>& helpers_of(int client) const {
    return helpers_of_[client];
  }

  const std::vector<double>& memory_demand() const { return memory_demand_; }
  const std::vector<double>& memory_capacity() const {
    return memory_capacity_;
  }
  const std::vector<int>& switching_cost() const { return switching_cost_; }
  bool has_switching_cost() const;
  double slot_length_ms() const { return slot_length_ms_; }
  int horizon() const { return horizon_; }
  int fwd_horizon() const { return fwd_horizon_; }

  /// Sub-instance with a single helper and a subset of clients (indices).
  ProblemInstance restrict_to(int helper, std::span<const int> clients) const;

  friend bool operator==(const ProblemInstance& a, const ProblemInstance& b);

 private:
  std::vector<int> client_ids_;
  std::vector<int> helper_ids_;
  std::vector<EdgeTiming> edges_;
  std::vector<double> memory_demand_;
  std::vector<double> memory_capacity_;
  double slot_length_ms_ = 1.0;
  std::vector<int> switching_cost_;
  int horizon_ = 0;
  int fwd_horizon_ = 0;

  std::vector<int> edge_lookup_;
  std::vector<int> edge_client_;
  std::vector<int> edge_helper_;
  std::vector<std::vector<int>> helpers_of_;
};

/// Client index -> helper index; -1 marks an unassigned client.
struct Assignment {
  std::vector<int> helper_of;

  static Assignment unassigned(int num_clients) {
    return Assignment{std::vector<int>(static_cast<size_t>(num_clients), -1)};
  }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// One processed slot: (helper index, client index, slot).
struct SlotTriple {
  int helper = 0;
  int client = 0;
  int slot = 0;

  friend auto operator<=>(const SlotTriple&, const SlotTriple&) = default;
};

/// x (fwd) and z (bwd) occupancy. Kept sorted by (helper, client, slot) after
/// `normalize()`; validation tolerates arbitrary content.
struct Schedule {
  std::vector<SlotTriple> fwd;
  std::vector<SlotTriple> bwd;

  void normalize();
  bool empty() const { return fwd.empty() && bwd.empty(); }
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct SolveStats {
  std::string solver;
  double wall_seconds = 0.0;
  int iterations = 0;
  bool optimal = false;
  std::optional<double> lower_bound;
  bool converged = true;
  std::string notes;
};

struct SolveOutcome {
  Assignment assignment;
  Schedule schedule;
  std::vector<int> bwd_finish;      // phi_j
  std::vector<int> completion;      // c_j
  std::vector<int> fwd_finish;      // phi^f_j
  std::vector<int> fwd_completion;  // c^f_j
  int makespan = 0;
  SolveStats stats;

  /// Client index with the largest completion (smallest index on ties).
  int straggler() const;
};

/// Number of slots t where the client's task runs at t but not at t-1.
int count_task_starts(std::span<const SlotTriple> triples, int client);

/// Recomputes phi, c, phi^f, c^f and the makespan from a schedule.
/// Throws Error("incomplete schedule") if a client lacks fwd or bwd slots.
SolveOutcome completion_from_schedule(const ProblemInstance& instance,
                                      const Assignment& assignment,
                                      const Schedule& schedule);

/// phi_j minus the client's contention-free chain (excluding r').
int queuing_delay(const ProblemInstance& instance, const SolveOutcome& outcome,
                  int client);

}  // namespace pslsched
