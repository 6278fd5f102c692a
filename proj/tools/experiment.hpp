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
#include <string>
#include <vector>

#include "pslsched/methods.hpp"
#include "pslsched/scenario.hpp"

namespace pslsched::cli {

enum class SweepParameter { none, slot_length, helpers };

struct ExperimentConfig {
  std::string output_dir = "results";
  std::vector<int> scenarios = {1};
  std::vector<NnModel> models = {NnModel::resnet101};
  std::vector<std::pair<int, int>> sizes = {{10, 2}};  // (J, I)
  std::vector<std::uint64_t> seeds = {0};
  std::vector<double> slot_lengths_ms = {0.0};  // 0: model default
  std::vector<Method> methods = {Method::exact, Method::admm,
                                 Method::balanced_greedy, Method::baseline};
  std::string catalog_path;  // empty: built-in
  SweepParameter sweep = SweepParameter::none;
  std::vector<double> sweep_values;
  /// exact runs only up to this many clients; larger instances skip it.
  int exact_max_clients = 15;
  bool write_outcomes = true;
  bool write_gantt = false;
  int jobs = 1;
  MethodOptions options;
  StrategyThresholds thresholds;
};

/// Parses the JSON config; throws Error with the offending key.
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct RunRow {
  int scenario = 0;
  std::string model;
  int clients = 0;
  int helpers = 0;
  double slot_ms = 0.0;
  std::uint64_t seed = 0;
  std::string method;
  std::string status;  // "ok" or the error text
  int makespan = 0;
  double wall_seconds = 0.0;
  int iterations = 0;
  bool converged = true;
  bool optimal = false;
  double timing_cv = 0.0;
  std::string recommended;
  std::string outcome_file;
  // Filled against the exact run of the same instance, when there is one.
  bool has_reference = false;
  double suboptimality_pct = 0.0;
  double speedup = 0.0;
};

std::string results_csv_header();
std::string results_csv_row(const RunRow& row);

/// Runs every (scenario, model, size, slot, seed, method) combination and
/// writes results.csv plus per-run outcome JSON / SVG under output_dir.
std::vector<RunRow> run_experiment(const ExperimentConfig& config);

}  // namespace pslsched::cli
