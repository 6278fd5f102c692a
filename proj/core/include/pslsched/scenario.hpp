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
#include <string_view>
#include <utility>
#include <vector>

#include "pslsched/instance.hpp"

namespace pslsched {

enum class NnModel { resnet101, vgg19 };

const char* to_string(NnModel model);
/// Accepts "ResNet101"/"resnet101" and "VGG19"/"vgg19".
NnModel parse_nn_model(std::string_view name);
/// Layer count of the model (37 for ResNet101, 25 for VGG19).
int num_layers(NnModel model);
/// Default slot length: 180 ms for ResNet101, 550 ms for VGG19.
double default_slot_ms(NnModel model);

enum class DeviceRole { client, helper, reference };

struct CatalogRow {
  std::string device;
  NnModel model = NnModel::resnet101;
  DeviceRole role = DeviceRole::client;
  double full_batch_sec = 0.0;
  double memory_gb = 0.0;
  bool enough_memory = true;  // status "ok" vs "no-memory"
  double fwd_share = 1.0 / 3.0;
};

/// Header: device,model,role,full_batch_sec,memory_gb,status,fwd_share
struct DeviceCatalog {
  std::vector<CatalogRow> rows;

  /// Rows of a model and role that can run it (no-memory rows dropped).
  std::vector<CatalogRow> usable(NnModel model, DeviceRole role) const;
};

/// Parses catalog CSV text; errors carry the 1-based line number.
DeviceCatalog parse_catalog(std::string_view csv);
DeviceCatalog load_catalog(const std::string& path);
/// Text of the catalog shipped in data/catalog.csv.
std::string_view builtin_catalog_csv();
const DeviceCatalog& builtin_catalog();

struct ScenarioSpec {
  int scenario = 1;  // 1 low heterogeneity, 2 high
  NnModel model = NnModel::resnet101;
  int num_clients = 10;
  int num_helpers = 2;
  double slot_length_ms = 0.0;  // 0 picks default_slot_ms(model)
  /// Per-client (sigma1, sigma2). Empty: the shared default cuts in
  /// scenario 1, random cuts in scenario 2. One entry applies to all.
  std::vector<std::pair<int, int>> cut_layers;
  std::uint64_t seed = 0;
  /// Per-edge transmission delay, log-uniform in [min, max] seconds per MB.
  double delay_min_s_per_mb = 0.05;
  double delay_max_s_per_mb = 0.5;
};

/// Builds an instance on a complete client-helper graph. Each client,
/// helper and edge draws from its own seeded stream, so growing J or I keeps
/// the entities that already existed unchanged.
ProblemInstance generate(const ScenarioSpec& spec,
                         const DeviceCatalog& catalog = builtin_catalog());

/// Unit tasks, zero transfers and ample memory on a complete graph.
ProblemInstance generate_reduction_family(int num_clients, int num_helpers);

/// Mean over the duration fields r, p, l, l', p', r' of each field's
/// coefficient of variation (stddev / mean) across edges.
double timing_cv(const ProblemInstance& instance);

}  // namespace pslsched
