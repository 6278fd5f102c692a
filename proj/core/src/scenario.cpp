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

#include "pslsched/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "catalog_data.hpp"
#include "pslsched/io.hpp"

namespace pslsched {

namespace {

constexpr std::string_view kHeader =
    "device,model,role,full_batch_sec,memory_gb,status,fwd_share";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (true) {
    const size_t comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double parse_number(std::string_view s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error("catalog line " + std::to_string(line) + ": bad number '" +
                std::string(s) + "'");
  }
  return v;
}

// One deterministic stream per entity. Reals come from the top 53 bits so
// that draws do not depend on the standard library's distributions.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint32_t role, std::uint32_t a,
         std::uint32_t b = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32), role, a, b};
    rng_.seed(seq);
  }

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 rng_;
};

enum StreamRole : std::uint32_t { kClient = 1, kHelper = 2, kEdge = 3 };

// Model copy size in GB, spread evenly over the layers.
double model_gb(NnModel m) { return m == NnModel::resnet101 ? 0.17 : 0.15; }

// Activation (or gradient) size at a cut layer, MB per batch.
double activation_mb(int layer, int L) {
  return 8.0 * std::pow(2.0, -(layer - 1) / (L / 4.0));
}

std::pair<int, int> default_cuts(NnModel m) {
  return m == NnModel::resnet101 ? std::pair{3, 33} : std::pair{3, 23};
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

Range time_range(const DeviceCatalog& cat, NnModel m, DeviceRole role) {
  std::vector<CatalogRow> rows = cat.usable(m, role);
  const auto ref = cat.usable(m, DeviceRole::reference);
  rows.insert(rows.end(), ref.begin(), ref.end());
  if (rows.empty()) throw Error("catalog has no rows for the model");
  Range r{rows.front().full_batch_sec, rows.front().full_batch_sec};
  for (const CatalogRow& row : rows) {
    r.lo = std::min(r.lo, row.full_batch_sec);
    r.hi = std::max(r.hi, row.full_batch_sec);
  }
  return r;
}

struct Device {
  double batch_sec = 0.0;
  double fwd_share = 1.0 / 3.0;
  double memory_gb = 0.0;
};

// Largest demand first onto the helper with the most free memory.
bool packs(std::vector<double> demand, std::vector<double> capacity) {
  std::sort(demand.rbegin(), demand.rend());
  for (double d : demand) {
    auto it = std::max_element(capacity.begin(), capacity.end());
    if (*it + 1e-9 < d) return false;
    *it -= d;
  }
  return true;
}

void check_spec(const ScenarioSpec& s) {
  if (s.scenario != 1 && s.scenario != 2) throw Error("scenario must be 1 or 2");
  if (s.num_clients < 1 || s.num_helpers < 1) {
    throw Error("scenario needs at least one client and one helper");
  }
  if (s.slot_length_ms < 0.0) throw Error("slot length must be positive");
  if (!(s.delay_min_s_per_mb > 0.0) || s.delay_max_s_per_mb < s.delay_min_s_per_mb) {
    throw Error("delay range must satisfy 0 < min <= max");
  }
  const int L = num_layers(s.model);
  if (s.cut_layers.size() > 1 &&
      s.cut_layers.size() != static_cast<size_t>(s.num_clients)) {
    throw Error("cut_layers needs one entry or one per client");
  }
  for (const auto& [a, b] : s.cut_layers) {
    if (a < 1 || a >= b || b > L) {
      throw Error("cut layers must satisfy 1 <= sigma1 < sigma2 <= L");
    }
  }
}

}  // namespace

const char* to_string(NnModel m) {
  return m == NnModel::resnet101 ? "ResNet101" : "VGG19";
}

NnModel parse_nn_model(std::string_view name) {
  if (name == "ResNet101" || name == "resnet101") return NnModel::resnet101;
  if (name == "VGG19" || name == "vgg19") return NnModel::vgg19;
  throw Error("unknown model '" + std::string(name) + "'");
}

int num_layers(NnModel m) { return m == NnModel::resnet101 ? 37 : 25; }

double default_slot_ms(NnModel m) {
  return m == NnModel::resnet101 ? 180.0 : 550.0;
}

std::vector<CatalogRow> DeviceCatalog::usable(NnModel model,
                                              DeviceRole role) const {
  std::vector<CatalogRow> out;
  for (const CatalogRow& r : rows) {
    if (r.model == model && r.role == role && r.enough_memory) out.push_back(r);
  }
  return out;
}

DeviceCatalog parse_catalog(std::string_view csv) {
  DeviceCatalog cat;
  int line_no = 0;
  bool header = false;
  while (!csv.empty()) {
    const size_t nl = csv.find('\n');
    const std::string_view line = trim(csv.substr(0, nl));
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "catalog line " + std::to_string(line_no);
    if (!header) {
      if (line != kHeader) throw Error(where + ": expected header '" + std::string(kHeader) + "'");
      header = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 7) throw Error(where + ": expected 7 fields");
    CatalogRow row;
    row.device = std::string(f[0]);
    if (row.device.empty()) throw Error(where + ": empty device name");
    try {
      row.model = parse_nn_model(f[1]);
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    if (f[2] == "client") {
      row.role = DeviceRole::client;
    } else if (f[2] == "helper") {
      row.role = DeviceRole::helper;
    } else if (f[2] == "reference") {
      row.role = DeviceRole::reference;
    } else {
      throw Error(where + ": unknown role '" + std::string(f[2]) + "'");
    }
    row.full_batch_sec = parse_number(f[3], line_no);
    row.memory_gb = parse_number(f[4], line_no);
    if (f[5] == "ok") {
      row.enough_memory = true;
    } else if (f[5] == "no-memory") {
      row.enough_memory = false;
    } else {
      throw Error(where + ": unknown status '" + std::string(f[5]) + "'");
    }
    row.fwd_share = parse_number(f[6], line_no);
    if (row.enough_memory && !(row.full_batch_sec > 0.0)) {
      throw Error(where + ": batch time must be positive");
    }
    if (!(row.memory_gb > 0.0)) throw Error(where + ": memory must be positive");
    if (!(row.fwd_share > 0.0 && row.fwd_share < 1.0)) {
      throw Error(where + ": fwd_share must be in (0, 1)");
    }
    cat.rows.push_back(std::move(row));
  }
  if (!header) throw Error("catalog is empty");
  return cat;
}

DeviceCatalog load_catalog(const std::string& path) {
  return parse_catalog(read_text_file(path));
}

std::string_view builtin_catalog_csv() { return detail::kCatalogCsv; }

const DeviceCatalog& builtin_catalog() {
  static const DeviceCatalog cat = parse_catalog(builtin_catalog_csv());
  return cat;
}

ProblemInstance generate(const ScenarioSpec& spec, const DeviceCatalog& catalog) {
  check_spec(spec);
  const NnModel m = spec.model;
  const int L = num_layers(m);
  const int J = spec.num_clients;
  const int I = spec.num_helpers;
  const double slot = spec.slot_length_ms > 0.0 ? spec.slot_length_ms
                                                : default_slot_ms(m);
  const auto client_rows = catalog.usable(m, DeviceRole::client);
  const auto helper_rows = catalog.usable(m, DeviceRole::helper);
  if (client_rows.empty() || helper_rows.empty()) {
    throw Error(std::string("catalog lacks client or helper rows for ") + to_string(m));
  }
  const Range client_range = time_range(catalog, m, DeviceRole::client);
  const Range helper_range = time_range(catalog, m, DeviceRole::helper);
  double helper_ram = 0.0;
  for (const CatalogRow& r : helper_rows) helper_ram = std::max(helper_ram, r.memory_gb);

  std::vector<Device> clients(static_cast<size_t>(J));
  std::vector<std::pair<int, int>> cuts(static_cast<size_t>(J));
  for (int j = 0; j < J; ++j) {
    Stream s(spec.seed, kClient, static_cast<std::uint32_t>(j));
    Device& d = clients[static_cast<size_t>(j)];
    if (spec.scenario == 1) {
      const CatalogRow& row = client_rows[static_cast<size_t>(s.integer(0, static_cast<int>(client_rows.size()) - 1))];
      d = {row.full_batch_sec, row.fwd_share, row.memory_gb};
    } else {
      d.batch_sec = s.uniform(client_range.lo, client_range.hi);
      d.fwd_share = client_rows.front().fwd_share;
    }
    auto& cut = cuts[static_cast<size_t>(j)];
    if (spec.cut_layers.size() == 1) {
      cut = spec.cut_layers.front();
    } else if (!spec.cut_layers.empty()) {
      cut = spec.cut_layers[static_cast<size_t>(j)];
    } else if (spec.scenario == 1) {
      cut = default_cuts(m);
    } else {
      const int a = s.integer(1, L / 4);
      cut = {a, s.integer(a + L / 2, L - 1)};
    }
  }

  std::vector<Device> helpers(static_cast<size_t>(I));
  std::vector<Stream> helper_streams;
  for (int i = 0; i < I; ++i) {
    helper_streams.emplace_back(spec.seed, kHelper, static_cast<std::uint32_t>(i));
    Stream& s = helper_streams.back();
    Device& d = helpers[static_cast<size_t>(i)];
    if (spec.scenario == 1) {
      const CatalogRow& row = helper_rows[static_cast<size_t>(s.integer(0, static_cast<int>(helper_rows.size()) - 1))];
      d = {row.full_batch_sec, row.fwd_share, row.memory_gb};
    } else {
      d.batch_sec = s.uniform(helper_range.lo, helper_range.hi);
      d.fwd_share = helper_rows.front().fwd_share;
    }
  }

  std::vector<double> demand(static_cast<size_t>(J));
  for (int j = 0; j < J; ++j) {
    const auto [a, b] = cuts[static_cast<size_t>(j)];
    demand[static_cast<size_t>(j)] = model_gb(m) * (b - a) / L;
  }
  std::vector<double> capacity(static_cast<size_t>(I));
  constexpr int kMemoryAttempts = 1000;
  for (int attempt = 0;; ++attempt) {
    for (int i = 0; i < I; ++i) {
      capacity[static_cast<size_t>(i)] =
          spec.scenario == 1
              ? helpers[static_cast<size_t>(i)].memory_gb
              : helper_ram * helper_streams[static_cast<size_t>(i)].uniform(0.05, 1.0);
    }
    if (packs(demand, capacity)) break;
    if (spec.scenario == 1 || attempt + 1 == kMemoryAttempts) {
      throw Error("helpers cannot hold the clients' model parts");
    }
  }

  std::vector<EdgeTiming> edges;
  const double log_lo = std::log(spec.delay_min_s_per_mb);
  const double log_hi = std::log(spec.delay_max_s_per_mb);
  for (int j = 0; j < J; ++j) {
    const Device& c = clients[static_cast<size_t>(j)];
    const auto [a, b] = cuts[static_cast<size_t>(j)];
    const double c_fwd = c.batch_sec * c.fwd_share / L;  // s per layer
    const double c_bwd = c.batch_sec * (1.0 - c.fwd_share) / L;
    for (int i = 0; i < I; ++i) {
      const Device& h = helpers[static_cast<size_t>(i)];
      Stream s(spec.seed, kEdge, static_cast<std::uint32_t>(j),
               static_cast<std::uint32_t>(i));
      const double omega = std::exp(s.uniform(log_lo, log_hi));
      const double up = activation_mb(a, L) * omega;
      const double down = activation_mb(b, L) * omega;
      const double h_fwd = h.batch_sec * h.fwd_share / L;
      const double h_bwd = h.batch_sec * (1.0 - h.fwd_share) / L;
      EdgeTiming e;
      e.client = j + 1;
      e.helper = i + 1;
      e.r = discretize(1000.0 * (a * c_fwd + up), slot);
      e.p = discretize(1000.0 * (b - a) * h_fwd, slot);
      e.l = discretize(1000.0 * (down + (L - b) * c_fwd), slot);
      e.l_prime = discretize(1000.0 * ((L - b) * c_bwd + down), slot);
      e.p_prime = discretize(1000.0 * (b - a) * h_bwd, slot);
      e.r_prime = discretize(1000.0 * (up + a * c_bwd), slot);
      e.link_delay_per_byte = omega * 1e-6;
      edges.push_back(e);
    }
  }
  std::vector<int> client_ids(static_cast<size_t>(J)), helper_ids(static_cast<size_t>(I));
  for (int j = 0; j < J; ++j) client_ids[static_cast<size_t>(j)] = j + 1;
  for (int i = 0; i < I; ++i) helper_ids[static_cast<size_t>(i)] = i + 1;
  return ProblemInstance(std::move(client_ids), std::move(helper_ids),
                         std::move(edges), std::move(demand),
                         std::move(capacity), slot);
}

ProblemInstance generate_reduction_family(int J, int I) {
  if (J < 1 || I < 1) throw Error("reduction family needs J, I >= 1");
  std::vector<int> client_ids, helper_ids;
  std::vector<EdgeTiming> edges;
  for (int j = 1; j <= J; ++j) client_ids.push_back(j);
  for (int i = 1; i <= I; ++i) helper_ids.push_back(i);
  for (int j = 1; j <= J; ++j) {
    for (int i = 1; i <= I; ++i) {
      EdgeTiming e;
      e.client = j;
      e.helper = i;
      e.r = e.r_prime = e.l = e.l_prime = 0;
      e.p = e.p_prime = 1;
      edges.push_back(e);
    }
  }
  return ProblemInstance(std::move(client_ids), std::move(helper_ids),
                         std::move(edges),
                         std::vector<double>(static_cast<size_t>(J), 1.0),
                         std::vector<double>(static_cast<size_t>(I), static_cast<double>(J)),
                         1.0);
}

double timing_cv(const ProblemInstance& in) {
  // Mean over the six duration fields of each field's CV across edges.
  double total = 0.0;
  int fields = 0;
  for (int f = 0; f < 6; ++f) {
    double sum = 0.0;
    double sq = 0.0;
    for (const EdgeTiming& e : in.edges()) {
      const int v[] = {e.r, e.p, e.l, e.l_prime, e.p_prime, e.r_prime};
      sum += v[f];
      sq += static_cast<double>(v[f]) * v[f];
    }
    const double n = in.num_edges();
    const double mean = sum / n;
    if (mean <= 0.0) continue;
    const double var = std::max(0.0, sq / n - mean * mean);
    total += std::sqrt(var) / mean;
    ++fields;
  }
  return fields == 0 ? 0.0 : total / fields;
}

}  // namespace pslsched
