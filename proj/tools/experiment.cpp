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

#include "experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <thread>

#include "gantt.hpp"
#include "json.hpp"
#include "pslsched/io.hpp"
#include "pslsched/validator.hpp"

namespace pslsched::cli {

namespace {

using Json = nlohmann::json;

template <typename T>
T get(const Json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(std::string("config key '") + key + "': " + e.what());
  }
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Job {
  ScenarioSpec spec;
  Method method;
  int instance = 0;  // index into the instance list
};

struct JobResult {
  RunRow row;
  std::string outcome_json;
  std::string svg;
};

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("config must be a JSON object");
  static const std::set<std::string> known = {
      "output_dir", "scenarios", "models", "sizes", "seeds", "slot_lengths_ms",
      "methods", "catalog", "sweep", "exact_max_clients", "exact_time_limit_sec",
      "write_outcomes", "gantt", "jobs", "admm", "thresholds"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw Error("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  if (doc.contains("output_dir")) c.output_dir = get<std::string>(doc, "output_dir");
  if (doc.contains("scenarios")) c.scenarios = get<std::vector<int>>(doc, "scenarios");
  if (doc.contains("models")) {
    c.models.clear();
    for (const std::string& m : get<std::vector<std::string>>(doc, "models")) {
      c.models.push_back(parse_nn_model(m));
    }
  }
  if (doc.contains("sizes")) {
    c.sizes.clear();
    for (const auto& pair : get<std::vector<std::vector<int>>>(doc, "sizes")) {
      if (pair.size() != 2) throw Error("config key 'sizes': entries are [clients, helpers]");
      c.sizes.emplace_back(pair[0], pair[1]);
    }
  }
  if (doc.contains("seeds")) {
    const Json& s = doc.at("seeds");
    c.seeds.clear();
    if (s.is_number_integer()) {
      for (std::uint64_t k = 0; k < s.get<std::uint64_t>(); ++k) c.seeds.push_back(k);
    } else {
      c.seeds = get<std::vector<std::uint64_t>>(doc, "seeds");
    }
  }
  if (doc.contains("slot_lengths_ms")) {
    c.slot_lengths_ms = get<std::vector<double>>(doc, "slot_lengths_ms");
  }
  if (doc.contains("methods")) {
    c.methods.clear();
    for (const std::string& m : get<std::vector<std::string>>(doc, "methods")) {
      c.methods.push_back(parse_method(m));
    }
  }
  if (doc.contains("catalog")) c.catalog_path = get<std::string>(doc, "catalog");
  if (doc.contains("sweep")) {
    const Json& s = doc.at("sweep");
    const std::string p = get<std::string>(s, "parameter");
    if (p == "slot_length_ms") {
      c.sweep = SweepParameter::slot_length;
    } else if (p == "helpers") {
      c.sweep = SweepParameter::helpers;
    } else {
      throw Error("config key 'sweep.parameter': expected slot_length_ms or helpers");
    }
    c.sweep_values = get<std::vector<double>>(s, "values");
    if (c.sweep_values.empty()) throw Error("config key 'sweep.values' is empty");
  }
  if (doc.contains("exact_max_clients")) {
    c.exact_max_clients = get<int>(doc, "exact_max_clients");
  }
  if (doc.contains("exact_time_limit_sec")) {
    c.options.exact.time_limit_sec = get<double>(doc, "exact_time_limit_sec");
  }
  if (doc.contains("write_outcomes")) c.write_outcomes = get<bool>(doc, "write_outcomes");
  if (doc.contains("gantt")) c.write_gantt = get<bool>(doc, "gantt");
  if (doc.contains("jobs")) c.jobs = std::max(1, get<int>(doc, "jobs"));
  if (doc.contains("admm")) {
    const Json& a = doc.at("admm");
    AdmmConfig& cfg = c.options.admm;
    if (a.contains("rho")) cfg.rho = get<double>(a, "rho");
    if (a.contains("eps1")) cfg.eps1 = get<double>(a, "eps1");
    if (a.contains("eps2")) cfg.eps2 = get<double>(a, "eps2");
    if (a.contains("tau_max")) cfg.tau_max = get<int>(a, "tau_max");
    if (a.contains("mode")) {
      const std::string mode = get<std::string>(a, "mode");
      if (mode == "exact") {
        cfg.mode = SubproblemMode::exact;
      } else if (mode == "inexact") {
        cfg.mode = SubproblemMode::inexact;
      } else {
        throw Error("config key 'admm.mode': expected exact or inexact");
      }
      cfg.limits = subproblem_limits(cfg.mode);
    }
    cfg.check();
  }
  if (doc.contains("thresholds")) {
    const Json& t = doc.at("thresholds");
    if (t.contains("large_clients")) c.thresholds.large_clients = get<int>(t, "large_clients");
    if (t.contains("low_heterogeneity_cv")) {
      c.thresholds.low_heterogeneity_cv = get<double>(t, "low_heterogeneity_cv");
    }
  }
  if (c.scenarios.empty() || c.models.empty() || c.sizes.empty() || c.seeds.empty() ||
      c.methods.empty() || c.slot_lengths_ms.empty()) {
    throw Error("config lists must not be empty");
  }
  return c;
}

std::string results_csv_header() {
  return "scenario,model,clients,helpers,slot_ms,seed,method,status,makespan_slots,"
         "makespan_ms,wall_seconds,iterations,converged,optimal,timing_cv,recommended,"
         "suboptimality_pct,speedup,outcome_file\n";
}

std::string results_csv_row(const RunRow& r) {
  const bool ok = r.status == "ok";
  std::string s;
  s += std::to_string(r.scenario) + "," + r.model + "," + std::to_string(r.clients) + "," +
       std::to_string(r.helpers) + "," + number(r.slot_ms) + "," + std::to_string(r.seed) +
       "," + r.method + "," + csv_field(r.status) + ",";
  s += ok ? std::to_string(r.makespan) + "," + number(r.makespan * r.slot_ms) : ",";
  s += "," + number(r.wall_seconds) + "," + std::to_string(r.iterations) + "," +
       (r.converged ? "1" : "0") + "," + (r.optimal ? "1" : "0") + "," +
       number(r.timing_cv) + "," + r.recommended + ",";
  s += ok && r.has_reference ? number(r.suboptimality_pct) + "," + number(r.speedup) : ",";
  s += "," + csv_field(r.outcome_file) + "\n";
  return s;
}

std::vector<RunRow> run_experiment(const ExperimentConfig& c) {
  const DeviceCatalog catalog =
      c.catalog_path.empty() ? builtin_catalog() : load_catalog(c.catalog_path);

  std::vector<ScenarioSpec> specs;
  for (int sc : c.scenarios) {
    for (NnModel m : c.models) {
      for (auto [J, I] : c.sizes) {
        std::vector<int> helper_counts = {I};
        std::vector<double> slots = c.slot_lengths_ms;
        if (c.sweep == SweepParameter::helpers) {
          helper_counts.clear();
          for (double v : c.sweep_values) helper_counts.push_back(static_cast<int>(v));
        } else if (c.sweep == SweepParameter::slot_length) {
          slots = c.sweep_values;
        }
        for (int h : helper_counts) {
          for (double slot : slots) {
            for (std::uint64_t seed : c.seeds) {
              ScenarioSpec s;
              s.scenario = sc;
              s.model = m;
              s.num_clients = J;
              s.num_helpers = h;
              s.slot_length_ms = slot;
              s.seed = seed;
              specs.push_back(s);
            }
          }
        }
      }
    }
  }

  std::vector<ProblemInstance> instances;
  std::vector<Job> jobs;
  for (const ScenarioSpec& s : specs) {
    instances.push_back(generate(s, catalog));
    for (Method m : c.methods) {
      if (m == Method::exact && s.num_clients > c.exact_max_clients) continue;
      jobs.push_back({s, m, static_cast<int>(instances.size()) - 1});
    }
  }

  std::vector<JobResult> results(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < jobs.size(); k = next++) {
      const Job& job = jobs[k];
      const ProblemInstance& in = instances[static_cast<size_t>(job.instance)];
      RunRow& row = results[k].row;
      row.scenario = job.spec.scenario;
      row.model = to_string(job.spec.model);
      row.clients = in.num_clients();
      row.helpers = in.num_helpers();
      row.slot_ms = in.slot_length_ms();
      row.seed = job.spec.seed;
      row.method = to_string(job.method);
      row.timing_cv = timing_cv(in);
      row.recommended = to_string(recommend_method(in, c.thresholds));
      MethodOptions o = c.options;
      o.seed = job.spec.seed;
      try {
        const SolveOutcome out = run_method(job.method, in, o);
        if (!validate(in, out.assignment, out.schedule).empty()) {
          row.status = "invalid";
          continue;
        }
        row.status = "ok";
        row.makespan = out.makespan;
        row.wall_seconds = out.stats.wall_seconds;
        row.iterations = out.stats.iterations;
        row.converged = out.stats.converged;
        row.optimal = out.stats.optimal;
        results[k].outcome_json = outcome_to_json(in, out);
        if (c.write_gantt) results[k].svg = render_gantt(in, out);
      } catch (const Error& e) {
        row.status = std::string("error: ") + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < c.jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  // Exact run per instance, for suboptimality and speedup.
  std::map<int, const RunRow*> reference;
  for (size_t k = 0; k < jobs.size(); ++k) {
    if (jobs[k].method == Method::exact && results[k].row.status == "ok") {
      reference[jobs[k].instance] = &results[k].row;
    }
  }
  namespace fs = std::filesystem;
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  if (c.write_outcomes || c.write_gantt) fs::create_directories(dir / "outcomes");
  std::string csv = results_csv_header();
  std::vector<RunRow> rows;
  for (size_t k = 0; k < jobs.size(); ++k) {
    RunRow row = results[k].row;
    auto ref = reference.find(jobs[k].instance);
    if (ref != reference.end() && row.status == "ok") {
      row.has_reference = true;
      row.suboptimality_pct =
          100.0 * (row.makespan - ref->second->makespan) / ref->second->makespan;
      row.speedup = row.wall_seconds > 0 ? ref->second->wall_seconds / row.wall_seconds : 0.0;
    }
    const std::string stem = "s" + std::to_string(row.scenario) + "_" + row.model + "_J" +
                             std::to_string(row.clients) + "_I" + std::to_string(row.helpers) +
                             "_slot" + number(row.slot_ms) + "_seed" +
                             std::to_string(row.seed) + "_" + row.method;
    if (c.write_outcomes && !results[k].outcome_json.empty()) {
      row.outcome_file = "outcomes/" + stem + ".json";
      write_text_file((dir / row.outcome_file).string(), results[k].outcome_json);
    }
    if (!results[k].svg.empty()) {
      write_text_file((dir / "outcomes" / (stem + ".svg")).string(), results[k].svg);
    }
    csv += results_csv_row(row);
    rows.push_back(std::move(row));
  }
  write_text_file((dir / "results.csv").string(), csv);
  return rows;
}

}  // namespace pslsched::cli
