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

#include <cstdio>
#include <iostream>
#include <map>
#include <tuple>

#include "CLI11.hpp"
#include "experiment.hpp"
#include "gantt.hpp"
#include "pslsched/io.hpp"
#include "pslsched/methods.hpp"
#include "pslsched/scenario.hpp"
#include "pslsched/validator.hpp"

using namespace pslsched;

namespace {

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

ProblemInstance load_instance(const std::string& path) {
  return instance_from_json(read_text_file(path));
}

void print_summary(const std::vector<cli::RunRow>& rows) {
  struct Acc {
    int ok = 0, runs = 0;
    double makespan_ms = 0, subopt = 0, speedup = 0;
    int refs = 0;
  };
  using Key = std::tuple<int, std::string, int, int, double, std::string>;
  std::map<Key, Acc> acc;
  for (const cli::RunRow& r : rows) {
    Acc& a = acc[{r.scenario, r.model, r.clients, r.helpers, r.slot_ms, r.method}];
    ++a.runs;
    if (r.status != "ok") continue;
    ++a.ok;
    a.makespan_ms += r.makespan * r.slot_ms;
    if (r.has_reference) {
      ++a.refs;
      a.subopt += r.suboptimality_pct;
      a.speedup += r.speedup;
    }
  }
  std::printf("%-4s %-10s %4s %4s %8s %-16s %6s %14s %16s %12s\n", "scen", "model", "J",
              "I", "slot_ms", "method", "ok", "makespan_ms", "suboptimality%", "speedup(x)");
  for (const auto& [k, a] : acc) {
    const auto& [sc, model, J, I, slot, method] = k;
    std::printf("%-4d %-10s %4d %4d %8.0f %-16s %3d/%-2d %14.1f", sc, model.c_str(), J, I,
                slot, method.c_str(), a.ok, a.runs, a.ok ? a.makespan_ms / a.ok : 0.0);
    if (a.refs) {
      std::printf(" %16.2f %12.3g\n", a.subopt / a.refs, a.speedup / a.refs);
    } else {
      std::printf(" %16s %12s\n", "-", "-");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel split learning workflow scheduler"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a problem instance as JSON");
  ScenarioSpec spec;
  std::string model_name = "ResNet101", catalog, gen_out;
  std::vector<int> cuts;
  bool reduction = false;
  gen->add_option("--scenario", spec.scenario, "1 (low heterogeneity) or 2 (high)")
      ->check(CLI::IsMember({1, 2}));
  gen->add_option("--model", model_name, "ResNet101 or VGG19");
  gen->add_option("-J,--clients", spec.num_clients)->check(CLI::PositiveNumber);
  gen->add_option("-I,--helpers", spec.num_helpers)->check(CLI::PositiveNumber);
  gen->add_option("--seed", spec.seed);
  gen->add_option("--slot-ms", spec.slot_length_ms, "slot length; 0 picks the model default");
  gen->add_option("--cuts", cuts, "cut layers sigma1 sigma2 shared by all clients")
      ->expected(2);
  gen->add_option("--delay-min", spec.delay_min_s_per_mb, "min link delay, s per MB");
  gen->add_option("--delay-max", spec.delay_max_s_per_mb, "max link delay, s per MB");
  gen->add_option("--catalog", catalog, "device catalog CSV (default: built-in)");
  gen->add_flag("--unit-tasks", reduction, "unit-task instance with instantaneous transfers");
  gen->add_option("-o,--output", gen_out, "output file (default: stdout)");

  // solve
  auto* sol = app.add_subcommand("solve", "Solve an instance");
  std::string sol_in, sol_out, sol_svg, method_name;
  MethodOptions opts;
  std::string admm_mode = "inexact";
  double time_limit = -1;
  sol->add_option("instance", sol_in, "instance JSON")->required()->check(CLI::ExistingFile);
  sol->add_option("-m,--method", method_name,
                  "exact, ilp, admm, balanced-greedy, baseline (default: recommended)");
  sol->add_option("--seed", opts.seed, "baseline RNG seed");
  sol->add_option("--time-limit", time_limit, "exact/ilp time limit in seconds");
  sol->add_option("--rho", opts.admm.rho);
  sol->add_option("--tau-max", opts.admm.tau_max);
  sol->add_option("--admm-mode", admm_mode)->check(CLI::IsMember({"exact", "inexact"}));
  sol->add_option("-o,--output", sol_out, "outcome JSON (default: stdout)");
  sol->add_option("--gantt", sol_svg, "also write an SVG Gantt chart");

  // validate
  auto* val = app.add_subcommand("validate", "Check an outcome against an instance");
  std::string val_in, val_outcome;
  val->add_option("instance", val_in)->required()->check(CLI::ExistingFile);
  val->add_option("outcome", val_outcome)->required()->check(CLI::ExistingFile);

  // gantt
  auto* gnt = app.add_subcommand("gantt", "Render an outcome as SVG");
  std::string gnt_in, gnt_outcome, gnt_out;
  cli::GanttStyle style;
  gnt->add_option("instance", gnt_in)->required()->check(CLI::ExistingFile);
  gnt->add_option("outcome", gnt_outcome)->required()->check(CLI::ExistingFile);
  gnt->add_option("-o,--output", gnt_out, "SVG file (default: stdout)");
  gnt->add_option("--slot-px", style.slot_px, "pixels per slot (default: fit)");

  // compare / sweep
  auto* cmp = app.add_subcommand("compare", "Run methods over a config grid and tabulate");
  auto* swp = app.add_subcommand("sweep", "Run a slot-length or helper-count sweep");
  std::string cmp_cfg, swp_cfg, out_dir;
  int jobs = 0;
  for (auto [sub, path] : {std::pair{cmp, &cmp_cfg}, std::pair{swp, &swp_cfg}}) {
    sub->add_option("config", *path, "experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--output-dir", out_dir, "override output_dir");
    sub->add_option("-j,--jobs", jobs, "parallel runs");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      ProblemInstance in = [&] {
        if (reduction) return generate_reduction_family(spec.num_clients, spec.num_helpers);
        spec.model = parse_nn_model(model_name);
        if (!cuts.empty()) spec.cut_layers = {{cuts[0], cuts[1]}};
        if (spec.delay_max_s_per_mb < spec.delay_min_s_per_mb) {
          throw Error("--delay-max is below --delay-min");
        }
        return catalog.empty() ? generate(spec) : generate(spec, load_catalog(catalog));
      }();
      emit(gen_out, instance_to_json(in));
      std::fprintf(stderr, "J=%d I=%d T=%d Tf=%d slot=%g ms timing_cv=%.3f\n",
                   in.num_clients(), in.num_helpers(), in.horizon(), in.fwd_horizon(),
                   in.slot_length_ms(), timing_cv(in));
    } else if (*sol) {
      const ProblemInstance in = load_instance(sol_in);
      const Method rec = recommend_method(in);
      const Method m = method_name.empty() ? rec : parse_method(method_name);
      if (time_limit >= 0) {
        opts.exact.time_limit_sec = time_limit;
        opts.ilp.time_limit_sec = time_limit;
      }
      opts.admm.mode = admm_mode == "exact" ? SubproblemMode::exact : SubproblemMode::inexact;
      opts.admm.limits = subproblem_limits(opts.admm.mode);
      const SolveOutcome o = run_method(m, in, opts);
      emit(sol_out, outcome_to_json(in, o));
      if (!sol_svg.empty()) write_text_file(sol_svg, cli::render_gantt(in, o));
      std::fprintf(stderr,
                   "method=%s makespan=%d slots (%g ms) straggler=client %d wall=%.3fs%s\n"
                   "recommended method: %s\n",
                   to_string(m), o.makespan, o.makespan * in.slot_length_ms(),
                   in.client_ids()[static_cast<size_t>(o.straggler())], o.stats.wall_seconds,
                   o.stats.notes.empty() ? "" : (" (" + o.stats.notes + ")").c_str(),
                   to_string(rec));
    } else if (*val) {
      const ProblemInstance in = load_instance(val_in);
      const SolveOutcome o = outcome_from_json(in, read_text_file(val_outcome));
      const auto found = validate(in, o.assignment, o.schedule);
      std::cout << violations_to_jsonl(in, found);
      if (!found.empty()) {
        std::fprintf(stderr, "%zu violation(s)\n", found.size());
        return 2;
      }
      std::fprintf(stderr, "valid, makespan %d\n", o.makespan);
    } else if (*gnt) {
      const ProblemInstance in = load_instance(gnt_in);
      const SolveOutcome o = outcome_from_json(in, read_text_file(gnt_outcome));
      emit(gnt_out, cli::render_gantt(in, o, style));
    } else {
      const bool sweeping = static_cast<bool>(*swp);
      cli::ExperimentConfig cfg =
          cli::parse_experiment_config(read_text_file(sweeping ? swp_cfg : cmp_cfg));
      if (sweeping && cfg.sweep == cli::SweepParameter::none) {
        throw Error("sweep needs a 'sweep' entry in the config");
      }
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (jobs > 0) cfg.jobs = jobs;
      const auto rows = cli::run_experiment(cfg);
      print_summary(rows);
      std::fprintf(stderr, "%zu runs written to %s/results.csv\n", rows.size(),
                   cfg.output_dir.c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
