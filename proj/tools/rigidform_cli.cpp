// Copyright 2026 The rigidform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rigidform command-line front end.
//
//   rigidform run   --scenario FILE --out DIR [overrides]
//   rigidform sweep --scenario FILE --param lambda|mu|k_fb --values a,b,c
//                   --out DIR [overrides]
//   rigidform bench [--scenario FILE] [--iters N] [--warmup N] [--out FILE]
//   rigidform init  [--noise] [--out FILE]

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rigidform/rigidform.hpp"

namespace fs = std::filesystem;
using namespace rigidform;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_final;
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<double> k_fb;
  std::optional<double> noise_sigma;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--dt", dt, "sampling time [s]");
    cmd->add_option("--t-final", t_final, "simulated time [s]");
    cmd->add_option("--lambda", lambda, "consensus gain (all robots)");
    cmd->add_option("--mu", mu, "soft-constraint gain (all robots)");
    cmd->add_option("--k", k_fb, "perturbation-rejection gain (all robots)");
    cmd->add_option("--noise-sigma", noise_sigma,
                    "std dev of initial position noise [m]");
  }

  Scenario apply(Scenario s) const {
    if (seed) s.rng_seed = *seed;
    if (dt) s.dt = *dt;
    if (t_final) s.t_final = *t_final;
    if (lambda) s = with_gain(s, SweepParam::kLambda, *lambda);
    if (mu) s = with_gain(s, SweepParam::kMu, *mu);
    if (k_fb) s = with_gain(s, SweepParam::kFeedback, *k_fb);
    if (noise_sigma) s.init_noise_sigma = *noise_sigma;
    s.validate();
    return s;
  }
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

int cmd_run(const fs::path& scenario_path, const fs::path& out,
            const Overrides& ov, unsigned workers) {
  const Scenario s = ov.apply(parse_scenario(scenario_path));
  ensure_dir(out);
  write_text_file(out / "scenario.json", emit_scenario(s));
  RunOptions opts;
  opts.workers = workers;
  const RunResult r = run(s, opts);
  export_csv(r.log, out / "trajectory.csv");
  const nlohmann::json m = metrics_json(r);
  write_text_file(out / "metrics.json", m.dump(2) + "\n");
  std::cout << m.dump(2) << "\n";
  return r.metrics.hard_violation_count == 0 ? 0 : 3;
}

int cmd_sweep(const fs::path& scenario_path, const fs::path& out,
              const std::string& param_name, const std::vector<double>& values,
              const Overrides& ov, unsigned workers) {
  const SweepParam param = parse_sweep_param(param_name);
  const Scenario s = ov.apply(parse_scenario(scenario_path));
  ensure_dir(out);
  write_text_file(out / "scenario.json", emit_scenario(s));
  RunOptions opts;
  opts.workers = workers;
  const std::vector<SweepRow> rows = sweep(s, param, values, out, opts);
  const std::string table = format_sweep_table(param, rows);
  write_text_file(out / "sweep.csv", table);
  std::cout << table;
  int status = 0;
  for (const SweepRow& r : rows) {
    if (!r.ok) {
      std::cerr << sweep_param_name(param) << "=" << r.value
                << " failed: " << r.error << "\n";
      status = 3;
    }
  }
  return status;
}

int cmd_bench(const std::optional<fs::path>& scenario_path,
              const std::optional<fs::path>& out, std::size_t iters,
              std::size_t warmup) {
  const Scenario s =
      scenario_path ? parse_scenario(*scenario_path) : reference_scenario();
  const BenchReport r = bench(s, warmup, iters);
  std::cout << "run-time per robot tick [s], " << r.iterations
            << " iterations over " << r.samples << " sampled states\n"
            << format_bench_table(r);
  if (out) write_text_file(*out, bench_json(r).dump(2) + "\n");
  return 0;
}

int cmd_init(bool noise, const std::optional<fs::path>& out) {
  Scenario s = reference_scenario();
  if (noise) s.init_noise_sigma = kReferenceNoiseSigma;
  const std::string text = emit_scenario(s);
  if (out) {
    if (out->has_parent_path()) ensure_dir(out->parent_path());
    write_text_file(*out, text);
  } else {
    std::cout << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigidform: decentralized rigid-formation planner and swarm "
               "simulator"};
  app.require_subcommand(1);

  unsigned workers = 1;

  auto* run_cmd = app.add_subcommand("run", "simulate one scenario");
  fs::path run_scenario, run_out;
  Overrides run_ov;
  run_cmd->add_option("--scenario", run_scenario, "scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run_out, "output directory")->required();
  run_cmd->add_option("--workers", workers, "threads for the robot phase");
  run_ov.attach(run_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "run once per gain value");
  fs::path sweep_scenario, sweep_out;
  std::string sweep_param;
  std::vector<double> sweep_values;
  Overrides sweep_ov;
  sweep_cmd->add_option("--scenario", sweep_scenario, "scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--param", sweep_param, "lambda, mu or k_fb")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
  sweep_cmd->add_option("--workers", workers, "threads for the robot phase");
  sweep_ov.attach(sweep_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "time the planner steps");
  std::optional<fs::path> bench_scenario, bench_out;
  std::size_t bench_iters = 100000;
  std::size_t bench_warmup = 10000;
  bench_cmd->add_option("--scenario", bench_scenario,
                        "scenario to sample states from (default: reference "
                        "scenario)");
  bench_cmd->add_option("--iters", bench_iters, "measured calls per step")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--warmup", bench_warmup, "warmup calls per step");
  bench_cmd->add_option("--out", bench_out, "write the report as JSON");

  auto* init_cmd =
      app.add_subcommand("init", "print the reference scenario file");
  bool init_noise = false;
  std::optional<fs::path> init_out;
  init_cmd->add_flag("--noise", init_noise,
                     "include the initial position noise (variance 0.5)");
  init_cmd->add_option("--out", init_out, "write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run_scenario, run_out, run_ov, workers);
    if (*sweep_cmd) {
      return cmd_sweep(sweep_scenario, sweep_out, sweep_param, sweep_values,
                       sweep_ov, workers);
    }
    if (*bench_cmd) {
      return cmd_bench(bench_scenario, bench_out, bench_iters, bench_warmup);
    }
    if (*init_cmd) return cmd_init(init_noise, init_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
