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

// Per-step run-time measurement of the planner on states sampled from a
// simulated run. Each step is timed call by call with a monotonic clock
// after a warmup phase; the report lists min, median, mean, max and
// variance in seconds for the five steps and the complete tick.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "rigidform/planner.hpp"
#include "rigidform/simulator.hpp"

namespace rigidform {

struct BenchSample {
  PlannerState state;
  Vec2 v_des = Vec2::Zero();
  std::vector<FormationParams> inbox;
  Vec2 position = Vec2::Zero();
  double dt = 1e-3;
};

/// Every stride-th plan_tick input of a full run, about max_samples in all.
inline std::vector<BenchSample> collect_bench_samples(
    const Scenario& scenario, std::size_t max_samples = 4096) {
  const std::size_t total = scenario.tick_count() * scenario.robot_count();
  const std::size_t stride = std::max<std::size_t>(1, total / max_samples);
  std::vector<BenchSample> samples;
  std::size_t seen = 0;
  RunOptions opts;
  opts.on_plan = [&](const PlanInput& in) {
    if (seen++ % stride == 0 && samples.size() < max_samples) {
      samples.push_back({in.state, in.v_des,
                         {in.inbox.begin(), in.inbox.end()}, in.position,
                         in.dt});
    }
  };
  run(scenario, opts);
  return samples;
}

struct StepStats {
  std::string name;
  double min = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double max = 0.0;
  double variance = 0.0;
  double checksum = 0.0;  // sum of step outputs, independent of timing
};

struct BenchReport {
  std::vector<StepStats> steps;
  std::size_t iterations = 0;
  std::size_t samples = 0;

  const StepStats& step(const std::string& name) const {
    for (const StepStats& s : steps) {
      if (s.name == name) return s;
    }
    throw ValidationError("bench report has no step '" + name + "'");
  }
};

inline StepStats summarize(std::string name, std::vector<double> seconds,
                           double checksum) {
  StepStats st;
  st.name = std::move(name);
  st.checksum = checksum;
  if (seconds.empty()) return st;
  std::sort(seconds.begin(), seconds.end());
  const std::size_t n = seconds.size();
  st.min = seconds.front();
  st.max = seconds.back();
  st.median = n % 2 == 1 ? seconds[n / 2]
                         : 0.5 * (seconds[n / 2 - 1] + seconds[n / 2]);
  double sum = 0.0;
  for (double x : seconds) sum += x;
  st.mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (double x : seconds) sq += (x - st.mean) * (x - st.mean);
  st.variance = sq / static_cast<double>(n);
  // Summation order can push the mean an ulp outside [min, max].
  st.mean = std::clamp(st.mean, st.min, st.max);
  return st;
}

namespace bench_detail {

inline double fold(const ParamDerivative& d) { return d.vector().sum(); }
inline double fold(const Vec2& v) { return v.sum(); }
inline double fold(const ConstrainedDerivative& c) {
  return fold(c.d_eta) + c.a_s;
}
inline double fold(const TickResult& r) {
  return r.v_cmd.sum() + r.new_eta.vector().sum() + r.a_s;
}

template <typename F>
StepStats time_step(const std::string& name,
                    const std::vector<BenchSample>& samples,
                    std::size_t warmup, std::size_t iters, F&& f) {
  using clock = std::chrono::steady_clock;
  double sink = 0.0;
  for (std::size_t k = 0; k < warmup; ++k) {
    sink += fold(f(k % samples.size()));
  }
  std::vector<double> seconds;
  seconds.reserve(iters);
  double checksum = 0.0;
  for (std::size_t k = 0; k < iters; ++k) {
    const std::size_t idx = k % samples.size();
    const auto t0 = clock::now();
    const auto out = f(idx);
    const auto t1 = clock::now();
    checksum += fold(out);
    seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  // Keep the warmup work observable.
  if (sink == -1.2345e300) checksum += 1.0;
  return summarize(name, std::move(seconds), checksum);
}

}  // namespace bench_detail

inline BenchReport bench(const std::vector<BenchSample>& samples,
                         std::size_t warmup_iters, std::size_t measured_iters) {
  if (samples.empty() || measured_iters == 0) {
    throw ValidationError("bench: need samples and measured_iters > 0");
  }
  // Inputs of the later steps are precomputed so each step runs alone.
  std::vector<ParamDerivative> raw(samples.size());
  std::vector<ParamDerivative> constrained(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const BenchSample& s = samples[i];
    raw[i] = tracking_term(s.state, s.v_des) +
             consensus_term(s.state.eta, s.inbox, s.state.gains.lambda) +
             soft_term(s.state.eta, s.state.spec, s.state.gains.mu);
    constrained[i] =
        constrain_derivative(s.state.eta, raw[i], s.state.spec, s.dt).d_eta;
  }

  using bench_detail::time_step;
  BenchReport report;
  report.iterations = measured_iters;
  report.samples = samples.size();
  report.steps.push_back(time_step(
      "tracking", samples, warmup_iters, measured_iters, [&](std::size_t i) {
        return tracking_term(samples[i].state, samples[i].v_des);
      }));
  report.steps.push_back(time_step(
      "consensus", samples, warmup_iters, measured_iters, [&](std::size_t i) {
        const BenchSample& s = samples[i];
        return consensus_term(s.state.eta, s.inbox, s.state.gains.lambda);
      }));
  report.steps.push_back(time_step(
      "soft constraint", samples, warmup_iters, measured_iters,
      [&](std::size_t i) {
        const BenchSample& s = samples[i];
        return soft_term(s.state.eta, s.state.spec, s.state.gains.mu);
      }));
  report.steps.push_back(time_step(
      "hard constraint", samples, warmup_iters, measured_iters,
      [&](std::size_t i) {
        const BenchSample& s = samples[i];
        return constrain_derivative(s.state.eta, raw[i], s.state.spec, s.dt);
      }));
  report.steps.push_back(time_step(
      "recovering velocity", samples, warmup_iters, measured_iters,
      [&](std::size_t i) {
        const BenchSample& s = samples[i];
        return recover_velocity(s.state.eta, s.state.slot, constrained[i],
                                s.position, s.state.gains.k_fb);
      }));
  report.steps.push_back(time_step(
      "complete method", samples, warmup_iters, measured_iters,
      [&](std::size_t i) {
        const BenchSample& s = samples[i];
        return plan_tick(s.state, s.v_des, s.inbox, s.position, s.dt);
      }));
  return report;
}

inline BenchReport bench(const Scenario& scenario, std::size_t warmup_iters,
                         std::size_t measured_iters) {
  return bench(collect_bench_samples(scenario), warmup_iters, measured_iters);
}

/// Table in the layout step | min | median | mean | max | variance.
inline std::string format_bench_table(const BenchReport& r) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %11s %11s %11s %11s %11s\n", "step",
                "min", "median", "mean", "max", "variance");
  out += line;
  for (const StepStats& s : r.steps) {
    std::snprintf(line, sizeof line,
                  "%-20s %11.3e %11.3e %11.3e %11.3e %11.3e\n", s.name.c_str(),
                  s.min, s.median, s.mean, s.max, s.variance);
    out += line;
  }
  return out;
}

inline nlohmann::json bench_json(const BenchReport& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const StepStats& s : r.steps) {
    steps.push_back({{"step", s.name},
                     {"min", s.min},
                     {"median", s.median},
                     {"mean", s.mean},
                     {"max", s.max},
                     {"variance", s.variance}});
  }
  return {{"unit", "s"},
          {"iterations", r.iterations},
          {"samples", r.samples},
          {"steps", steps}};
}

}  // namespace rigidform
