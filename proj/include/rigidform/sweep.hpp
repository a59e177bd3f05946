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

#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rigidform/scenario_io.hpp"
#include "rigidform/simulator.hpp"

namespace rigidform {

enum class SweepParam { kLambda, kMu, kFeedback };

inline SweepParam parse_sweep_param(std::string_view name) {
  if (name == "lambda") return SweepParam::kLambda;
  if (name == "mu") return SweepParam::kMu;
  if (name == "k_fb" || name == "k") return SweepParam::kFeedback;
  throw ValidationError("unknown sweep parameter '" + std::string(name) +
                        "' (expected lambda, mu or k_fb)");
}

inline std::string_view sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::kLambda:
      return "lambda";
    case SweepParam::kMu:
      return "mu";
    case SweepParam::kFeedback:
      return "k_fb";
  }
  return "?";
}

/// Sets the swept gain on the shared gains and on every per-robot entry.
inline Scenario with_gain(Scenario s, SweepParam p, double value) {
  auto set = [&](PlannerGains& g) {
    switch (p) {
      case SweepParam::kLambda:
        g.lambda = value;
        break;
      case SweepParam::kMu:
        g.mu = value;
        break;
      case SweepParam::kFeedback:
        g.k_fb = value;
        break;
    }
  };
  set(s.gains);
  for (PlannerGains& g : s.robot_gains) set(g);
  return s;
}

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  RunMetrics metrics;
  std::size_t penetration_ticks = 0;
};

/// Runs the scenario once per value with everything else (seed included)
/// unchanged. A failing run is marked and the sweep carries on. When
/// out_dir is given, each run's trajectory goes to
/// out_dir/<param>_<value>.csv.
inline std::vector<SweepRow> sweep(
    const Scenario& scenario, SweepParam param,
    const std::vector<double>& values,
    const std::optional<std::filesystem::path>& out_dir = std::nullopt,
    const RunOptions& options = {}) {
  if (values.empty()) throw ValidationError("sweep: no values given");
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < values.size(); ++k) {
    SweepRow row;
    row.value = values[k];
    try {
      const RunResult r = run(with_gain(scenario, param, values[k]), options);
      if (out_dir) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%g.csv",
                      std::string(sweep_param_name(param)).c_str(), values[k]);
        export_csv(r.log, *out_dir / name);
      }
      row.metrics = r.metrics;
      row.penetration_ticks = r.penetration_ticks;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string format_sweep_table(SweepParam param,
                                      const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << sweep_param_name(param)
      << ",status,final_formation_error,mean_disagreement,mean_soft_distance,"
         "min_robot_distance,min_obstacle_clearance,hard_violation_count,"
         "goal_param_error\n";
  char line[512];
  for (const SweepRow& r : rows) {
    if (!r.ok) {
      std::snprintf(line, sizeof line, "%.10g,failed,,,,,,,\n", r.value);
      out << line;
      continue;
    }
    const RunMetrics& m = r.metrics;
    std::snprintf(line, sizeof line,
                  "%.10g,ok,%.10g,%.10g,%.10g,%.10g,%.10g,%zu,%.10g\n",
                  r.value, m.final_formation_error(), m.mean_disagreement(),
                  m.mean_soft_distance(), m.min_robot_distance,
                  m.min_obstacle_clearance, m.hard_violation_count,
                  m.goal_param_error);
    out << line;
  }
  return out.str();
}

}  // namespace rigidform
