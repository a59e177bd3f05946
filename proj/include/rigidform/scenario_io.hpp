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

// Scenario files, trajectory CSV and metrics summaries.
//
// A scenario is a JSON object. Only "base" and "eta_goal" are required;
// every other section falls back to the defaults of Scenario. Unknown keys
// are rejected.
//
//   {
//     "base":       [[x, y], ...],
//     "eta_init":   {"phi": 0, "s": [1, 1], "t": [0, 0]},
//     "eta_goal":   {"phi": 3.92699, "s": [1.5, 1.5], "t": [15, 0]},
//     "obstacles":  [{"center": [6, -2], "radius": 2}],
//     "planner":    {"lambda": 32, "mu": 20, "k_fb": 2},
//     "robot_planner": [{"lambda": ..., "mu": ..., "k_fb": ...}, ...],
//     "apf":        {"k_att": 5, "rho": 0.1, "k_rep": 5, "xi": 0.25, "nu": 1.5},
//     "constraint": {"eps_soft": 0.75, "eps_hard": 0.75,
//                    "r_soft": 2.5, "r_hard": 2.5},
//     "comm":       {"r_c": 10, "r_d": 10},
//     "time":       {"dt": 0.001, "t_final": 9},
//     "noise":      {"init_sigma": 0, "seed": 1}
//   }

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rigidform/errors.hpp"
#include "rigidform/simulator.hpp"

namespace rigidform {

namespace io_detail {

using nlohmann::json;

class Field {
 public:
  Field(const json& value, std::string path)
      : value_(value), path_(std::move(path)) {}

  const json& value() const { return value_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("field '" + path_ + "': " + what);
  }

  void expect_object(std::initializer_list<std::string_view> allowed) const {
    if (!value_.is_object()) fail("expected an object");
    for (const auto& item : value_.items()) {
      bool known = false;
      for (std::string_view k : allowed) known |= (item.key() == k);
      if (!known) {
        throw ParseError("unknown key '" + child_path(item.key()) + "'");
      }
    }
  }

  bool has(const std::string& key) const { return value_.contains(key); }

  Field at(const std::string& key) const {
    return Field(value_.at(key), child_path(key));
  }

  Field at(std::size_t i) const {
    return Field(value_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }

  std::uint64_t unsigned_integer() const {
    if (!value_.is_number_unsigned()) fail("expected a non-negative integer");
    return value_.get<std::uint64_t>();
  }

  Vec2 vec2() const {
    if (!value_.is_array() || value_.size() != 2) {
      fail("expected an array of two numbers");
    }
    return {at(0).number(), at(1).number()};
  }

  std::size_t array_size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

  // Overwrites `out` only when the key is present.
  void optional(const std::string& key, double& out) const {
    if (has(key)) out = at(key).number();
  }

 private:
  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& value_;
  std::string path_;
};

inline FormationParams read_params(const Field& f) {
  f.expect_object({"phi", "s", "t"});
  FormationParams eta;
  if (f.has("phi")) eta.phi = f.at("phi").number();
  if (f.has("s")) eta.s = f.at("s").vec2();
  if (f.has("t")) eta.t = f.at("t").vec2();
  return eta;
}

inline PlannerGains read_gains(const Field& f, PlannerGains g) {
  f.expect_object({"lambda", "mu", "k_fb"});
  f.optional("lambda", g.lambda);
  f.optional("mu", g.mu);
  f.optional("k_fb", g.k_fb);
  return g;
}

inline json vec2_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

inline json params_json(const FormationParams& eta) {
  return {{"phi", eta.phi}, {"s", vec2_json(eta.s)}, {"t", vec2_json(eta.t)}};
}

inline json gains_json(const PlannerGains& g) {
  return {{"lambda", g.lambda}, {"mu", g.mu}, {"k_fb", g.k_fb}};
}

inline std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

// Infinite distances (no obstacles, single robot) are written as null.
inline json finite_or_null(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

}  // namespace io_detail

/// Parses and validates a scenario document. Throws ParseError for syntax,
/// type and unknown-key problems, ValidationError for invariant violations.
inline Scenario parse_scenario_text(std::string_view text) {
  using io_detail::Field;
  using io_detail::json;

  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(io_detail::locate(text, byte) + ": " + e.what());
  }

  const Field root(doc, "");
  root.expect_object({"base", "eta_init", "eta_goal", "obstacles", "planner",
                      "robot_planner", "apf", "constraint", "comm", "time",
                      "noise"});
  if (!root.has("base")) root.fail("missing required key 'base'");
  if (!root.has("eta_goal")) root.fail("missing required key 'eta_goal'");

  Scenario s;
  {
    const Field base = root.at("base");
    std::vector<Vec2> slots(base.array_size());
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = base.at(i).vec2();
    if (slots.empty()) base.fail("needs at least one slot");
    s.base = BaseConfiguration(std::move(slots));
  }
  s.eta_init = root.has("eta_init") ? io_detail::read_params(root.at("eta_init"))
                                    : FormationParams{};
  s.eta_goal = io_detail::read_params(root.at("eta_goal"));

  if (root.has("obstacles")) {
    const Field obs = root.at("obstacles");
    for (std::size_t i = 0; i < obs.array_size(); ++i) {
      const Field o = obs.at(i);
      o.expect_object({"center", "radius"});
      if (!o.has("center") || !o.has("radius")) {
        o.fail("obstacle needs 'center' and 'radius'");
      }
      s.obstacles.push_back({o.at("center").vec2(), o.at("radius").number()});
    }
  }
  if (root.has("planner")) {
    s.gains = io_detail::read_gains(root.at("planner"), s.gains);
  }
  if (root.has("robot_planner")) {
    const Field rp = root.at("robot_planner");
    for (std::size_t i = 0; i < rp.array_size(); ++i) {
      s.robot_gains.push_back(io_detail::read_gains(rp.at(i), s.gains));
    }
  }
  if (root.has("apf")) {
    const Field f = root.at("apf");
    f.expect_object({"k_att", "rho", "k_rep", "xi", "nu"});
    f.optional("k_att", s.apf.k_att);
    f.optional("rho", s.apf.rho);
    f.optional("k_rep", s.apf.k_rep);
    f.optional("xi", s.apf.xi);
    f.optional("nu", s.apf.nu);
  }
  if (root.has("constraint")) {
    const Field f = root.at("constraint");
    f.expect_object({"eps_soft", "eps_hard", "r_soft", "r_hard"});
    f.optional("eps_soft", s.spec.eps_soft);
    f.optional("eps_hard", s.spec.eps_hard);
    f.optional("r_soft", s.spec.r_soft);
    f.optional("r_hard", s.spec.r_hard);
  }
  if (root.has("comm")) {
    const Field f = root.at("comm");
    f.expect_object({"r_c", "r_d"});
    f.optional("r_c", s.r_c);
    s.r_d = s.r_c;
    f.optional("r_d", s.r_d);
  }
  if (root.has("time")) {
    const Field f = root.at("time");
    f.expect_object({"dt", "t_final"});
    f.optional("dt", s.dt);
    f.optional("t_final", s.t_final);
  }
  if (root.has("noise")) {
    const Field f = root.at("noise");
    f.expect_object({"init_sigma", "seed"});
    f.optional("init_sigma", s.init_noise_sigma);
    if (f.has("seed")) s.rng_seed = f.at("seed").unsigned_integer();
  }

  s.validate();
  return s;
}

inline Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario_text(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

/// Fully resolved scenario document (all defaults spelled out). Numbers are
/// printed in shortest round-trip form, so parsing the output reproduces
/// the scenario exactly.
inline std::string emit_scenario(const Scenario& s) {
  using io_detail::json;
  using io_detail::vec2_json;
  json doc;
  doc["base"] = json::array();
  for (const Vec2& c : s.base.slots()) doc["base"].push_back(vec2_json(c));
  doc["eta_init"] = io_detail::params_json(s.eta_init);
  doc["eta_goal"] = io_detail::params_json(s.eta_goal);
  doc["obstacles"] = json::array();
  for (const Obstacle& o : s.obstacles) {
    doc["obstacles"].push_back(
        {{"center", vec2_json(o.center)}, {"radius", o.radius}});
  }
  doc["planner"] = io_detail::gains_json(s.gains);
  if (!s.robot_gains.empty()) {
    doc["robot_planner"] = json::array();
    for (const PlannerGains& g : s.robot_gains) {
      doc["robot_planner"].push_back(io_detail::gains_json(g));
    }
  }
  doc["apf"] = {{"k_att", s.apf.k_att}, {"rho", s.apf.rho},
                {"k_rep", s.apf.k_rep}, {"xi", s.apf.xi}, {"nu", s.apf.nu}};
  doc["constraint"] = {{"eps_soft", s.spec.eps_soft},
                       {"eps_hard", s.spec.eps_hard},
                       {"r_soft", s.spec.r_soft},
                       {"r_hard", s.spec.r_hard}};
  doc["comm"] = {{"r_c", s.r_c}, {"r_d", s.r_d}};
  doc["time"] = {{"dt", s.dt}, {"t_final", s.t_final}};
  doc["noise"] = {{"init_sigma", s.init_noise_sigma}, {"seed", s.rng_seed}};
  return doc.dump(2) + "\n";
}

inline constexpr std::string_view kCsvHeader =
    "t,robot,px,py,vx,vy,phi,sx,sy,tx,ty,a_s,neighbors";

inline void write_csv(const TrajectoryLog& log, std::ostream& out) {
  out << kCsvHeader << '\n';
  char line[512];
  for (const TrajectoryRecord& r : log.records) {
    std::snprintf(line, sizeof line,
                  "%.10g,%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,"
                  "%.10g,%.10g,%zu\n",
                  r.t, r.robot, r.position.x(), r.position.y(),
                  r.velocity.x(), r.velocity.y(), r.eta.phi, r.eta.s.x(),
                  r.eta.s.y(), r.eta.t.x(), r.eta.t.y(), r.a_s, r.neighbors);
    out << line;
  }
}

inline void export_csv(const TrajectoryLog& log,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(log, out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

inline nlohmann::json metrics_json(const RunResult& r) {
  const RunMetrics& m = r.metrics;
  return {
      {"ticks", r.log.ticks()},
      {"robots", r.log.robots},
      {"final_formation_error", m.final_formation_error()},
      {"max_formation_error",
       m.formation_error.empty()
           ? 0.0
           : *std::max_element(m.formation_error.begin(),
                               m.formation_error.end())},
      {"mean_disagreement", m.mean_disagreement()},
      {"final_disagreement", m.disagreement.empty() ? 0.0 : m.disagreement.back()},
      {"mean_soft_distance", m.mean_soft_distance()},
      {"min_robot_distance", io_detail::finite_or_null(m.min_robot_distance)},
      {"min_obstacle_clearance",
       io_detail::finite_or_null(m.min_obstacle_clearance)},
      {"hard_violation_count", m.hard_violation_count},
      {"goal_param_error", m.goal_param_error},
      {"penetration_ticks", r.penetration_ticks},
  };
}

inline void write_text_file(const std::filesystem::path& path,
                            std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace rigidform
