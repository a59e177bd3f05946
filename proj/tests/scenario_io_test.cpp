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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "rigidform/scenario_io.hpp"

namespace rigidform {
namespace {

namespace fs = std::filesystem;

constexpr const char* kMinimal = R"({
  "base": [[-1, -1], [0, -1], [1, -1]],
  "eta_goal": {"phi": 0.5, "s": [1.5, 1.5], "t": [15, 0]}
})";

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("rigidform_io_test_" + name);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(ParseScenario, MinimalFileGetsTableDefaults) {
  const Scenario s = parse_scenario_text(kMinimal);
  EXPECT_EQ(s.base.size(), 3u);
  EXPECT_EQ(s.eta_goal.phi, 0.5);
  EXPECT_EQ(s.eta_init, FormationParams{});
  EXPECT_EQ(s.dt, 1e-3);
  EXPECT_EQ(s.t_final, 9.0);
  EXPECT_EQ(s.spec.eps_soft, 0.75);
  EXPECT_EQ(s.spec.eps_hard, 0.75);
  EXPECT_EQ(s.spec.r_soft, 2.5);
  EXPECT_EQ(s.spec.r_hard, 2.5);
  EXPECT_EQ(s.apf.k_att, 5.0);
  EXPECT_EQ(s.apf.rho, 0.1);
  EXPECT_EQ(s.apf.k_rep, 5.0);
  EXPECT_EQ(s.apf.xi, 0.25);
  EXPECT_EQ(s.apf.nu, 1.5);
  EXPECT_TRUE(s.obstacles.empty());
}

TEST(ParseScenario, NonPositiveScalingIsAValidationError) {
  const std::string text = R"({
    "base": [[0, 0]],
    "eta_init": {"s": [0, 1]},
    "eta_goal": {"s": [1, 1]}
  })";
  EXPECT_THROW(parse_scenario_text(text), ValidationError);
}

TEST(ParseScenario, UnknownKeysAreRejected) {
  const std::string top = R"({"base": [[0,0]], "eta_goal": {}, "gain": 1})";
  try {
    parse_scenario_text(top);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("'gain'"), std::string::npos);
  }
  const std::string nested =
      R"({"base": [[0,0]], "eta_goal": {}, "apf": {"k_attr": 1}})";
  try {
    parse_scenario_text(nested);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("apf.k_attr"), std::string::npos);
  }
}

TEST(ParseScenario, SyntaxErrorsReportLine) {
  const std::string text = "{\n  \"base\": [[0, 0]],\n  \"eta_goal\": {,}\n}";
  try {
    parse_scenario_text(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos)
        << e.what();
  }
}

TEST(ParseScenario, TypeErrorsNameTheField) {
  const std::string text =
      R"({"base": [[0,0]], "eta_goal": {}, "obstacles": [{"center": [1], "radius": 2}]})";
  try {
    parse_scenario_text(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("obstacles[0].center"),
              std::string::npos)
        << e.what();
  }
  EXPECT_THROW(parse_scenario_text(R"({"eta_goal": {}})"), ParseError);
  EXPECT_THROW(
      parse_scenario_text(R"({"base": [[0,0]], "eta_goal": {}, "noise": {"seed": -1}})"),
      ParseError);
}

TEST(ParseScenario, MissingFileIsAnIoError) {
  EXPECT_THROW(parse_scenario(temp_path("does_not_exist.json")), IoError);
}

TEST(EmitScenario, RoundTripsExactly) {
  EXPECT_EQ(parse_scenario_text(emit_scenario(reference_scenario())),
            reference_scenario());

  // Random scenarios with awkward doubles.
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    Scenario s = reference_scenario();
    s.eta_init = {u(rng) * 7 - 3, Vec2(1 + 0.7 * u(rng), 1 + 0.7 * u(rng)),
                  Vec2(u(rng) * 1e3, -u(rng) / 3)};
    s.eta_goal.phi = u(rng) * 1e-7;
    s.gains = {u(rng) * 40, u(rng) * 100, u(rng) * 3};
    s.robot_gains.assign(s.base.size(), PlannerGains{u(rng), u(rng), u(rng)});
    s.apf.rho = 0.1 + u(rng);
    s.obstacles.push_back({Vec2(u(rng), u(rng)), u(rng)});
    s.r_d = s.r_c * u(rng) + 1e-3;
    s.dt = 1e-3 * (1 + u(rng));
    s.init_noise_sigma = u(rng);
    s.rng_seed = rng();
    ASSERT_NO_THROW(s.validate());
    EXPECT_EQ(parse_scenario_text(emit_scenario(s)), s);
  }
}

TrajectoryLog tiny_log(std::size_t ticks) {
  TrajectoryLog log;
  log.robots = 1;
  for (std::size_t k = 0; k < ticks; ++k) {
    TrajectoryRecord r;
    r.t = 1e-3 * k;
    r.position = Vec2(1.0 / 3.0, -2.0 / 7.0);
    r.velocity = Vec2(k, 0.5);
    r.eta = {0.123456789012, Vec2(1.5, 1.5), Vec2(15, 0)};
    r.a_s = 0.75;
    r.neighbors = 8;
    log.records.push_back(r);
  }
  return log;
}

TEST(ExportCsv, HeaderOnlyForEmptyLog) {
  std::ostringstream out;
  write_csv(TrajectoryLog{}, out);
  EXPECT_EQ(out.str(), "t,robot,px,py,vx,vy,phi,sx,sy,tx,ty,a_s,neighbors\n");
}

TEST(ExportCsv, OneRowPerRecordWithNineSignificantDigits) {
  const fs::path p = temp_path("two_ticks.csv");
  export_csv(tiny_log(2), p);
  const std::string text = read_file(p);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_NE(text.find("0.3333333333,-0.2857142857"), std::string::npos)
      << text;
  EXPECT_NE(text.find("0.123456789"), std::string::npos);

  export_csv(tiny_log(2), temp_path("two_ticks_again.csv"));
  EXPECT_EQ(read_file(temp_path("two_ticks_again.csv")), text);
  fs::remove(p);
  fs::remove(temp_path("two_ticks_again.csv"));
}

TEST(ExportCsv, UnwritablePathIsAnIoError) {
  EXPECT_THROW(export_csv(tiny_log(1), "/nonexistent-dir/x/y.csv"), IoError);
}

TEST(MetricsJson, InfiniteDistancesBecomeNull) {
  RunResult r;
  r.log = tiny_log(1);
  r.metrics.formation_error = {0.0};
  const nlohmann::json j = metrics_json(r);
  EXPECT_TRUE(j["min_obstacle_clearance"].is_null());
  EXPECT_EQ(j["ticks"], 1);
}

}  // namespace
}  // namespace rigidform
