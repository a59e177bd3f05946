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
#include <vector>

#include <gtest/gtest.h>

#include "rigidform/bench.hpp"
#include "rigidform/sweep.hpp"

namespace rigidform {
namespace {

Scenario short_scenario() {
  Scenario s = reference_scenario();
  s.t_final = 0.2;
  return s;
}

TEST(Summarize, OrderStatistics) {
  const StepStats st = summarize("x", {4.0, 1.0, 3.0, 2.0}, 0.0);
  EXPECT_EQ(st.min, 1.0);
  EXPECT_EQ(st.max, 4.0);
  EXPECT_EQ(st.median, 2.5);
  EXPECT_EQ(st.mean, 2.5);
  EXPECT_EQ(st.variance, 1.25);
  EXPECT_EQ(summarize("y", {3.0, 1.0, 2.0}, 0.0).median, 2.0);
}

TEST(Bench, ReportShapeAndInvariants) {
  const auto samples = collect_bench_samples(short_scenario(), 256);
  ASSERT_EQ(samples.size(), 256u);
  const BenchReport r = bench(samples, 1000, 20000);
  const char* names[] = {"tracking",        "consensus",
                         "soft constraint", "hard constraint",
                         "recovering velocity", "complete method"};
  ASSERT_EQ(r.steps.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    const StepStats& s = r.steps[k];
    EXPECT_EQ(s.name, names[k]);
    EXPECT_LE(s.min, s.median);
    EXPECT_LE(s.median, s.max);
    EXPECT_GE(s.mean, s.min);
    EXPECT_LE(s.mean, s.max);
    EXPECT_GE(s.variance, 0.0);
  }
  const double complete = r.step("complete method").mean;
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_GE(complete, r.steps[k].mean) << r.steps[k].name;
  }
  EXPECT_LT(complete, 1e-3);
  EXPECT_THROW(r.step("nope"), ValidationError);
}

TEST(Bench, StepOutputsAreDeterministic) {
  const auto samples = collect_bench_samples(short_scenario(), 128);
  const BenchReport a = bench(samples, 10, 1000);
  const BenchReport b = bench(collect_bench_samples(short_scenario(), 128), 10,
                              1000);
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    EXPECT_EQ(a.steps[k].checksum, b.steps[k].checksum) << a.steps[k].name;
  }
  EXPECT_THROW(bench(samples, 0, 0), ValidationError);
}

TEST(Sweep, ParamNames) {
  EXPECT_EQ(parse_sweep_param("lambda"), SweepParam::kLambda);
  EXPECT_EQ(parse_sweep_param("mu"), SweepParam::kMu);
  EXPECT_EQ(parse_sweep_param("k_fb"), SweepParam::kFeedback);
  EXPECT_EQ(parse_sweep_param("k"), SweepParam::kFeedback);
  EXPECT_THROW(parse_sweep_param("gamma"), ValidationError);
}

TEST(Sweep, OneRunPerValueAndFailuresAreMarked) {
  const auto dir = std::filesystem::temp_directory_path() / "rigidform_sweep";
  std::filesystem::create_directories(dir);
  const auto rows = sweep(short_scenario(), SweepParam::kLambda,
                          {1.0, -1.0, 8.0}, dir);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[0].ok);
  EXPECT_FALSE(rows[1].ok);
  EXPECT_NE(rows[1].error.find("non-negative"), std::string::npos);
  EXPECT_TRUE(rows[2].ok);
  EXPECT_TRUE(std::filesystem::exists(dir / "lambda_1.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "lambda_8.csv"));
  EXPECT_EQ(rows[0].metrics.formation_error.size(), 200u);

  const std::string table = format_sweep_table(SweepParam::kLambda, rows);
  EXPECT_NE(table.find("-1,failed"), std::string::npos) << table;
  std::filesystem::remove_all(dir);

  EXPECT_THROW(sweep(short_scenario(), SweepParam::kMu, {}), ValidationError);
}

TEST(Sweep, WithGainTouchesPerRobotGains) {
  Scenario s = short_scenario();
  s.robot_gains.assign(s.robot_count(), PlannerGains{1, 2, 3});
  const Scenario t = with_gain(s, SweepParam::kMu, 7.0);
  EXPECT_EQ(t.gains.mu, 7.0);
  for (const PlannerGains& g : t.robot_gains) {
    EXPECT_EQ(g.mu, 7.0);
    EXPECT_EQ(g.lambda, 1.0);
  }
}

}  // namespace
}  // namespace rigidform
