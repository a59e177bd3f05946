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

#include <vector>

#include <gtest/gtest.h>

#include "rigidform/network.hpp"
#include "rigidform/planner.hpp"

namespace rigidform {
namespace {

std::vector<Vec2> grid_positions() {
  const BaseConfiguration base = BaseConfiguration::grid(3, 3);
  std::vector<Vec2> p;
  for (const Vec2& c : base.slots()) p.push_back(apply_transform({}, c));
  return p;
}

TEST(BuildGraph, BoundaryIsInclusive) {
  const std::vector<Vec2> p{Vec2(0, 0), Vec2(3, 4)};
  const CommGraph g = build_graph(p, 5.0, 5.0);
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_TRUE(build_graph(p, 4.999, 4.0).edges().empty());
}

TEST(BuildGraph, SingleRobotHasNoEdges) {
  const std::vector<Vec2> p{Vec2(1, 2)};
  const CommGraph g = build_graph(p, 10.0, 5.0);
  EXPECT_TRUE(g.edges().empty());
  EXPECT_TRUE(g.connected());
}

TEST(BuildGraph, UnitGridDegreesMatchBruteForce) {
  const std::vector<Vec2> p = grid_positions();
  const CommGraph g = build_graph(p, 1.5, 1.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t expected = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (i != j && (p[i] - p[j]).norm() <= 1.5) ++expected;
      EXPECT_EQ(g.has_edge(i, j), i != j && (p[i] - p[j]).norm() <= 1.5);
    }
    EXPECT_EQ(g.degree(i), expected);
  }
  for (std::size_t corner : {0u, 2u, 6u, 8u}) EXPECT_EQ(g.degree(corner), 3u);
  EXPECT_EQ(g.degree(4), 8u);
  EXPECT_EQ(g.max_degree(), 8u);
}

TEST(BuildGraph, RejectsBadRanges) {
  const std::vector<Vec2> p{Vec2(0, 0)};
  EXPECT_THROW(build_graph(p, 0.0, 0.0), ValidationError);
  EXPECT_THROW(build_graph(p, 1.0, 2.0), ValidationError);
}

TEST(Exchange, Examples) {
  std::vector<FormationParams> eta(3);
  for (int i = 0; i < 3; ++i) eta[i].t = Vec2(i, 0);

  const std::vector<Vec2> far{Vec2(0, 0), Vec2(10, 0), Vec2(20, 0)};
  for (const auto& inbox : rigidform::exchange(build_graph(far, 1, 1), eta)) {
    EXPECT_TRUE(inbox.empty());
  }

  const std::vector<Vec2> close{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  const auto inbox = rigidform::exchange(build_graph(close, 2, 2), eta);
  ASSERT_EQ(inbox[1].size(), 2u);
  EXPECT_EQ(inbox[1][0], eta[0]);
  EXPECT_EQ(inbox[1][1], eta[2]);

  EXPECT_THROW(rigidform::exchange(build_graph(close, 2, 2),
                                   std::vector<FormationParams>(2)),
               ValidationError);
}

TEST(Exchange, GridInboxSizesMatchDegreesAndAreSymmetric) {
  const std::vector<Vec2> p = grid_positions();
  const CommGraph g = build_graph(p, 1.5, 1.0);
  std::vector<FormationParams> eta(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) eta[i].phi = double(i);
  const auto inbox = rigidform::exchange(g, eta);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(inbox[i].size(), g.degree(i));
    for (const FormationParams& n : inbox[i]) {
      const auto j = static_cast<std::size_t>(n.phi);
      bool back = false;
      for (const FormationParams& m : inbox[j]) back |= (m.phi == double(i));
      EXPECT_TRUE(back) << i << " <-> " << j;
    }
  }
}

TEST(Exchange, DisconnectedRobotGetsNoConsensusPull) {
  std::vector<Vec2> p = grid_positions();
  p[4] = Vec2(100, 100);
  const CommGraph g = build_graph(p, 1.5, 1.0);
  std::vector<FormationParams> eta(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) eta[i].t = Vec2(i, -double(i));
  const auto inbox = rigidform::exchange(g, eta);
  EXPECT_TRUE(inbox[4].empty());
  EXPECT_EQ(consensus_term(eta[4], inbox[4], 32.0), ParamDerivative{});
  EXPECT_FALSE(g.connected());
}

}  // namespace
}  // namespace rigidform
