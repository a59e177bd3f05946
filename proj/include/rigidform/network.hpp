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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rigidform/errors.hpp"
#include "rigidform/formation.hpp"

namespace rigidform {

/// Undirected range graph: i and j are linked iff |p_i - p_j| <= r_c.
/// r_d (the degradation-free range) is carried along but does not affect
/// which links exist.
class CommGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  CommGraph() = default;
  CommGraph(std::size_t n, double r_c, double r_d)
      : n_(n), r_c_(r_c), r_d_(r_d), adjacency_(n) {}

  std::size_t size() const { return n_; }
  double r_c() const { return r_c_; }
  double r_d() const { return r_d_; }

  /// Edges (i, j) with i < j, in lexicographic order.
  const std::vector<Edge>& edges() const { return edges_; }

  /// Neighbour ids of robot i in increasing order.
  const std::vector<std::size_t>& neighbors(std::size_t i) const {
    return adjacency_[i];
  }
  std::size_t degree(std::size_t i) const { return adjacency_[i].size(); }

  std::size_t max_degree() const {
    std::size_t m = 0;
    for (const auto& a : adjacency_) m = std::max(m, a.size());
    return m;
  }

  bool has_edge(std::size_t i, std::size_t j) const {
    for (std::size_t k : adjacency_[i]) {
      if (k == j) return true;
    }
    return false;
  }

  bool connected() const {
    if (n_ == 0) return true;
    std::vector<bool> seen(n_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j : adjacency_[i]) {
        if (!seen[j]) {
          seen[j] = true;
          ++count;
          stack.push_back(j);
        }
      }
    }
    return count == n_;
  }

  void add_edge(std::size_t i, std::size_t j) {
    edges_.emplace_back(i, j);
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
  }

 private:
  std::size_t n_ = 0;
  double r_c_ = 0.0;
  double r_d_ = 0.0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

inline CommGraph build_graph(std::span<const Vec2> positions, double r_c,
                             double r_d) {
  if (!(r_c > 0.0) || !(r_d > 0.0) || !(r_d <= r_c)) {
    throw ValidationError("build_graph: need r_c > 0 and 0 < r_d <= r_c");
  }
  const std::size_t n = positions.size();
  CommGraph g(n, r_c, r_d);
  // Pairs are visited with i < j ascending, so every adjacency list comes
  // out sorted.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((positions[i] - positions[j]).norm() <= r_c) g.add_edge(i, j);
    }
  }
  return g;
}

/// Synchronous lossless exchange: entry i holds the parameters of i's
/// neighbours, ordered by robot id.
inline std::vector<std::vector<FormationParams>> exchange(
    const CommGraph& graph, std::span<const FormationParams> all_eta) {
  if (all_eta.size() != graph.size()) {
    throw ValidationError("exchange: parameter count does not match graph");
  }
  std::vector<std::vector<FormationParams>> inbox(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    inbox[i].reserve(graph.degree(i));
    for (std::size_t j : graph.neighbors(i)) inbox[i].push_back(all_eta[j]);
  }
  return inbox;
}

}  // namespace rigidform
