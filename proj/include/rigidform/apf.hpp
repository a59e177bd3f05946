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

// Artificial-potential-field local planner that produces each robot's desired
// velocity. Fields are expressed directly in velocity units:
//
//   attraction  k_att * (g - p) / |g - p|          if |g - p| > rho
//               k_att * (g - p) / rho              otherwise
//   repulsion   k_rep * (1/d - 1/nu) * away        if d < nu, else 0
//
// where d is the clearance-inflated surface distance, floored at
// kRepulsionFloor.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "rigidform/errors.hpp"
#include "rigidform/formation.hpp"

namespace rigidform {

struct ApfGains {
  double k_att = 5.0;   // attractor velocity, m/s
  double rho = 0.1;     // attractor switch distance, m
  double k_rep = 5.0;   // repulsor strength, m/s
  double xi = 0.25;     // obstacle clearance, m
  double nu = 1.5;      // repulsor distance, m

  void validate() const {
    for (double g : {k_att, rho, k_rep, xi, nu}) {
      if (!std::isfinite(g) || !(g > 0.0)) {
        throw ValidationError("APF gains must be finite and positive");
      }
    }
  }

  friend bool operator==(const ApfGains&, const ApfGains&) = default;
};

struct Obstacle {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

inline constexpr double kRepulsionFloor = 1e-3;

inline Vec2 attractive_velocity(const Vec2& p, const Vec2& p_goal,
                                const ApfGains& gains) {
  const Vec2 e = p_goal - p;
  const double dist = e.norm();
  if (dist == 0.0) return Vec2::Zero();
  if (dist > gains.rho) return (gains.k_att / dist) * e;
  return (gains.k_att / gains.rho) * e;
}

struct Repulsion {
  Vec2 velocity = Vec2::Zero();
  bool penetration = false;  // d <= 0: inside the inflated obstacle
};

/// surface_distance is the raw distance to the obstacle surface; the
/// clearance xi is subtracted here.
inline Repulsion repulsive_velocity(double surface_distance,
                                    const Vec2& away_direction,
                                    const ApfGains& gains) {
  Repulsion out;
  double d = surface_distance - gains.xi;
  if (d >= gains.nu) return out;
  if (d <= 0.0) out.penetration = true;
  d = std::max(d, kRepulsionFloor);
  out.velocity = gains.k_rep * (1.0 / d - 1.0 / gains.nu) * away_direction;
  return out;
}

struct DesiredVelocity {
  Vec2 velocity = Vec2::Zero();
  bool penetration = false;
  double obstacle_distance = std::numeric_limits<double>::infinity();
  double robot_distance = std::numeric_limits<double>::infinity();
};

namespace detail {

inline Vec2 unit_away(const Vec2& from, const Vec2& p) {
  const Vec2 d = p - from;
  const double n = d.norm();
  // Sitting exactly on the centre has no preferred direction; push along +x.
  return n > 0.0 ? Vec2(d / n) : Vec2(1.0, 0.0);
}

}  // namespace detail

/// Attraction to the goal plus repulsion from the single nearest obstacle
/// and the single nearest other robot.
inline DesiredVelocity desired_velocity(const Vec2& p, const Vec2& p_goal,
                                        std::span<const Obstacle> obstacles,
                                        std::span<const Vec2> other_robots,
                                        const ApfGains& gains) {
  DesiredVelocity out;
  out.velocity = attractive_velocity(p, p_goal, gains);

  const Obstacle* nearest_obstacle = nullptr;
  for (const Obstacle& o : obstacles) {
    const double d = (p - o.center).norm() - o.radius;
    if (d < out.obstacle_distance) {
      out.obstacle_distance = d;
      nearest_obstacle = &o;
    }
  }
  if (nearest_obstacle != nullptr) {
    const Repulsion r = repulsive_velocity(
        out.obstacle_distance, detail::unit_away(nearest_obstacle->center, p),
        gains);
    out.velocity += r.velocity;
    out.penetration |= r.penetration;
  }

  const Vec2* nearest_robot = nullptr;
  for (const Vec2& q : other_robots) {
    const double d = (p - q).norm();
    if (d < out.robot_distance) {
      out.robot_distance = d;
      nearest_robot = &q;
    }
  }
  if (nearest_robot != nullptr) {
    if (!(out.robot_distance > 0.0)) {
      throw ValidationError("desired_velocity: robot coincides with another");
    }
    const Repulsion r = repulsive_velocity(
        out.robot_distance, detail::unit_away(*nearest_robot, p), gains);
    out.velocity += r.velocity;
    out.penetration |= r.penetration;
  }
  return out;
}

}  // namespace rigidform
