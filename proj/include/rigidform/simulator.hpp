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

// Closed-loop swarm simulation: APF local planner -> formation planner ->
// single-integrator dynamics, one synchronous round per tick.
//
// Each tick runs in two phases separated by a barrier:
//   robot phase   every robot computes its desired velocity, runs plan_tick
//                 on its own state and its inbox, and writes only its own
//                 output slot;
//   serial phase  outputs are logged, parameters committed, positions
//                 integrated, and the next graph and inboxes are built.
// The robot phase may be spread over several worker threads; results are
// bit-identical to a single worker.

#pragma once

#include <algorithm>
#include <barrier>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rigidform/apf.hpp"
#include "rigidform/constraint.hpp"
#include "rigidform/errors.hpp"
#include "rigidform/formation.hpp"
#include "rigidform/network.hpp"
#include "rigidform/planner.hpp"
#include "rigidform/random.hpp"

namespace rigidform {

struct Scenario {
  BaseConfiguration base = BaseConfiguration::grid(3, 3);
  FormationParams eta_init;
  FormationParams eta_goal;
  std::vector<Obstacle> obstacles;
  PlannerGains gains;
  std::vector<PlannerGains> robot_gains;  // empty: every robot uses `gains`
  ApfGains apf;
  ConstraintSpec spec;
  double r_c = 10.0;
  double r_d = 10.0;
  double dt = 1e-3;
  double t_final = 9.0;
  double init_noise_sigma = 0.0;  // std dev of initial position noise, m
  std::uint64_t rng_seed = 1;

  std::size_t robot_count() const { return base.size(); }

  const PlannerGains& gains_for(std::size_t robot) const {
    return robot_gains.empty() ? gains : robot_gains[robot];
  }

  /// ceil(t_final / dt), robust to the quotient landing an ulp above an
  /// integer (9 / 1e-3 for instance).
  std::size_t tick_count() const {
    const double q = t_final / dt;
    const double nearest = std::round(q);
    if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, q)) {
      return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(q));
  }

  void validate() const {
    auto fail = [](const std::string& what) {
      throw ValidationError("scenario: " + what);
    };
    if (base.size() == 0) fail("base configuration is empty");
    if (!eta_init.valid()) {
      fail("eta_init must be finite with strictly positive scaling");
    }
    if (!eta_goal.valid()) {
      fail("eta_goal must be finite with strictly positive scaling");
    }
    spec.validate();
    if (!in_hard_set(eta_init.s, spec)) {
      fail("eta_init scaling lies outside the hard constraint set");
    }
    gains.validate();
    if (!robot_gains.empty()) {
      if (robot_gains.size() != base.size()) {
        fail("robot_gains must have one entry per robot");
      }
      for (const PlannerGains& g : robot_gains) g.validate();
    }
    apf.validate();
    for (const Obstacle& o : obstacles) {
      if (!o.center.allFinite() || !std::isfinite(o.radius) ||
          o.radius < 0.0) {
        fail("obstacle needs a finite centre and a finite radius >= 0");
      }
    }
    if (!(r_c > 0.0) || !std::isfinite(r_c)) fail("r_c must be positive");
    if (!(r_d > 0.0) || !(r_d <= r_c)) fail("r_d must satisfy 0 < r_d <= r_c");
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
    if (!(t_final >= dt) || !std::isfinite(t_final)) {
      fail("t_final must be at least dt");
    }
    if (!(init_noise_sigma >= 0.0) || !std::isfinite(init_noise_sigma)) {
      fail("init_noise_sigma must be finite and non-negative");
    }
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Nine robots on a unit grid travel from the identity configuration to
/// (5pi/4, 1.5, 1.5, 15, 0) past two circular obstacles of radius 2.
inline Scenario reference_scenario() {
  Scenario s;
  s.base = BaseConfiguration::grid(3, 3);
  s.eta_init = {0.0, Vec2(1.0, 1.0), Vec2(0.0, 0.0)};
  s.eta_goal = {1.25 * std::numbers::pi, Vec2(1.5, 1.5), Vec2(15.0, 0.0)};
  s.obstacles = {{Vec2(6.0, -2.0), 2.0}, {Vec2(8.5, 5.0), 2.0}};
  return s;
}

/// Initial noise of N(0, 0.5 I): variance 0.5 per axis.
inline constexpr double kReferenceNoiseSigma = 0.70710678118654752;

struct TrajectoryRecord {
  double t = 0.0;
  std::size_t robot = 0;
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  FormationParams eta;
  double a_s = 1.0;
  std::size_t neighbors = 0;

  friend bool operator==(const TrajectoryRecord&,
                         const TrajectoryRecord&) = default;
};

/// Records are tick-major: tick k occupies [k * robots, (k + 1) * robots).
/// Each record holds the state at the start of its tick, the velocity
/// commanded during it and the parameters the planner used.
struct TrajectoryLog {
  std::size_t robots = 0;
  std::vector<TrajectoryRecord> records;

  std::size_t ticks() const { return robots == 0 ? 0 : records.size() / robots; }

  std::span<const TrajectoryRecord> tick(std::size_t k) const {
    return std::span<const TrajectoryRecord>(records).subspan(k * robots,
                                                              robots);
  }

  friend bool operator==(const TrajectoryLog&, const TrajectoryLog&) = default;
};

struct RunMetrics {
  // Per tick.
  std::vector<double> formation_error;  // max_i |p_i - T(eta_i, c_i)|
  std::vector<double> disagreement;     // max componentwise spread of eta
  std::vector<double> soft_distance;    // mean_i dist(s_i, C_s)

  double min_robot_distance = std::numeric_limits<double>::infinity();
  double min_obstacle_clearance = std::numeric_limits<double>::infinity();
  std::size_t hard_violation_count = 0;
  double goal_param_error = 0.0;

  double final_formation_error() const {
    return formation_error.empty() ? 0.0 : formation_error.back();
  }
  double mean_disagreement() const { return mean(disagreement); }
  double mean_soft_distance() const { return mean(soft_distance); }

 private:
  static double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  }
};

/// Tolerance for counting a tick as a hard-constraint violation.
inline constexpr double kHardViolationTolerance = 1e-6;

/// Angle difference folded into (-pi, pi].
inline double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

/// Largest max_i(x_i) - min_i(x_i) over the five parameter components.
inline double parameter_spread(std::span<const FormationParams> etas) {
  if (etas.empty()) return 0.0;
  Vector5 lo = etas[0].vector();
  Vector5 hi = lo;
  for (const FormationParams& e : etas) {
    const Vector5 v = e.vector();
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).maxCoeff();
}

inline RunMetrics compute_metrics(const TrajectoryLog& log,
                                  const Scenario& scenario) {
  if (log.robots == 0 || log.records.empty()) {
    throw ValidationError("compute_metrics: empty trajectory log");
  }
  if (log.robots != scenario.robot_count() ||
      log.records.size() % log.robots != 0) {
    throw ValidationError("compute_metrics: log does not match scenario");
  }
  RunMetrics m;
  const std::size_t n = log.robots;
  const std::size_t ticks = log.ticks();
  m.formation_error.reserve(ticks);
  m.disagreement.reserve(ticks);
  m.soft_distance.reserve(ticks);
  std::vector<FormationParams> etas(n);

  for (std::size_t k = 0; k < ticks; ++k) {
    const auto rows = log.tick(k);
    double form = 0.0;
    double soft = 0.0;
    bool violated = false;
    for (std::size_t i = 0; i < n; ++i) {
      const TrajectoryRecord& r = rows[i];
      etas[i] = r.eta;
      const Vec2 slot = apply_transform(r.eta, scenario.base[r.robot]);
      form = std::max(form, (r.position - slot).norm());
      soft += distance_to_soft_set(r.eta.s, scenario.spec);
      violated |= !in_hard_set(r.eta.s, scenario.spec, kHardViolationTolerance);
      for (std::size_t j = i + 1; j < n; ++j) {
        m.min_robot_distance = std::min(
            m.min_robot_distance, (r.position - rows[j].position).norm());
      }
      for (const Obstacle& o : scenario.obstacles) {
        m.min_obstacle_clearance =
            std::min(m.min_obstacle_clearance,
                     (r.position - o.center).norm() - o.radius);
      }
    }
    m.formation_error.push_back(form);
    m.disagreement.push_back(parameter_spread(etas));
    m.soft_distance.push_back(soft / static_cast<double>(n));
    if (violated) ++m.hard_violation_count;
  }

  // Last tick: robots sit in a physically identical formation for any phi
  // differing by a multiple of 2 pi, so the angle error is wrapped.
  Vector5 mean = Vector5::Zero();
  for (const TrajectoryRecord& r : log.tick(ticks - 1)) mean += r.eta.vector();
  mean /= static_cast<double>(n);
  Vector5 err = mean - scenario.eta_goal.vector();
  err(0) = wrap_angle(err(0));
  m.goal_param_error = err.norm();
  return m;
}

/// p <- p + dt * v.
inline std::vector<Vec2> step_world(std::span<const Vec2> positions,
                                    std::span<const Vec2> velocities,
                                    double dt) {
  if (positions.size() != velocities.size()) {
    throw ValidationError("step_world: size mismatch");
  }
  if (!(dt > 0.0)) throw ValidationError("step_world: dt must be positive");
  std::vector<Vec2> out(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out[i] = positions[i] + dt * velocities[i];
  }
  return out;
}

inline std::vector<Vec2> initial_positions(const Scenario& scenario) {
  std::vector<Vec2> p(scenario.robot_count());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = apply_transform(scenario.eta_init, scenario.base[i]);
    if (scenario.init_noise_sigma > 0.0) {
      NormalStream noise(scenario.rng_seed, i);
      const double nx = noise.normal();
      const double ny = noise.normal();
      p[i] += scenario.init_noise_sigma * Vec2(nx, ny);
    }
  }
  return p;
}

namespace detail {

// Rethrows the in-flight exception as the same library error type with
// `where` prepended to its message.
inline std::exception_ptr with_context(const std::string& where) {
  try {
    throw;
  } catch (const NonFiniteInput& e) {
    return std::make_exception_ptr(NonFiniteInput(where + ": " + e.what()));
  } catch (const OutsideHardSet& e) {
    return std::make_exception_ptr(OutsideHardSet(where + ": " + e.what()));
  } catch (const SingularMatrix& e) {
    return std::make_exception_ptr(SingularMatrix(where + ": " + e.what()));
  } catch (const ValidationError& e) {
    return std::make_exception_ptr(ValidationError(where + ": " + e.what()));
  } catch (const Error& e) {
    return std::make_exception_ptr(Error(where + ": " + e.what()));
  } catch (...) {
    return std::current_exception();
  }
}

}  // namespace detail

/// Inputs of one plan_tick call, as seen by the robot.
struct PlanInput {
  std::size_t robot = 0;
  const PlannerState& state;
  const Vec2& v_des;
  std::span<const FormationParams> inbox;
  const Vec2& position;
  double dt = 0.0;
};

struct RunOptions {
  unsigned workers = 1;  // threads for the robot phase
  // Called before every plan_tick. Invoked concurrently when workers > 1.
  std::function<void(const PlanInput&)> on_plan;
};

struct RunResult {
  TrajectoryLog log;
  RunMetrics metrics;
  std::size_t penetration_ticks = 0;  // robot-ticks inside an inflated obstacle
};

inline RunResult run(const Scenario& scenario, const RunOptions& options = {}) {
  scenario.validate();
  const std::size_t n = scenario.robot_count();
  const std::size_t ticks = scenario.tick_count();
  const double dt = scenario.dt;

  std::vector<PlannerState> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    states[i] = {scenario.eta_init, scenario.base[i], scenario.gains_for(i),
                 scenario.spec};
  }
  std::vector<Vec2> positions = initial_positions(scenario);
  std::vector<FormationParams> etas(n, scenario.eta_init);
  std::vector<std::vector<FormationParams>> inbox;
  std::vector<std::size_t> degree(n);

  // Robot-phase outputs, one slot per robot.
  std::vector<TickResult> results(n);
  std::vector<char> penetrated(n, 0);

  RunResult out;
  out.log.robots = n;
  out.log.records.reserve(n * ticks);

  std::size_t tick = 0;
  bool done = ticks == 0;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto prepare_tick = [&] {
    const CommGraph graph = build_graph(positions, scenario.r_c, scenario.r_d);
    inbox = rigidform::exchange(graph, etas);
    for (std::size_t i = 0; i < n; ++i) degree[i] = graph.degree(i);
  };

  auto robot_phase = [&](std::size_t i) {
    try {
      std::vector<Vec2> others;
      others.reserve(n - 1);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) others.push_back(positions[j]);
      }
      const Vec2 goal = apply_transform(scenario.eta_goal, scenario.base[i]);
      const DesiredVelocity dv = desired_velocity(
          positions[i], goal, scenario.obstacles, others, scenario.apf);
      penetrated[i] = dv.penetration ? 1 : 0;
      if (options.on_plan) {
        options.on_plan(
            {i, states[i], dv.velocity, inbox[i], positions[i], dt});
      }
      results[i] = plan_tick(states[i], dv.velocity, inbox[i], positions[i], dt);
    } catch (...) {
      const std::string where =
          "robot " + std::to_string(i) + " at tick " + std::to_string(tick);
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = detail::with_context(where);
    }
  };

  auto serial_phase = [&] {
    if (failure) {
      done = true;
      return;
    }
    std::vector<Vec2> velocities(n);
    const double t = static_cast<double>(tick) * dt;
    for (std::size_t i = 0; i < n; ++i) {
      const TickResult& r = results[i];
      out.log.records.push_back({t, i, positions[i], r.v_cmd, states[i].eta,
                                 r.a_s, degree[i]});
      out.penetration_ticks += penetrated[i];
      velocities[i] = r.v_cmd;
      states[i].eta = r.new_eta;
      etas[i] = r.new_eta;
    }
    positions = step_world(positions, velocities, dt);
    ++tick;
    if (tick == ticks) {
      done = true;
      return;
    }
    prepare_tick();
  };

  if (!done) prepare_tick();

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    while (!done) {
      for (std::size_t i = 0; i < n; ++i) robot_phase(i);
      serial_phase();
    }
  } else {
    auto completion = [&]() noexcept {
      try {
        serial_phase();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        done = true;
      }
    };
    std::barrier sync(static_cast<std::ptrdiff_t>(workers), completion);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          while (!done) {
            for (std::size_t i = w; i < n; i += workers) robot_phase(i);
            sync.arrive_and_wait();
          }
        });
      }
    }
  }

  if (failure) std::rethrow_exception(failure);
  out.metrics = compute_metrics(out.log, scenario);
  return out;
}

}  // namespace rigidform
