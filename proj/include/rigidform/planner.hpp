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

// Per-robot formation planner. One tick maps the robot's desired velocity
// into parameter space, adds consensus and soft-constraint terms, limits the
// scaling derivative so the hard set is never left, integrates the local
// parameters and maps the result back to a velocity command.
//
// Everything here is a function of one robot's own state plus the parameter
// vectors received from its neighbours.

#pragma once

#include <cmath>
#include <span>

#include "rigidform/constraint.hpp"
#include "rigidform/errors.hpp"
#include "rigidform/formation.hpp"

namespace rigidform {

struct PlannerGains {
  double lambda = 32.0;  // consensus stiffness, 1/s
  double mu = 20.0;      // soft-constraint stiffness, 1/s
  double k_fb = 2.0;     // perturbation-rejection gain, 1/s

  void validate() const {
    for (double g : {lambda, mu, k_fb}) {
      if (!std::isfinite(g) || g < 0.0) {
        throw ValidationError(
            "planner gains must be finite and non-negative");
      }
    }
  }

  friend bool operator==(const PlannerGains&, const PlannerGains&) = default;
};

struct PlannerState {
  FormationParams eta;  // this robot's copy of the formation parameters
  Vec2 slot = Vec2::Zero();
  PlannerGains gains;
  ConstraintSpec spec;
};

inline ParamDerivative tracking_term(const PlannerState& state,
                                     const Vec2& v_des) {
  const Vector5 d = pseudo_inverse(jacobian(state.eta, state.slot)) * v_des;
  return ParamDerivative::from_vector(d);
}

inline ParamDerivative consensus_term(
    const FormationParams& eta_self,
    std::span<const FormationParams> eta_neighbors, double lambda) {
  const Vector5 self = eta_self.vector();
  Vector5 sum = Vector5::Zero();
  for (const FormationParams& n : eta_neighbors) {
    sum += self - n.vector();
  }
  return ParamDerivative::from_vector(-lambda * sum);
}

inline ParamDerivative soft_term(const FormationParams& eta,
                                 const ConstraintSpec& spec, double mu) {
  if (mu == 0.0) return {};
  const Vec2 proj = project_scaling_soft(eta.s, spec);
  return {0.0, -mu * (eta.s - proj), Vec2::Zero()};
}

struct ConstrainedDerivative {
  ParamDerivative d_eta;
  double a_s = 1.0;
};

/// Scales the raw derivative so that the Euler step s + dt * d_s stays in the
/// hard set.
inline ConstrainedDerivative constrain_derivative(const FormationParams& eta,
                                                  const ParamDerivative& raw,
                                                  const ConstraintSpec& spec,
                                                  double dt) {
  const double a_s = hard_scale_factor(eta.s, dt * raw.d_s, spec);
  return {assemble_A(a_s).apply(raw), a_s};
}

/// v = J d_eta - K (p - (R S c + t)), evaluated at the given eta.
inline Vec2 recover_velocity(const FormationParams& eta, const Vec2& slot,
                             const ParamDerivative& d_eta,
                             const Vec2& p_current, double k_fb) {
  const Vec2 feed_forward = jacobian(eta, slot) * d_eta.vector();
  return feed_forward - k_fb * (p_current - apply_transform(eta, slot));
}

struct TickResult {
  Vec2 v_cmd = Vec2::Zero();
  FormationParams new_eta;
  ParamDerivative d_eta;  // after hard-constraint scaling
  double a_s = 1.0;
};

/// One planner tick. The velocity is recovered from the pre-integration
/// parameters; new_eta is the explicit Euler update.
inline TickResult plan_tick(const PlannerState& state, const Vec2& v_des,
                            std::span<const FormationParams> eta_neighbors,
                            const Vec2& p_current, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("plan_tick: dt must be positive and finite");
  }
  if (!state.eta.finite() || !state.slot.allFinite() ||
      !v_des.allFinite() || !p_current.allFinite()) {
    throw NonFiniteInput("plan_tick: non-finite robot state or input");
  }
  for (const FormationParams& n : eta_neighbors) {
    if (!n.finite()) {
      throw NonFiniteInput("plan_tick: non-finite neighbour parameters");
    }
  }

  ParamDerivative raw = tracking_term(state, v_des);
  raw += consensus_term(state.eta, eta_neighbors, state.gains.lambda);
  raw += soft_term(state.eta, state.spec, state.gains.mu);

  const ConstrainedDerivative c =
      constrain_derivative(state.eta, raw, state.spec, dt);

  TickResult out;
  out.d_eta = c.d_eta;
  out.a_s = c.a_s;
  out.new_eta = integrate(state.eta, c.d_eta, dt);
  out.v_cmd = recover_velocity(state.eta, state.slot, c.d_eta, p_current,
                               state.gains.k_fb);
  if (!out.v_cmd.allFinite() || !out.new_eta.finite()) {
    throw NonFiniteInput("plan_tick: produced a non-finite result");
  }
  return out;
}

}  // namespace rigidform
