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

// Constraint handling on the scaling parameters s = (s_x, s_y).
//
// Both the soft set C_s and the hard set C_h are a quarter disc clipped from
// below: { s : s_x >= eps, s_y >= eps, |s| <= r }. The soft set is only
// preferred (the planner is pulled toward it); the hard set is never left.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Core>

#include "rigidform/errors.hpp"
#include "rigidform/formation.hpp"

namespace rigidform {

struct ConstraintSpec {
  double eps_soft = 0.75;
  double eps_hard = 0.75;
  double r_soft = 2.5;
  double r_hard = 2.5;

  /// Where the soft lower bound meets the soft circle.
  double delta_soft() const {
    return std::sqrt(r_soft * r_soft - eps_soft * eps_soft);
  }

  void validate() const {
    auto fail = [](const char* what) {
      throw ValidationError(std::string("constraint spec: ") + what);
    };
    if (!(std::isfinite(eps_soft) && std::isfinite(eps_hard) &&
          std::isfinite(r_soft) && std::isfinite(r_hard))) {
      fail("all bounds must be finite");
    }
    if (!(eps_soft > 0 && eps_hard > 0 && r_soft > 0 && r_hard > 0)) {
      fail("all bounds must be strictly positive");
    }
    if (!(eps_hard <= eps_soft)) fail("eps_hard must not exceed eps_soft");
    if (!(r_soft <= r_hard)) fail("r_soft must not exceed r_hard");
    if (!(eps_soft * std::sqrt(2.0) < r_soft)) {
      fail("eps_soft * sqrt(2) must be below r_soft (empty soft set)");
    }
  }

  friend bool operator==(const ConstraintSpec&,
                         const ConstraintSpec&) = default;
};

namespace detail {

// Relative slack on the circle test so that points produced by the radial
// projection (whose norm may round to r + 1 ulp) are recognised as fixed
// points. Keeps the projection exactly idempotent.
inline constexpr double kCircleSlack = 8 * std::numeric_limits<double>::epsilon();

}  // namespace detail

/// Projection of the scaling onto the soft set, evaluated as seven ordered
/// cases (first match wins).
inline Vec2 project_scaling_soft(const Vec2& s, const ConstraintSpec& spec) {
  const double eps = spec.eps_soft;
  const double r = spec.r_soft;
  const double delta = spec.delta_soft();
  const double x = s.x();
  const double y = s.y();

  if (x < eps && y < eps) return {eps, eps};
  if (x >= eps && x < delta && y < eps) return {x, eps};
  if (x < eps && y >= eps && y < delta) return {eps, y};
  if (x >= delta && y < eps) return {delta, eps};
  if (x < eps && y >= delta) return {eps, delta};

  const double norm = std::hypot(x, y);
  if (x >= eps && y >= eps && norm > r * (1.0 + detail::kCircleSlack)) {
    // Radial foot point, clamped to the arc between the two corners. Far from
    // the diagonal the foot point would drop below eps; the corner is the
    // nearest admissible point there.
    const Vec2 radial = (r / norm) * s;
    if (radial.y() < eps) return {delta, eps};
    if (radial.x() < eps) return {eps, delta};
    return radial;
  }
  return s;
}

/// Soft projection on the full parameter vector; phi and t pass through.
inline FormationParams project_soft(const FormationParams& eta,
                                    const ConstraintSpec& spec) {
  return {eta.phi, project_scaling_soft(eta.s, spec), eta.t};
}

inline bool in_soft_set(const Vec2& s, const ConstraintSpec& spec,
                        double tol = 0.0) {
  return s.x() >= spec.eps_soft - tol && s.y() >= spec.eps_soft - tol &&
         s.norm() <= spec.r_soft + tol;
}

inline bool in_hard_set(const Vec2& s, const ConstraintSpec& spec,
                        double tol = 0.0) {
  return s.x() >= spec.eps_hard - tol && s.y() >= spec.eps_hard - tol &&
         s.norm() <= spec.r_hard + tol;
}

/// Euclidean distance from s (in the positive quadrant) to the soft set.
inline double distance_to_soft_set(const Vec2& s, const ConstraintSpec& spec) {
  return (s - project_scaling_soft(s, spec)).norm();
}

/// Tolerance on the precondition of hard_scale_factor(). Euler steps that
/// stop exactly on the boundary may land a few ulps outside.
inline constexpr double kHardSetTolerance = 1e-9;

/// Largest a in [0, 1] such that s + a * ds stays in the hard set.
///
/// Candidates are 1, the crossings of the two lower bounds (only components
/// moving downward produce one) and the exit root of |s + a ds|^2 = r^2.
/// Since s lies inside the disc the smaller root is never positive, so the
/// exit root is the larger one.
inline double hard_scale_factor(const Vec2& s, const Vec2& ds,
                                const ConstraintSpec& spec) {
  if (!s.allFinite() || !ds.allFinite()) {
    throw NonFiniteInput("hard_scale_factor: non-finite input");
  }
  if (!in_hard_set(s, spec, kHardSetTolerance)) {
    std::ostringstream msg;
    msg << "hard_scale_factor: s = (" << s.x() << ", " << s.y()
        << ") is outside the hard constraint set";
    throw OutsideHardSet(msg.str());
  }

  double a = 1.0;
  for (int k = 0; k < 2; ++k) {
    if (ds(k) < 0.0) {
      a = std::min(a, std::max(0.0, (spec.eps_hard - s(k)) / ds(k)));
    }
  }

  const double qa = ds.dot(ds);
  if (qa > 0.0) {
    const double qb = 2.0 * ds.dot(s);
    const double qc = s.dot(s) - spec.r_hard * spec.r_hard;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Larger root without cancellation.
      const double root =
          qb <= 0.0 ? (-qb + sq) / (2.0 * qa) : (2.0 * -qc) / (qb + sq);
      a = std::min(a, std::max(0.0, root));
    }
  }
  return std::clamp(a, 0.0, 1.0);
}

/// Diagonal scaling diag(a_phi, a_s, a_s, a_t, a_t) of a parameter derivative.
struct ScaleDerivativeScaling {
  double a_phi = 1.0;
  double a_s = 1.0;
  double a_t = 1.0;

  ParamDerivative apply(const ParamDerivative& d) const {
    return {a_phi * d.d_phi, a_s * d.d_s, a_t * d.d_t};
  }

  Eigen::Matrix<double, 5, 5> matrix() const {
    Vector5 diag;
    diag << a_phi, a_s, a_s, a_t, a_t;
    return diag.asDiagonal();
  }
};

inline ScaleDerivativeScaling assemble_A(double a_s) {
  if (!(a_s >= 0.0 && a_s <= 1.0)) {
    throw ValidationError("assemble_A: a_s must lie in [0, 1]");
  }
  return {1.0, a_s, 1.0};
}

}  // namespace rigidform
