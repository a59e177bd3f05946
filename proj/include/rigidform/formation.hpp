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

// Formation transformation p = R(phi) * diag(s) * c + t, its Jacobian with
// respect to the parameter vector, and the right pseudo-inverse of that
// Jacobian. Parameter order is (phi, s_x, s_y, t_x, t_y) everywhere.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "rigidform/errors.hpp"

namespace rigidform {

using Vec2 = Eigen::Vector2d;
using Vector5 = Eigen::Matrix<double, 5, 1>;
using Jacobian = Eigen::Matrix<double, 2, 5>;
using PseudoInverse = Eigen::Matrix<double, 5, 2>;

/// Rotation angle, per-axis scaling and translation of a base configuration.
/// The angle is not wrapped; it evolves continuously.
struct FormationParams {
  double phi = 0.0;
  Vec2 s = Vec2::Ones();
  Vec2 t = Vec2::Zero();

  static FormationParams from_vector(const Vector5& v) {
    return {v(0), Vec2(v(1), v(2)), Vec2(v(3), v(4))};
  }

  Vector5 vector() const {
    Vector5 v;
    v << phi, s.x(), s.y(), t.x(), t.y();
    return v;
  }

  bool finite() const {
    return std::isfinite(phi) && s.allFinite() && t.allFinite();
  }

  /// Finite with strictly positive scaling.
  bool valid() const { return finite() && s.x() > 0.0 && s.y() > 0.0; }

  friend bool operator==(const FormationParams& a, const FormationParams& b) {
    return a.phi == b.phi && a.s == b.s && a.t == b.t;
  }
};

/// Time derivative of FormationParams.
struct ParamDerivative {
  double d_phi = 0.0;
  Vec2 d_s = Vec2::Zero();
  Vec2 d_t = Vec2::Zero();

  static ParamDerivative from_vector(const Vector5& v) {
    return {v(0), Vec2(v(1), v(2)), Vec2(v(3), v(4))};
  }

  Vector5 vector() const {
    Vector5 v;
    v << d_phi, d_s.x(), d_s.y(), d_t.x(), d_t.y();
    return v;
  }

  bool finite() const {
    return std::isfinite(d_phi) && d_s.allFinite() && d_t.allFinite();
  }

  ParamDerivative& operator+=(const ParamDerivative& o) {
    d_phi += o.d_phi;
    d_s += o.d_s;
    d_t += o.d_t;
    return *this;
  }

  friend ParamDerivative operator+(ParamDerivative a,
                                   const ParamDerivative& b) {
    a += b;
    return a;
  }

  friend ParamDerivative operator*(double k, const ParamDerivative& d) {
    return {k * d.d_phi, k * d.d_s, k * d.d_t};
  }

  friend bool operator==(const ParamDerivative& a, const ParamDerivative& b) {
    return a.d_phi == b.d_phi && a.d_s == b.d_s && a.d_t == b.d_t;
  }
};

/// Explicit Euler step eta + dt * d.
inline FormationParams integrate(const FormationParams& eta,
                                 const ParamDerivative& d, double dt) {
  return {eta.phi + dt * d.d_phi, eta.s + dt * d.d_s, eta.t + dt * d.d_t};
}

/// Slot positions c_i of the untransformed formation, indexed by robot id.
class BaseConfiguration {
 public:
  BaseConfiguration() = default;
  explicit BaseConfiguration(std::vector<Vec2> slots)
      : slots_(std::move(slots)) {
    if (slots_.empty()) {
      throw ValidationError("base configuration needs at least one slot");
    }
    for (const Vec2& c : slots_) {
      if (!c.allFinite()) {
        throw ValidationError("base configuration slot is not finite");
      }
    }
  }

  /// n x m grid with unit spacing centred on the origin; grid(3, 3) gives
  /// slots in {-1, 0, 1} x {-1, 0, 1}, enumerated row by row from the bottom.
  static BaseConfiguration grid(int cols, int rows, double spacing = 1.0) {
    std::vector<Vec2> slots;
    const double x0 = -0.5 * (cols - 1) * spacing;
    const double y0 = -0.5 * (rows - 1) * spacing;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        slots.emplace_back(x0 + c * spacing, y0 + r * spacing);
      }
    }
    return BaseConfiguration(std::move(slots));
  }

  std::size_t size() const { return slots_.size(); }
  const Vec2& operator[](std::size_t i) const { return slots_[i]; }
  const std::vector<Vec2>& slots() const { return slots_; }

  friend bool operator==(const BaseConfiguration& a,
                         const BaseConfiguration& b) {
    return a.slots_ == b.slots_;
  }

 private:
  std::vector<Vec2> slots_;
};

inline Vec2 apply_transform(const FormationParams& eta, const Vec2& c) {
  const double cp = std::cos(eta.phi);
  const double sp = std::sin(eta.phi);
  const double x = eta.s.x() * c.x();
  const double y = eta.s.y() * c.y();
  return {cp * x - sp * y + eta.t.x(), sp * x + cp * y + eta.t.y()};
}

inline Jacobian jacobian(const FormationParams& eta, const Vec2& c) {
  const double cp = std::cos(eta.phi);
  const double sp = std::sin(eta.phi);
  const double x = eta.s.x() * c.x();
  const double y = eta.s.y() * c.y();
  Jacobian j;
  // clang-format off
  j << -sp * x - cp * y, cp * c.x(), -sp * c.y(), 1.0, 0.0,
        cp * x - sp * y, sp * c.x(),  cp * c.y(), 0.0, 1.0;
  // clang-format on
  return j;
}

/// Threshold on det(J J^T) below which pseudo_inverse() gives up.
inline constexpr double kSingularDeterminant = 1e-12;

/// Right Moore-Penrose inverse J^T (J J^T)^-1 with a closed-form 2x2 inverse.
inline PseudoInverse pseudo_inverse(const Jacobian& j) {
  const Eigen::Matrix2d g = j * j.transpose();
  const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  if (!(std::abs(det) > kSingularDeterminant)) {
    throw SingularMatrix("J J^T is singular (det = " + std::to_string(det) +
                         ")");
  }
  Eigen::Matrix2d inv;
  inv << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  inv /= det;
  return j.transpose() * inv;
}

}  // namespace rigidform
