#pragma once

/// @file model.hpp
/// @brief Right-hand side of the generalized two-component Camassa–Holm system
///
///   m_t + v^p m_x + a v^{p−1} v_x m = 0,   m = u − u_xx,
///   n_t + u^q n_x + b u^{q−1} u_x n = 0,   n = v − v_xx,
///
/// written in nonlocal form u_t + v^p u_x + I₁(u,v) = 0, v_t + u^q v_x + I₂(u,v) = 0.

#include <utility>

#include "gch2/spectral.hpp"

namespace gch2 {

/// The quadruple (p, q, a, b) selecting one member of the family.
struct SystemParams {
  int p = 1;
  int q = 1;
  double a = 2.0;
  double b = 2.0;

  /// Throws std::invalid_argument unless p, q >= 1 and a, b are finite.
  void validate() const;
  /// Parameters of the system seen with the two components exchanged.
  SystemParams swapped() const noexcept { return {q, p, b, a}; }
  /// Highest polynomial degree among the nonlinear terms, max(p, q) + 1.
  int max_degree() const noexcept { return (p > q ? p : q) + 1; }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct StatePair {
  SpectralField u;
  SpectralField v;

  StatePair(SpectralField u_, SpectralField v_);

  const PeriodicGrid& grid() const noexcept { return u.grid(); }
  StatePair swapped() const { return {v, u}; }

  StatePair& operator+=(const StatePair& other);
  StatePair& operator-=(const StatePair& other);
  StatePair& operator*=(double c);
  friend StatePair operator+(StatePair lhs, const StatePair& rhs) { return lhs += rhs; }
  friend StatePair operator-(StatePair lhs, const StatePair& rhs) { return lhs -= rhs; }
  friend StatePair operator*(double c, StatePair s) { return s *= c; }
};

/// I₁ = (1−∂²)⁻¹[(a/p)(v^p)_x u + ((p−a)/p)(v^p)_x u_xx] + (1−∂²)⁻¹∂_x((v^p)_x u_x).
SpectralField nonlocal_I1(const StatePair& state, const SystemParams& params);

/// I₂, the mirror of I₁ under (u, p, a) ↔ (v, q, b).
SpectralField nonlocal_I2(const StatePair& state, const SystemParams& params);

/// Time derivative (−v^p u_x − I₁, −u^q v_x − I₂).
StatePair rhs(const StatePair& state, const SystemParams& params);

/// Momentum variables (m, n) = (u − u_xx, v − v_xx).
std::pair<SpectralField, SpectralField> momentum(const StatePair& state);

}  // namespace gch2
