// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "surfdyn/projpoint.hpp"
#include "surfdyn/quadnum.hpp"

namespace surfdyn::mobius {

// Automorphism of P^1 over Q given by an integer matrix with nonzero
// determinant, stored primitive (entry gcd 1, first nonzero entry
// positive); projectively this loses nothing.
class MobiusMap {
 public:
  MobiusMap(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d);
  explicit MobiusMap(const std::array<std::array<BigInt, 2>, 2>& m);

  const std::array<std::array<BigInt, 2>, 2>& entries() const { return m_; }
  BigInt det() const;
  BigInt trace() const { return m_[0][0] + m_[1][1]; }
  bool is_scalar() const;

  ProjPoint apply(const ProjPoint& x) const;
  ProjPoint apply_inverse(const ProjPoint& x) const;  // via the adjugate
  bool fixes(const ProjPoint& x) const;

 private:
  std::array<std::array<BigInt, 2>, 2> m_;
};

// Trichotomy of P^1 automorphisms by the rational invariant
// t = tr^2/det - 2 (the eigenvalue ratio plus its inverse):
//   I_periodic:    finite projective order (ratio a root of unity)
//   II_two_fixed:  two fixed points, eigenvalue ratio of infinite order
//   III_parabolic: a single fixed point (non-scalar with tr^2 = 4 det)
enum class MapType { I_periodic, II_two_fixed, III_parabolic };

std::string map_type_name(MapType t);

struct FixedPoint {
  QuadNum x0, x1;  // projective coordinates over Q or a real quadratic field
};

struct Classification {
  MapType type = MapType::I_periodic;
  BigRat t;           // tr^2/det - 2
  bool scalar = false;
  int order = 0;      // smallest n with F^n scalar, for type I; 0 otherwise
  std::vector<FixedPoint> fixed;  // empty when scalar or complex_fixed
  bool complex_fixed = false;     // fixed points lie in an imaginary field
  long field_d = 1;   // squarefree d of the fixed-point field (1 = rational)
};

// Exact classification; throws NotInvertible on det = 0 (at construction).
Classification classify(const MobiusMap& f);

// Exact #{y in the full orbit of x : naive height <= t}. Type II counts by
// iteration until heights escape with margin; type III counts through the
// exact linear normal form of a parabolic map, so no tail is missed.
// Throws PeriodicCenter for periodic x (any x under type I, or a fixed
// point) and InsufficientOrbit when the count range is impractically big.
long p1_count(const MobiusMap& f, const ProjPoint& x, double t);

struct GrowthReport {
  std::vector<std::pair<double, long>> counts;  // (T, N(T)) over the grid
  bool exponential = false;                     // regime with lower residual
  double residual_linear = 0;                   // relative l2 misfit of N ~ a T
  double residual_exponential = 0;              // same for N ~ b e^T
};

// Fits the count function against both growth laws over the given grid.
// Throws PeriodicMap for type I and PeriodicCenter for fixed centers.
GrowthReport growth_regime(const MobiusMap& f, const ProjPoint& x,
                           const std::vector<double>& t_grid);

}  // namespace surfdyn::mobius
