// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "surfdyn/projpoint.hpp"

namespace surfdyn::surfaces {

using IntMat = std::vector<std::vector<BigInt>>;
using IntCube = std::vector<IntMat>;

// Point of the ambient product variety: one projective factor per axis.
struct SurfacePoint {
  std::vector<ProjPoint> factors;

  bool operator==(const SurfacePoint& o) const { return factors == o.factors; }
  bool operator!=(const SurfacePoint& o) const { return !(*this == o); }
  bool operator<(const SurfacePoint& o) const { return factors < o.factors; }
  std::string str() const;
  // Largest coordinate bit length across factors.
  size_t max_bits() const;
};

// Smooth (2,2)-type surface in P^2 x P^2 cut out by a (1,1) form L and a
// (2,2) form Q. l[i][j] is the coefficient of x_i y_j. q[m][n] indexes the
// degree-2 monomial bases (x0^2, x0x1, x0x2, x1^2, x1x2, x2^2) on each side.
struct WehlerSpec {
  IntMat l;  // 3 x 3
  IntMat q;  // 6 x 6
};

// (2,2,2) hypersurface in P^1 x P^1 x P^1. c[a][b][m] indexes the bases
// (u0^2, u0u1, u1^2) per factor.
struct TripleSpec {
  IntCube c;  // 3 x 3 x 3
};

enum class Family { wehler, triple };

// A surface carrying its fiberwise involutions. Axes are 1-based: for the
// Wehler family axis k swaps the two sheets over the projection that
// remembers factor k; for the triple family axis k moves factor k and fixes
// the others. The composite automorphism applies the involutions in axis
// order (and in reverse for the inverse).
class Surface {
 public:
  static Surface wehler(WehlerSpec spec);
  static Surface triple(TripleSpec spec);

  Family family() const { return family_; }
  int num_axes() const { return family_ == Family::wehler ? 2 : 3; }
  const WehlerSpec& wehler_spec() const { return wspec_; }
  const TripleSpec& triple_spec() const { return tspec_; }

  // Exact membership test. Throws InvalidPoint on shape mismatch.
  bool on_surface(const SurfacePoint& p) const;
  // Throws NotOnSurface instead of returning false.
  void require_on_surface(const SurfacePoint& p) const;

  // Fiberwise involution along the given axis. Pre: p on surface (checked).
  // Throws DegenerateLine / DegenerateFiber when the fiber through p is not
  // a two-point scheme.
  SurfacePoint involution(int axis, const SurfacePoint& p) const;

  // Composite automorphism and its inverse. Pre: p on surface (checked).
  SurfacePoint forward(const SurfacePoint& p) const;
  SurfacePoint backward(const SurfacePoint& p) const;

  // Unchecked variants used by orbit iteration after one initial membership
  // check; involutions preserve the surface exactly.
  SurfacePoint forward_unchecked(const SurfacePoint& p) const;
  SurfacePoint backward_unchecked(const SurfacePoint& p) const;

  // Enumerates rational points with base-point naive height <= height_bound
  // by scanning fibers whose residual quadratic has square discriminant.
  // Wehler: bases x in P^2, fibers along axis 1. Triple: bases (u, v) in
  // P^1 x P^1 with h(u) + h(v) <= bound, fibers along axis 3. Degenerate
  // fibers are skipped. Results are deduplicated, in deterministic scan
  // order; limit 0 means no limit. threads > 1 splits the scan into chunks
  // whose results are merged in scan order, so output does not depend on
  // thread count.
  std::vector<SurfacePoint> find_points(double height_bound, size_t limit = 0,
                                        int threads = 1) const;

  // Naive height of the point under the sum-of-factors polarization.
  Real ambient_height(const SurfacePoint& p, int prec = default_precision()) const;

 private:
  Surface() = default;
  SurfacePoint involution_unchecked(int axis, const SurfacePoint& p) const;

  Family family_ = Family::wehler;
  WehlerSpec wspec_;
  TripleSpec tspec_;
};

// Other root of A s^2 + B s t + C t^2 = 0 given the root (s0 : t0), by
// Vieta's formulas. Pre: coefficients not all zero, (s0, t0) a root.
// Returns unnormalized projective coordinates.
std::pair<BigInt, BigInt> vieta_other_root(const BigInt& a, const BigInt& b, const BigInt& c,
                                           const BigInt& s0, const BigInt& t0);

}  // namespace surfdyn::surfaces
