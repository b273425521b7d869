// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "surfdyn/orbit.hpp"
#include "surfdyn/quadnum.hpp"
#include "surfdyn/real.hpp"
#include "surfdyn/surfaces.hpp"

namespace surfdyn::heights {

// Height function h_D for D = sum_i coeffs[i] * H_i, where H_i is the
// hyperplane pullback from factor i: h_D(p) = sum_i coeffs[i] *
// naive_height(factor i). Additive and exactly functorial by construction.
struct HeightSpec {
  std::vector<QuadNum> coeffs;  // one per factor
};

Real height(const HeightSpec& spec, const surfaces::SurfacePoint& pt,
            int prec = default_precision());

// A surface together with the spectral data its canonical heights need:
// the divisor classes scaled by the dynamical degree on either side.
struct DynamicalSystem {
  surfaces::Surface surface;
  HeightSpec d_plus;   // expanding class: h(f(p)) ~ lambda * h(p)
  HeightSpec d_minus;  // contracting class: h(f^{-1}(p)) ~ lambda * h(p)
  QuadNum lambda;      // dynamical degree, > 1
};

struct CanonicalHeightResult {
  Real h_plus;   // lambda^{-n} h_{D+}(f^n pt), clamped into [0, inf)
  Real h_minus;  // lambda^{-n} h_{D-}(f^{-n} pt), clamped into [0, inf)
  Real h_d;      // h_plus + h_minus
  int depth_used = 0;   // n actually reached on both legs
  Real error_bound;     // c_hat * lambda^{-n} / (1 - lambda^{-1})
  Real c_hat;           // max observed one-step defect along the orbit
  bool clamped_plus = false, clamped_minus = false;
  bool vanish_plus = false, vanish_minus = false, vanish_d = false;
  // Raw ingredients: deep-end heights and the exact scale factor, so that
  // matched-truncation identities hold bit-for-bit (lambda powers are
  // combined exactly and rounded once).
  Real raw_plus, raw_minus;
  QuadNum scale_plus;   // lambda^{-(forward leg length)}
  QuadNum scale_minus;  // lambda^{-(backward leg length)}
};

// Canonical heights by truncated telescoping, depth steps each way.
// Pre: pt on surface, depth >= 1 (else InvalidDepth). A degenerate fiber
// truncates to the achieved depth; the result reports what was reached.
CanonicalHeightResult canonical_heights(const DynamicalSystem& sys,
                                        const surfaces::SurfacePoint& pt, int depth,
                                        int prec = default_precision());

// Same, computed from a precomputed orbit record around index `shift`
// (the evaluation point is record entry `shift`). The record must reach
// shift +/- depth unless truncated by degeneracy.
CanonicalHeightResult canonical_heights(const DynamicalSystem& sys,
                                        const dynamics::OrbitRecord& rec, long shift, int depth,
                                        int prec = default_precision());

struct ResidualResult {
  CanonicalHeightResult at_center, at_forward, at_backward;
  Real residual;   // |h_D(f pt) + h_D(f^-1 pt) - (lambda + lambda^-1) h_D(pt)|
  Real tolerance;  // 3 (lambda + lambda^-1) * error_bound at the center
  bool within = false;
};

// Truncation residual of the invariance identity satisfied by h_D.
ResidualResult functional_equation_residual(const DynamicalSystem& sys,
                                            const surfaces::SurfacePoint& pt, int depth,
                                            int prec = default_precision());

}  // namespace surfdyn::heights
