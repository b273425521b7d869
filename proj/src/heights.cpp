// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include "surfdyn/heights.hpp"

#include <algorithm>

#include "surfdyn/errors.hpp"

namespace surfdyn::heights {

Real height(const HeightSpec& spec, const surfaces::SurfacePoint& pt, int prec) {
  if (spec.coeffs.size() != pt.factors.size())
    throw InvalidPoint("height spec and point have different factor counts");
  Real h(prec);
  for (size_t i = 0; i < spec.coeffs.size(); ++i)
    h = h + spec.coeffs[i].to_real(prec) * pt.factors[i].naive_height(prec);
  return h;
}

namespace {

// One-sided telescoping data: heights h_D(p_n) for n = 0..reach along one leg.
struct Leg {
  std::vector<Real> h;  // indexed by step count along the leg
};

Leg leg_heights(const HeightSpec& spec, const dynamics::OrbitRecord& rec, long shift, int dir,
                int depth, int prec) {
  Leg leg;
  for (int k = 0; k <= depth; ++k) {
    long n = shift + dir * k;
    if (!rec.has(n)) break;
    leg.h.push_back(height(spec, rec.at(n).point, prec));
  }
  return leg;
}

}  // namespace

CanonicalHeightResult canonical_heights(const DynamicalSystem& sys,
                                        const dynamics::OrbitRecord& rec, long shift, int depth,
                                        int prec) {
  if (depth < 1) throw InvalidDepth("depth must be >= 1");
  if (!rec.has(shift)) throw InsufficientOrbit("record does not contain the evaluation point");

  Leg fwd = leg_heights(sys.d_plus, rec, shift, +1, depth, prec);
  Leg bwd = leg_heights(sys.d_minus, rec, shift, -1, depth, prec);
  // Each leg is truncated independently at whatever the record reaches, so
  // evaluating at a shifted center of a shared record loses accuracy on one
  // side only. The reported depth and error bound use the shorter leg.
  int n_plus = static_cast<int>(fwd.h.size()) - 1;
  int n_minus = static_cast<int>(bwd.h.size()) - 1;
  int used = std::min(n_plus, n_minus);
  if (used < 1) throw InsufficientOrbit("orbit degenerates before the first step");

  Real lam = sys.lambda.to_real(prec);
  // Empirical one-step defect: max |h(p_{k+1}) - lambda h(p_k)| over both legs.
  Real c_hat(prec);
  for (int k = 0; k + 1 <= n_plus; ++k) c_hat = max(c_hat, abs(fwd.h[k + 1] - lam * fwd.h[k]));
  for (int k = 0; k + 1 <= n_minus; ++k) c_hat = max(c_hat, abs(bwd.h[k + 1] - lam * bwd.h[k]));

  CanonicalHeightResult r;
  r.depth_used = used;
  r.c_hat = c_hat;
  // Exact powers, one rounding each: estimates at matched truncations then
  // agree bit-for-bit.
  r.scale_plus = sys.lambda.pow(-n_plus);
  r.scale_minus = sys.lambda.pow(-n_minus);
  r.raw_plus = fwd.h[n_plus];
  r.raw_minus = bwd.h[n_minus];
  r.h_plus = r.scale_plus.to_real(prec) * r.raw_plus;
  r.h_minus = r.scale_minus.to_real(prec) * r.raw_minus;

  Real lam_inv = sys.lambda.pow(-1).to_real(prec);
  // Tail bound: each leg contributes at most c_hat lambda^{-n}/(lambda-1);
  // lambda >= 2 makes the two-leg sum at most this single expression.
  r.error_bound = c_hat * sys.lambda.pow(-used).to_real(prec) / (Real(1.0, prec) - lam_inv);

  Real zero(prec);
  if (r.h_plus < zero && abs(r.h_plus) <= r.error_bound) {
    r.h_plus = zero;
    r.clamped_plus = true;
  }
  if (r.h_minus < zero && abs(r.h_minus) <= r.error_bound) {
    r.h_minus = zero;
    r.clamped_minus = true;
  }
  r.h_d = r.h_plus + r.h_minus;
  r.vanish_plus = r.h_plus <= r.error_bound;
  r.vanish_minus = r.h_minus <= r.error_bound;
  r.vanish_d = r.h_d <= Real(2.0, prec) * r.error_bound;
  return r;
}

CanonicalHeightResult canonical_heights(const DynamicalSystem& sys,
                                        const surfaces::SurfacePoint& pt, int depth, int prec) {
  if (depth < 1) throw InvalidDepth("depth must be >= 1");
  sys.surface.require_on_surface(pt);
  auto rec = dynamics::orbit(sys.surface, pt, -static_cast<long>(depth), depth, prec);
  return canonical_heights(sys, rec, 0, depth, prec);
}

ResidualResult functional_equation_residual(const DynamicalSystem& sys,
                                            const surfaces::SurfacePoint& pt, int depth,
                                            int prec) {
  if (depth < 1) throw InvalidDepth("depth must be >= 1");
  sys.surface.require_on_surface(pt);
  // One shared record spanning +-depth serves all three evaluation points;
  // the shifted ones run one step shallower on their short leg, which the
  // tolerance absorbs with room to spare.
  long d = depth;
  auto rec = dynamics::orbit(sys.surface, pt, -d, d, prec);

  ResidualResult out;
  out.at_center = canonical_heights(sys, rec, 0, depth, prec);
  out.at_forward = canonical_heights(sys, rec, +1, depth, prec);
  out.at_backward = canonical_heights(sys, rec, -1, depth, prec);

  Real lam = sys.lambda.to_real(prec);
  Real lam_inv = sys.lambda.pow(-1).to_real(prec);
  Real combo = lam + lam_inv;
  out.residual = abs(out.at_forward.h_d + out.at_backward.h_d - combo * out.at_center.h_d);
  out.tolerance = Real(3.0, prec) * combo * out.at_center.error_bound;
  out.within = out.residual <= out.tolerance;
  return out;
}

}  // namespace surfdyn::heights
