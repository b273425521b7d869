// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "surfdyn/heights.hpp"
#include "surfdyn/orbit.hpp"

namespace surfdyn::dynamics {

struct CountingRow {
  int log_t = 0;       // grid position, T = e^{log_t}
  double t = 0;        // e^{log_t}
  long n = -1;         // #{z in the two-sided orbit : h <= T} (-1 when forward-only)
  long n_plus = 0;     // forward-orbit count
  long sigma = 0;      // #{n in Z : lambda^n h+ + lambda^{-n} h- <= T}
  double predicted_n = 0;    // (2 / log lambda) log T - orbit_invariant
  double bracket_value = 0;  // sigma - log(T^2 / (4 h+ h-)) / log lambda
  double bracket_lo = 0;     // -1 - slack
  double bracket_hi = 0;     // 1 + log4/log lambda + slack
  bool pass = false;
};

struct CountingReport {
  heights::CanonicalHeightResult canonical;  // at the center
  double orbit_invariant = 0;  // log(h+ h-) / log lambda
  std::vector<CountingRow> rows;
  long fwd_reach = 0, bwd_reach = 0;  // orbit range used for the counts
  bool forward_only = false;
};

// Orbit-counting statistics over the grid log T in [tmin, tmax] (integer
// steps). Canonical heights are computed at `depth`; orbit legs are
// extended until they certify coverage at the largest grid T. Pre: pt on
// surface and non-periodic with nonvanishing canonical heights (else
// PeriodicCenter); coverage failures raise InsufficientOrbit.
CountingReport counting_report(const heights::DynamicalSystem& sys,
                               const surfaces::SurfacePoint& pt, int depth, int tmin = 4,
                               int tmax = 12, bool forward_only = false,
                               int prec = default_precision());

struct PeriodicHit {
  surfaces::SurfacePoint point;
  long period = 0;
  bool reverified = false;  // explicit f^p(pt) == pt recheck
  double h_ambient = 0;     // naive height of the hit
  double h_d = 0;           // canonical height estimate
  double error_bound = 0;
};

struct ScanReport {
  std::vector<surfaces::SurfacePoint> searched;  // all points found under the bound
  std::vector<PeriodicHit> hits;
  std::optional<double> max_periodic_height;
  long indeterminate = 0;  // points whose status degeneracy left unresolved
};

// find_points followed by detect_periodic on every point found. Hits are
// re-verified by explicit iteration and annotated with canonical-height
// estimates at the given depth.
ScanReport periodic_scan(const heights::DynamicalSystem& sys, double height_bound,
                         long max_period, int depth = 3, size_t limit = 0, int threads = 1,
                         int prec = default_precision());

}  // namespace surfdyn::dynamics
