// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "surfdyn/real.hpp"
#include "surfdyn/surfaces.hpp"

namespace surfdyn::dynamics {

struct OrbitEntry {
  long n = 0;
  surfaces::SurfacePoint point;
  Real h_ambient;      // naive height under the sum-of-factors polarization
  size_t coord_bits = 0;  // largest coordinate bit length at this step
};

// Two-sided orbit segment of a point under the composite automorphism.
// Entries are sorted by n and cover [trunc_min, trunc_max]; a leg stops
// early when it hits a degenerate fiber (recorded in degenerate_hit) and
// when the center is detected periodic the cycle is reused instead of
// iterating further.
struct OrbitRecord {
  surfaces::SurfacePoint center;
  std::vector<OrbitEntry> entries;
  long trunc_min = 0;
  long trunc_max = 0;
  std::optional<std::pair<int, long>> degenerate_hit;  // (axis, first bad step)
  std::optional<long> period;
  bool fwd_blocked = false;  // forward leg ended at a degenerate fiber
  bool bwd_blocked = false;  // backward leg ended at a degenerate fiber

  bool has(long n) const { return n >= trunc_min && n <= trunc_max; }
  // Entry at index n. Throws InsufficientOrbit when n was not computed.
  const OrbitEntry& at(long n) const;
};

// Iterates the automorphism both ways from pt, recording normalized points
// and their heights. Pre: n_min <= 0 <= n_max; pt on surface. Degeneracy
// truncates the affected leg rather than failing.
OrbitRecord orbit(const surfaces::Surface& s, const surfaces::SurfacePoint& pt, long n_min,
                  long n_max, int prec = default_precision());

// Extends an existing record in place to cover [n_min, n_max] where possible.
void extend_orbit(const surfaces::Surface& s, OrbitRecord& rec, long n_min, long n_max,
                  int prec = default_precision());

// Smallest period 1 <= p <= max_period with f^p(pt) = pt exactly, if any.
// Iteration bails out early once heights climb far beyond any possible
// return, so non-periodic points stay cheap. Throws Indeterminate when a
// degenerate fiber interrupts the search before it can resolve.
std::optional<long> detect_periodic(const surfaces::Surface& s, const surfaces::SurfacePoint& pt,
                                    long max_period);

// Number of distinct orbit points with ambient height <= t (both legs, or
// the forward leg only). Pre: the record certifies coverage - each counted
// leg either ends above t or is exhausted by periodicity; otherwise throws
// InsufficientOrbit.
long count_orbit(const OrbitRecord& rec, double t, bool forward_only = false);

}  // namespace surfdyn::dynamics
