// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <future>
#include <set>

#include "surfdyn/counting.hpp"
#include "surfdyn/errors.hpp"
#include "surfdyn/heights.hpp"
#include "surfdyn/orbit.hpp"

namespace surfdyn::dynamics {

namespace {

// Heights far beyond this climb over the starting height cannot return:
// any cycle's heights oscillate within the one-step defect envelope, which
// for the in-scope surfaces is a few units.
constexpr double kNoReturnClimb = 50.0;
// Coordinate-size ceiling for orbit extension (bits), matching the
// practical depth ceiling where coordinates reach ~10^7 digits.
constexpr size_t kMaxCoordBits = size_t(1) << 25;

OrbitEntry make_entry(const surfaces::Surface& s, long n, surfaces::SurfacePoint p, int prec) {
  OrbitEntry e;
  e.n = n;
  e.h_ambient = s.ambient_height(p, prec);
  e.coord_bits = p.max_bits();
  e.point = std::move(p);
  return e;
}

// Rebuilds rec.entries for [n_min, n_max] out of a detected cycle. The
// record is guaranteed to contain p consecutive entries once a period p is
// found, so every residue class has a representative.
void fill_from_cycle(OrbitRecord& rec, long n_min, long n_max) {
  long p = *rec.period;
  std::vector<OrbitEntry> cycle(static_cast<size_t>(p));
  for (long n = rec.trunc_min; n < rec.trunc_min + p; ++n) {
    long r = ((n % p) + p) % p;
    cycle[static_cast<size_t>(r)] = rec.at(n);
  }
  std::vector<OrbitEntry> out;
  for (long n = n_min; n <= n_max; ++n) {
    long r = ((n % p) + p) % p;
    OrbitEntry e = cycle[static_cast<size_t>(r)];
    e.n = n;
    out.push_back(std::move(e));
  }
  rec.entries = std::move(out);
  rec.trunc_min = n_min;
  rec.trunc_max = n_max;
  rec.fwd_blocked = rec.bwd_blocked = false;
}

}  // namespace

const OrbitEntry& OrbitRecord::at(long n) const {
  if (!has(n)) throw InsufficientOrbit("orbit record does not cover the requested index");
  return entries[static_cast<size_t>(n - trunc_min)];
}

void extend_orbit(const surfaces::Surface& s, OrbitRecord& rec, long n_min, long n_max,
                  int prec) {
  if (n_min > 0 || n_max < 0) throw InvalidDepth("orbit range must contain 0");
  if (rec.period) {
    if (n_min < rec.trunc_min || n_max > rec.trunc_max)
      fill_from_cycle(rec, std::min(n_min, rec.trunc_min), std::max(n_max, rec.trunc_max));
    return;
  }
  // Forward leg.
  while (rec.trunc_max < n_max && !rec.fwd_blocked) {
    const auto& last = rec.entries.back();
    if (last.coord_bits > kMaxCoordBits)
      throw InsufficientOrbit("orbit coordinates exceed the size ceiling");
    try {
      auto next = s.forward_unchecked(last.point);
      bool is_center = (next == rec.center);
      rec.entries.push_back(make_entry(s, rec.trunc_max + 1, std::move(next), prec));
      ++rec.trunc_max;
      if (is_center) {
        rec.period = rec.trunc_max;
        fill_from_cycle(rec, std::min(n_min, rec.trunc_min), std::max(n_max, rec.trunc_max));
        return;
      }
    } catch (const DegenerateFiber& e) {
      rec.fwd_blocked = true;
      if (!rec.degenerate_hit) rec.degenerate_hit = {e.axis, rec.trunc_max + 1};
    } catch (const DegenerateLine& e) {
      rec.fwd_blocked = true;
      if (!rec.degenerate_hit) rec.degenerate_hit = {e.axis, rec.trunc_max + 1};
    }
  }
  // Backward leg.
  while (rec.trunc_min > n_min && !rec.bwd_blocked) {
    const auto& first = rec.entries.front();
    if (first.coord_bits > kMaxCoordBits)
      throw InsufficientOrbit("orbit coordinates exceed the size ceiling");
    try {
      auto prev = s.backward_unchecked(first.point);
      bool is_center = (prev == rec.center);
      rec.entries.insert(rec.entries.begin(),
                         make_entry(s, rec.trunc_min - 1, std::move(prev), prec));
      --rec.trunc_min;
      if (is_center) {
        rec.period = -rec.trunc_min;
        fill_from_cycle(rec, std::min(n_min, rec.trunc_min), std::max(n_max, rec.trunc_max));
        return;
      }
    } catch (const DegenerateFiber& e) {
      rec.bwd_blocked = true;
      if (!rec.degenerate_hit) rec.degenerate_hit = {e.axis, rec.trunc_min - 1};
    } catch (const DegenerateLine& e) {
      rec.bwd_blocked = true;
      if (!rec.degenerate_hit) rec.degenerate_hit = {e.axis, rec.trunc_min - 1};
    }
  }
}

OrbitRecord orbit(const surfaces::Surface& s, const surfaces::SurfacePoint& pt, long n_min,
                  long n_max, int prec) {
  if (n_min > 0 || n_max < 0) throw InvalidDepth("orbit range must contain 0");
  s.require_on_surface(pt);
  OrbitRecord rec;
  rec.center = pt;
  rec.entries.push_back(make_entry(s, 0, pt, prec));
  rec.trunc_min = rec.trunc_max = 0;
  extend_orbit(s, rec, n_min, n_max, prec);
  return rec;
}

std::optional<long> detect_periodic(const surfaces::Surface& s, const surfaces::SurfacePoint& pt,
                                    long max_period) {
  if (max_period < 1) throw InvalidDepth("max period must be >= 1");
  s.require_on_surface(pt);
  const int prec = 64;
  double h0 = s.ambient_height(pt, prec).to_double();
  double prev = h0;
  surfaces::SurfacePoint q = pt;
  for (long n = 1; n <= max_period; ++n) {
    try {
      q = s.forward_unchecked(q);
    } catch (const Error&) {
      throw Indeterminate("orbit hit a degenerate fiber before the period could resolve");
    }
    if (q == pt) return n;
    double h = s.ambient_height(q, prec).to_double();
    // A climbing orbit far above its start can no longer return.
    if (h > h0 + kNoReturnClimb && h > prev + kNoReturnClimb) return std::nullopt;
    prev = h;
  }
  return std::nullopt;
}

namespace {

// Coverage check for one leg: every orbit point outside the computed range
// must have height > t. True when the leg's outermost height exceeds t
// (heights escape monotonically past the canonical crossover) or the orbit
// is finite (periodic).
void require_leg_coverage(const OrbitRecord& rec, double t, bool forward) {
  if (rec.period) return;
  const OrbitEntry& edge = forward ? rec.entries.back() : rec.entries.front();
  if (edge.h_ambient.to_double() <= t)
    throw InsufficientOrbit("orbit leg does not certify coverage at the requested height");
}

}  // namespace

long count_orbit(const OrbitRecord& rec, double t, bool forward_only) {
  if (rec.entries.empty()) throw InsufficientOrbit("empty orbit record");
  if (t < 0) return 0;
  if (rec.period) {
    long p = *rec.period;
    if (rec.trunc_max - rec.trunc_min + 1 < p)
      throw InsufficientOrbit("periodic record does not contain a full cycle");
    long c = 0;
    for (long k = 0; k < p; ++k)
      if (rec.at(rec.trunc_min + k).h_ambient.to_double() <= t) ++c;
    return c;
  }
  require_leg_coverage(rec, t, true);
  if (!forward_only) require_leg_coverage(rec, t, false);
  long c = 0;
  for (const auto& e : rec.entries) {
    if (forward_only && e.n < 0) continue;
    if (e.h_ambient.to_double() <= t) ++c;
  }
  return c;
}

namespace {

// #{n in Z : lambda^n hp + lambda^{-n} hm <= t} for hp, hm > 0.
long sigma_count(const QuadNum& lambda, const Real& hp, const Real& hm, double t, int prec) {
  if (hp.sign() <= 0 || hm.sign() <= 0)
    throw InvalidPoint("sigma count needs strictly positive canonical heights");
  Real tt(t, prec);
  long c = 0;
  for (int dir = 0; dir < 2; ++dir) {
    // dir 0: n >= 0; dir 1: n < 0.
    for (long k = (dir == 0 ? 0 : 1);; ++k) {
      long n = dir == 0 ? k : -k;
      QuadNum ln = lambda.pow(n);
      Real grow = ln.to_real(prec) * hp;
      Real term = grow + lambda.pow(-n).to_real(prec) * hm;
      if (term <= tt) {
        ++c;
      } else if ((dir == 0 ? grow : lambda.pow(-n).to_real(prec) * hm) > tt) {
        // The escaping term alone exceeds t; no later n on this side counts.
        break;
      }
      if (k > 4096) throw InsufficientOrbit("sigma scan failed to terminate");
    }
  }
  return c;
}

}  // namespace

CountingReport counting_report(const heights::DynamicalSystem& sys,
                               const surfaces::SurfacePoint& pt, int depth, int tmin, int tmax,
                               bool forward_only, int prec) {
  if (depth < 1) throw InvalidDepth("depth must be >= 1");
  if (tmin > tmax || tmin < 0) throw InvalidDepth("bad T grid");
  sys.surface.require_on_surface(pt);

  auto rec = orbit(sys.surface, pt, -static_cast<long>(depth), depth, prec);
  if (rec.period) throw PeriodicCenter("center is periodic; counting statistics need an infinite orbit");
  auto canonical = heights::canonical_heights(sys, rec, 0, depth, prec);
  if (canonical.vanish_plus || canonical.vanish_minus)
    throw PeriodicCenter(
        "canonical height vanishes within error; center is periodic or too close to it");

  double t_top = std::exp(static_cast<double>(tmax));
  // Extend legs until they certify coverage at the top of the grid.
  for (int guard = 0; guard < 64; ++guard) {
    bool need_fwd = !rec.period && !rec.fwd_blocked &&
                    rec.entries.back().h_ambient.to_double() <= t_top;
    bool need_bwd = !forward_only && !rec.period && !rec.bwd_blocked &&
                    rec.entries.front().h_ambient.to_double() <= t_top;
    if (!need_fwd && !need_bwd) break;
    extend_orbit(sys.surface, rec, rec.trunc_min - (need_bwd ? 1 : 0),
                 rec.trunc_max + (need_fwd ? 1 : 0), prec);
  }

  CountingReport rep;
  rep.canonical = canonical;
  rep.forward_only = forward_only;
  rep.fwd_reach = rec.trunc_max;
  rep.bwd_reach = rec.trunc_min;

  Real lam = sys.lambda.to_real(prec);
  double log_lam = lam.log().to_double();
  const Real& hp = canonical.h_plus;
  const Real& hm = canonical.h_minus;
  double inv = (hp * hm).log().to_double() / log_lam;
  rep.orbit_invariant = inv;

  double eps = canonical.error_bound.to_double();
  double hpd = hp.to_double(), hmd = hm.to_double();

  for (int k = tmin; k <= tmax; ++k) {
    CountingRow row;
    row.log_t = k;
    row.t = std::exp(static_cast<double>(k));
    row.n_plus = count_orbit(rec, row.t, true);
    row.n = forward_only ? -1 : count_orbit(rec, row.t, false);
    row.sigma = sigma_count(sys.lambda, hp, hm, row.t, prec);
    row.predicted_n = 2.0 * k / log_lam - inv;
    row.bracket_value = row.sigma - std::log(row.t * row.t / (4.0 * hpd * hmd)) / log_lam;
    // Propagate the canonical-height error into the bracket: first-order
    // slack in the log term plus the count's sensitivity to shifting the
    // heights by +/- error_bound.
    double slack = (eps / hpd + eps / hmd) / log_lam;
    Real eb = canonical.error_bound;
    long sig_hi = sigma_count(sys.lambda, hp - eb, hm - eb, row.t, prec);
    long sig_lo = sigma_count(sys.lambda, hp + eb, hm + eb, row.t, prec);
    slack += std::max(std::labs(sig_hi - row.sigma), std::labs(row.sigma - sig_lo));
    row.bracket_lo = -1.0 - slack;
    row.bracket_hi = 1.0 + std::log(4.0) / log_lam + slack;
    row.pass = row.bracket_value >= row.bracket_lo && row.bracket_value <= row.bracket_hi;
    rep.rows.push_back(row);
  }
  return rep;
}

ScanReport periodic_scan(const heights::DynamicalSystem& sys, double height_bound,
                         long max_period, int depth, size_t limit, int threads, int prec) {
  if (max_period < 1) throw InvalidDepth("max period must be >= 1");
  ScanReport rep;
  rep.searched = sys.surface.find_points(height_bound, limit, threads);

  struct Verdict {
    std::optional<long> period;
    bool indeterminate = false;
  };
  auto judge = [&](const surfaces::SurfacePoint& p) {
    Verdict v;
    try {
      v.period = detect_periodic(sys.surface, p, max_period);
    } catch (const Indeterminate&) {
      v.indeterminate = true;
    }
    return v;
  };

  std::vector<Verdict> verdicts(rep.searched.size());
  int nt = std::max(1, threads);
  if (nt == 1 || rep.searched.size() < 2) {
    for (size_t i = 0; i < rep.searched.size(); ++i) verdicts[i] = judge(rep.searched[i]);
  } else {
    size_t chunk = (rep.searched.size() + nt - 1) / nt;
    std::vector<std::future<void>> futs;
    for (int t = 0; t < nt; ++t) {
      size_t lo = std::min(rep.searched.size(), t * chunk);
      size_t hi = std::min(rep.searched.size(), lo + chunk);
      futs.push_back(std::async(std::launch::async, [&, lo, hi] {
        for (size_t i = lo; i < hi; ++i) verdicts[i] = judge(rep.searched[i]);
      }));
    }
    for (auto& f : futs) f.get();
  }

  for (size_t i = 0; i < rep.searched.size(); ++i) {
    if (verdicts[i].indeterminate) {
      ++rep.indeterminate;
      continue;
    }
    if (!verdicts[i].period) continue;
    const auto& p = rep.searched[i];
    PeriodicHit hit;
    hit.point = p;
    hit.period = *verdicts[i].period;
    // Independent recheck through the fully validated path.
    surfaces::SurfacePoint q = p;
    for (long s = 0; s < hit.period; ++s) q = sys.surface.forward(q);
    hit.reverified = (q == p);
    hit.h_ambient = sys.surface.ambient_height(p, prec).to_double();
    try {
      auto ch = heights::canonical_heights(sys, p, depth, prec);
      hit.h_d = ch.h_d.to_double();
      hit.error_bound = ch.error_bound.to_double();
    } catch (const Error&) {
      hit.h_d = std::nan("");
      hit.error_bound = std::nan("");
    }
    if (!rep.max_periodic_height || hit.h_ambient > *rep.max_periodic_height)
      rep.max_periodic_height = hit.h_ambient;
    rep.hits.push_back(std::move(hit));
  }
  return rep;
}

}  // namespace surfdyn::dynamics
