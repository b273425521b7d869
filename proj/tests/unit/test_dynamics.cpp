// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "surfdyn/counting.hpp"
#include "surfdyn/errors.hpp"
#include "surfdyn/orbit.hpp"
#include "surfdyn/presets.hpp"
#include "test_util.hpp"

using namespace surfdyn;
using namespace surfdyn::dynamics;
using testutil::spt;

namespace {
constexpr int kPrec = 96;
surfaces::SurfacePoint balanced_point() { return spt({0, 1, -1}, {1, 1, 1}); }
}  // namespace

TEST_CASE("orbit records cover the requested window in order") {
  auto w = presets::get("wehler");
  auto pt = balanced_point();

  auto solo = orbit(w.system.surface, pt, 0, 0, kPrec);
  REQUIRE(solo.entries.size() == 1);
  CHECK(solo.entries[0].n == 0);
  CHECK(solo.entries[0].point == pt);

  auto rec = orbit(w.system.surface, pt, -3, 3, kPrec);
  REQUIRE(rec.entries.size() == 7);
  for (long n = -3; n <= 3; ++n) {
    CHECK(rec.at(n).n == n);
    CHECK(w.system.surface.on_surface(rec.at(n).point));
  }
  CHECK(rec.at(1).point == w.system.surface.forward(pt));
  CHECK(rec.at(-1).point == w.system.surface.backward(pt));
  CHECK_THROWS_AS(rec.at(5), InsufficientOrbit);
  CHECK_FALSE(rec.degenerate_hit.has_value());

  // Extension matches a fresh two-sided record entry for entry.
  auto small = orbit(w.system.surface, pt, -1, 1, kPrec);
  extend_orbit(w.system.surface, small, -3, 3, kPrec);
  REQUIRE(small.entries.size() == rec.entries.size());
  for (long n = -3; n <= 3; ++n) CHECK(small.at(n).point == rec.at(n).point);
}

TEST_CASE("periodic centers cycle exactly and are detected") {
  auto w = presets::get("wehler");
  auto scan = periodic_scan(w.system, 4.0, 12, 3, 0, 1, kPrec);
  REQUIRE_FALSE(scan.hits.empty());
  const auto& hit = scan.hits.front();
  CHECK(hit.reverified);

  auto p = detect_periodic(w.system.surface, hit.point, 12);
  REQUIRE(p.has_value());
  CHECK(*p == hit.period);

  // Periodicity is an orbit invariant.
  auto fwd = w.system.surface.forward(hit.point);
  auto pf = detect_periodic(w.system.surface, fwd, 12);
  REQUIRE(pf.has_value());
  CHECK(*pf == hit.period);

  // The stored orbit repeats with the exact period.
  auto rec = orbit(w.system.surface, hit.point, -6, 6, kPrec);
  REQUIRE(rec.period.has_value());
  CHECK(*rec.period == hit.period);
  for (long n = -6; n + hit.period <= 6; ++n)
    CHECK(rec.at(n).point == rec.at(n + hit.period).point);

  // A finite orbit exhausts: the count saturates at the cycle length.
  CHECK(count_orbit(rec, 1e9) == hit.period);

  CHECK_FALSE(detect_periodic(w.system.surface, balanced_point(), 12).has_value());
}

TEST_CASE("forward heights grow geometrically at rate lambda") {
  auto w = presets::get("wehler");
  auto rec = orbit(w.system.surface, balanced_point(), 0, 6, kPrec);
  double lam = w.system.lambda.to_double();
  for (long n = 4; n < 6; ++n) {
    double ratio = rec.at(n + 1).h_ambient.to_double() / rec.at(n).h_ambient.to_double();
    CHECK(ratio == doctest::Approx(lam).epsilon(0.05));
  }
}

TEST_CASE("count_orbit agrees with a direct recount and decomposes by leg") {
  auto w = presets::get("wehler");
  auto rec = orbit(w.system.surface, balanced_point(), -4, 4, kPrec);

  CHECK(count_orbit(rec, -0.5) == 0);
  CHECK(count_orbit(rec, 0.0) >= 1);  // the center has ambient height 0

  long prev = 0;
  for (double t : {0.0, 1.0, 2.0, 4.0, 6.0, 8.0}) {
    long n = count_orbit(rec, t);
    CHECK(n >= prev);
    prev = n;

    // Direct recount over the stored entries (all points are distinct:
    // the center is not periodic).
    long brute = 0;
    for (const auto& e : rec.entries)
      if (e.h_ambient.to_double() <= t) ++brute;
    CHECK(n == brute);

    long fwd = count_orbit(rec, t, true);
    long bwd = 0;
    for (const auto& e : rec.entries)
      if (e.n <= 0 && e.h_ambient.to_double() <= t) ++bwd;
    if (n > 0) CHECK(n == fwd + bwd - 1);  // center shared by both legs
  }

  // Thresholds beyond the certified coverage are refused.
  CHECK_THROWS_AS(count_orbit(rec, 1e9), InsufficientOrbit);
}

TEST_CASE("counting report brackets and predictions hold on the grid") {
  auto w = presets::get("wehler");
  auto rep = counting_report(w.system, balanced_point(), 3, 4, 12, false, kPrec);
  REQUIRE(rep.rows.size() == 9);
  double lam = w.system.lambda.to_double();
  double loglam = std::log(lam);

  for (const auto& row : rep.rows) {
    CHECK(row.pass);
    CHECK(row.bracket_lo <= row.bracket_value);
    CHECK(row.bracket_value <= row.bracket_hi);
    CHECK(row.t == doctest::Approx(std::exp(row.log_t)).epsilon(1e-12));
    CHECK(row.predicted_n ==
          doctest::Approx((2.0 / loglam) * row.log_t - rep.orbit_invariant).epsilon(1e-9));
    // Testable form of the refined counting law: N sits in a fixed window
    // around the prediction across the whole grid.
    double window = 2.0 + 2.0 * std::log(4.0) / loglam + 0.5;
    CHECK(std::fabs(static_cast<double>(row.n) - row.predicted_n) <= window);
    CHECK(row.n == row.n_plus + (row.n - row.n_plus));  // shape sanity
    CHECK(row.n >= row.n_plus);
  }

  // Two-sided slope at the top of the grid: N / log T near 2 / log lambda.
  const auto& top = rep.rows.back();
  CHECK(static_cast<double>(top.n) / top.log_t ==
        doctest::Approx(2.0 / loglam).epsilon(0.15));
  // Forward slope within 20%.
  CHECK(static_cast<double>(top.n_plus) / top.log_t ==
        doctest::Approx(1.0 / loglam).epsilon(0.20));
}

TEST_CASE("orbit invariant is stable along the orbit and under forward-only mode") {
  auto w = presets::get("wehler");
  auto pt = balanced_point();
  // Depth 5: two steps forward the backward height is ~lambda^-2 smaller and
  // must still clear the truncation error bound decisively.
  auto rep0 = counting_report(w.system, pt, 5, 4, 10, false, kPrec);
  auto rep1 = counting_report(w.system, w.system.surface.forward(pt), 5, 4, 10, false, kPrec);
  auto rep2 = counting_report(w.system, w.system.surface.forward(w.system.surface.forward(pt)),
                              5, 4, 10, false, kPrec);
  CHECK(std::fabs(rep0.orbit_invariant - rep1.orbit_invariant) < 0.05);
  CHECK(std::fabs(rep0.orbit_invariant - rep2.orbit_invariant) < 0.05);

  auto fwd = counting_report(w.system, pt, 3, 4, 10, true, kPrec);
  CHECK(fwd.forward_only);
  for (const auto& row : fwd.rows) {
    CHECK(row.n == -1);  // two-sided count not reported
    CHECK(row.n_plus >= 0);
  }

  // Periodic centers have no counting asymptotics.
  auto scan = periodic_scan(w.system, 4.0, 12, 3, 0, 1, kPrec);
  REQUIRE_FALSE(scan.hits.empty());
  CHECK_THROWS_AS(counting_report(w.system, scan.hits.front().point, 3, 4, 8, false, kPrec),
                  PeriodicCenter);
}

TEST_CASE("periodic scan freezes the fixture's periodic set") {
  auto w = presets::get("wehler");
  auto scan = periodic_scan(w.system, 4.0, 12, 3, 0, 1, kPrec);
  CHECK(scan.searched.size() == 143);
  CHECK(scan.hits.size() == 3);
  CHECK(scan.indeterminate == 0);
  REQUIRE(scan.max_periodic_height.has_value());
  CHECK(*scan.max_periodic_height == 0.0);  // coordinate points have height 0
  for (const auto& hit : scan.hits) {
    CHECK(hit.period == 3);
    CHECK(hit.reverified);
    CHECK(hit.h_d <= hit.error_bound);
  }

  // Stability under a larger bound: the same periodic set, found again.
  auto scan5 = periodic_scan(w.system, 5.0, 12, 3, 0, 1, kPrec);
  REQUIRE(scan5.hits.size() == scan.hits.size());
  std::set<surfaces::SurfacePoint> a, b;
  for (const auto& h : scan.hits) a.insert(h.point);
  for (const auto& h : scan5.hits) b.insert(h.point);
  CHECK(a == b);
  CHECK(*scan5.max_periodic_height == *scan.max_periodic_height);

  // The limit parameter truncates the search deterministically.
  auto part = periodic_scan(w.system, 4.0, 12, 3, 50, 1, kPrec);
  CHECK(part.searched.size() == 50);
  auto full_head = std::vector<surfaces::SurfacePoint>(scan.searched.begin(),
                                                       scan.searched.begin() + 50);
  CHECK(part.searched == full_head);
}

TEST_CASE("triple preset scan verifies its periodic points too") {
  auto t = presets::get("triple");
  auto scan = periodic_scan(t.system, 4.0, 12, 3, 0, 1, kPrec);
  CHECK(scan.searched.size() == 75);
  for (const auto& hit : scan.hits) {
    CHECK(hit.reverified);
    CHECK(hit.h_d <= hit.error_bound);
    auto p = detect_periodic(t.system.surface, hit.point, 12);
    REQUIRE(p.has_value());
    CHECK(*p == hit.period);
  }
}
