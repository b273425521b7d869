// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "surfdyn/errors.hpp"
#include "surfdyn/mobius.hpp"
#include "test_util.hpp"

using namespace surfdyn;
using namespace surfdyn::mobius;

namespace {

using Mat2 = std::array<std::array<BigInt, 2>, 2>;

Mat2 mat_mul2(const Mat2& a, const Mat2& b) {
  Mat2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

bool is_scalar2(const Mat2& m) {
  return m[0][1] == 0 && m[1][0] == 0 && m[0][0] == m[1][1] && m[0][0] != 0;
}

// Smallest n <= cap with F^n projectively the identity; 0 if none.
int brute_order(const MobiusMap& f, int cap = 24) {
  Mat2 p = f.entries(), acc = p;
  for (int n = 1; n <= cap; ++n) {
    if (is_scalar2(acc)) return n;
    acc = mat_mul2(acc, p);
  }
  return 0;
}

ProjPoint pp(long a, long b) { return ProjPoint::from_ints({a, b}); }

}  // namespace

TEST_CASE("classification oracles") {
  auto rot = classify(MobiusMap(0, -1, 1, 0));
  CHECK(rot.type == MapType::I_periodic);
  CHECK(rot.t == BigRat(-2));
  CHECK(rot.order == 2);
  CHECK(rot.complex_fixed);
  CHECK(rot.fixed.empty());
  CHECK(map_type_name(rot.type) == "I_periodic");

  auto diag = classify(MobiusMap(2, 0, 0, 1));
  CHECK(diag.type == MapType::II_two_fixed);
  CHECK(diag.t == BigRat(5, 2));
  REQUIRE(diag.fixed.size() == 2);
  CHECK(diag.field_d == 1);
  // Fixed set is exactly {(1:0), (0:1)}.
  bool saw_inf = false, saw_zero = false;
  for (const auto& fp : diag.fixed) {
    if (fp.x1.is_zero()) saw_inf = true;
    if (fp.x0.is_zero()) saw_zero = true;
  }
  CHECK(saw_inf);
  CHECK(saw_zero);
  CHECK(map_type_name(diag.type) == "II_two_fixed");

  auto shear = classify(MobiusMap(1, 1, 0, 1));
  CHECK(shear.type == MapType::III_parabolic);
  REQUIRE(shear.fixed.size() == 1);
  CHECK(shear.fixed[0].x1.is_zero());  // the single fixed point is (1:0)
  CHECK(map_type_name(shear.type) == "III_parabolic");

  auto golden = classify(MobiusMap(2, 1, 1, 1));
  CHECK(golden.type == MapType::II_two_fixed);
  CHECK(golden.t == BigRat(7));
  CHECK(golden.field_d == 5);  // fixed points generate Q(sqrt 5)
  REQUIRE(golden.fixed.size() == 2);
  for (const auto& fp : golden.fixed) {
    // Verify (2 x0 + x1 : x0 + x1) == (x0 : x1) by cross-multiplication.
    QuadNum num = QuadNum(2L) * fp.x0 + fp.x1;
    QuadNum den = fp.x0 + fp.x1;
    CHECK(num * fp.x1 == den * fp.x0);
  }

  auto sc = classify(MobiusMap(3, 0, 0, 3));
  CHECK(sc.scalar);
  CHECK(sc.type == MapType::I_periodic);
  CHECK(sc.order == 1);

  CHECK_THROWS_AS(MobiusMap(1, 1, 1, 1), NotInvertible);
  CHECK_THROWS_AS(MobiusMap(0, 0, 0, 0), NotInvertible);
}

TEST_CASE("matrices are stored primitive with a fixed sign") {
  MobiusMap f(2, 2, 2, 4);
  CHECK(f.entries() == Mat2{{{BigInt(1), BigInt(1)}, {BigInt(1), BigInt(2)}}});
  MobiusMap g(-1, 0, 0, -1);
  CHECK(g.entries() == Mat2{{{BigInt(1), BigInt(0)}, {BigInt(0), BigInt(1)}}});
  CHECK(g.is_scalar());
}

TEST_CASE("apply and its inverse act projectively") {
  MobiusMap f(2, 1, 1, 1);
  CHECK(f.apply(pp(1, 2)) == pp(4, 3));
  CHECK(f.fixes(pp(1, 2)) == false);

  testutil::Rng rng(23);
  for (int i = 0; i < 30; ++i) {
    long a = rng.pick(-9, 9), b = rng.pick(-9, 9), c = rng.pick(-9, 9), d = rng.pick(-9, 9);
    if (a * d - b * c == 0) continue;
    MobiusMap h(a, b, c, d);
    ProjPoint x = pp(rng.pick(-20, 20), rng.pick(1, 20));
    CHECK(h.apply_inverse(h.apply(x)) == x);
    CHECK(h.apply(h.apply_inverse(x)) == x);
  }

  MobiusMap diag(2, 0, 0, 1);
  CHECK(diag.fixes(pp(1, 0)));
  CHECK(diag.fixes(pp(0, 1)));
  CHECK_FALSE(diag.fixes(pp(1, 1)));
}

TEST_CASE("classification is conjugation-invariant") {
  testutil::Rng rng(31);
  int tested = 0;
  while (tested < 30) {
    long a = rng.pick(-9, 9), b = rng.pick(-9, 9), c = rng.pick(-9, 9), d = rng.pick(-9, 9);
    if (a * d - b * c == 0) continue;
    // Unimodular conjugator P from shears, so P^{-1} F P stays integral.
    long s = rng.pick(-3, 3), u = rng.pick(-3, 3);
    // P = [[1, s], [0, 1]] * [[1, 0], [u, 1]]
    long p00 = 1 + s * u, p01 = s, p10 = u, p11 = 1;
    // P^{-1} = adj(P) since det P = 1.
    long q00 = p11, q01 = -p01, q10 = -p10, q11 = p00;
    long e = q00 * a + q01 * c, f2 = q00 * b + q01 * d;
    long g = q10 * a + q11 * c, h2 = q10 * b + q11 * d;
    long r00 = e * p00 + f2 * p10, r01 = e * p01 + f2 * p11;
    long r10 = g * p00 + h2 * p10, r11 = g * p01 + h2 * p11;

    auto base = classify(MobiusMap(a, b, c, d));
    auto conj = classify(MobiusMap(r00, r01, r10, r11));
    CHECK(base.type == conj.type);
    CHECK(base.t == conj.t);
    ++tested;
  }
}

TEST_CASE("finite-order maps have order at most 12, matching brute force") {
  testutil::Rng rng(37);
  int found = 0;
  while (found < 20) {
    long a = rng.pick(-4, 4), b = rng.pick(-4, 4), c = rng.pick(-4, 4), d = rng.pick(-4, 4);
    if (a * d - b * c == 0) continue;
    MobiusMap f(a, b, c, d);
    auto cls = classify(f);
    if (cls.type != MapType::I_periodic) continue;
    int n = brute_order(f);
    REQUIRE(n > 0);
    CHECK(n <= 12);
    CHECK(cls.order == n);
    ++found;
  }
}

TEST_CASE("orbit counts match the closed forms") {
  // Diagonal map: orbit (2^n : 1) from (1 : 1), heights |n| log 2.
  MobiusMap diag(2, 0, 0, 1);
  ProjPoint one = pp(1, 1);
  for (double t : {0.5, 1.0, 2.0, 3.0, 5.0, 8.0}) {
    long expect = 2 * static_cast<long>(std::floor(t / std::log(2.0))) + 1;
    CHECK(p1_count(diag, one, t) == expect);
  }
  CHECK(p1_count(diag, one, -1.0) == 0);

  // Parabolic map: orbit (n : 1) from (0 : 1), heights log |n|.
  MobiusMap shear(1, 1, 0, 1);
  ProjPoint zero = pp(0, 1);
  for (double t : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0}) {
    long expect = 2 * static_cast<long>(std::floor(std::exp(t))) + 1;
    CHECK(p1_count(shear, zero, t) == expect);
  }
  CHECK(p1_count(shear, zero, -0.5) == 0);

  // Periodic centers are refused.
  CHECK_THROWS_AS(p1_count(diag, pp(1, 0), 3.0), PeriodicCenter);
  CHECK_THROWS_AS(p1_count(MobiusMap(0, -1, 1, 0), pp(1, 2), 3.0), PeriodicCenter);
  // Impractically large windows are refused up front rather than crawled.
  CHECK_THROWS_AS(p1_count(shear, zero, 30.0), InsufficientOrbit);
  CHECK_THROWS_AS(p1_count(shear, zero, 800.0), InsufficientOrbit);
}

TEST_CASE("orbit counts match a brute-force recount") {
  MobiusMap f(2, 1, 1, 1);
  ProjPoint x = pp(1, 2);
  // Collect the orbit far beyond the test thresholds.
  std::set<ProjPoint> pts;
  ProjPoint fw = x, bw = x;
  for (int i = 0; i < 40; ++i) {
    pts.insert(fw);
    pts.insert(bw);
    fw = f.apply(fw);
    bw = f.apply_inverse(bw);
  }
  for (double t : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) {
    long brute = 0;
    for (const auto& p : pts)
      if (p.naive_height(96).to_double() <= t) ++brute;
    CHECK(p1_count(f, x, t) == brute);
  }
}

TEST_CASE("growth regimes separate linear from exponential counting") {
  std::vector<double> grid;
  for (int t = 1; t <= 8; ++t) grid.push_back(t);

  MobiusMap diag(2, 0, 0, 1);
  auto lin = growth_regime(diag, pp(1, 1), grid);
  CHECK_FALSE(lin.exponential);
  CHECK(lin.residual_linear < lin.residual_exponential);
  // N(T)/T stabilizes on the top half of the grid.
  double r0 = 0;
  for (size_t i = grid.size() / 2; i < grid.size(); ++i) {
    double r = static_cast<double>(lin.counts[i].second) / grid[i];
    if (r0 == 0) r0 = r;
    CHECK(r == doctest::Approx(r0).epsilon(0.10));
  }

  MobiusMap shear(1, 1, 0, 1);
  auto expo = growth_regime(shear, pp(0, 1), grid);
  CHECK(expo.exponential);
  CHECK(expo.residual_exponential < expo.residual_linear);
  for (size_t i = grid.size() / 2; i < grid.size(); ++i) {
    double r = static_cast<double>(expo.counts[i].second) / std::exp(grid[i]);
    CHECK(r == doctest::Approx(2.0).epsilon(0.10));  // N ~ 2 e^T + 1
  }

  CHECK_THROWS_AS(growth_regime(MobiusMap(0, -1, 1, 0), pp(1, 2), grid), PeriodicMap);
  CHECK_THROWS_AS(growth_regime(diag, pp(1, 0), grid), PeriodicCenter);
}

TEST_CASE("regime prediction agrees with classification on random maps") {
  testutil::Rng rng(41);
  std::vector<double> grid;
  for (int t = 1; t <= 7; ++t) grid.push_back(t);
  int tested = 0;
  while (tested < 12) {
    long a = rng.pick(-9, 9), b = rng.pick(-9, 9), c = rng.pick(-9, 9), d = rng.pick(-9, 9);
    if (a * d - b * c == 0) continue;
    MobiusMap f(a, b, c, d);
    auto cls = classify(f);
    if (cls.type == MapType::I_periodic) continue;
    ProjPoint x = pp(1, 3);
    if (f.fixes(x)) continue;
    auto rep = growth_regime(f, x, grid);
    CHECK(rep.exponential == (cls.type == MapType::III_parabolic));
    ++tested;
  }
}
