// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include "surfdyn/surfaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "surfdyn/errors.hpp"

namespace surfdyn::surfaces {

namespace {

// Degree-2 monomials of a P^2 coordinate vector, basis order
// (x0^2, x0x1, x0x2, x1^2, x1x2, x2^2).
std::array<BigInt, 6> mono6(const std::vector<BigInt>& x) {
  return {x[0] * x[0], x[0] * x[1], x[0] * x[2], x[1] * x[1], x[1] * x[2], x[2] * x[2]};
}

// Degree-2 monomials of a P^1 coordinate vector, basis order (u0^2, u0u1, u1^2).
std::array<BigInt, 3> mono3(const std::vector<BigInt>& u) {
  return {u[0] * u[0], u[0] * u[1], u[1] * u[1]};
}

void check_shape(const IntMat& m, size_t rows, size_t cols, const char* what) {
  if (m.size() != rows) throw ParseError(std::string(what) + ": wrong row count");
  for (const auto& r : m)
    if (r.size() != cols) throw ParseError(std::string(what) + ": wrong column count");
}

}  // namespace

std::string SurfacePoint::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) os << " x ";
    os << factors[i].str();
  }
  return os.str();
}

size_t SurfacePoint::max_bits() const {
  size_t b = 0;
  for (const auto& f : factors) b = std::max(b, f.max_bits());
  return b;
}

Surface Surface::wehler(WehlerSpec spec) {
  check_shape(spec.l, 3, 3, "bilinear form");
  check_shape(spec.q, 6, 6, "biquadratic form");
  Surface s;
  s.family_ = Family::wehler;
  s.wspec_ = std::move(spec);
  return s;
}

Surface Surface::triple(TripleSpec spec) {
  if (spec.c.size() != 3) throw ParseError("triquadratic form: wrong shape");
  for (const auto& plane : spec.c) check_shape(plane, 3, 3, "triquadratic form");
  Surface s;
  s.family_ = Family::triple;
  s.tspec_ = std::move(spec);
  return s;
}

bool Surface::on_surface(const SurfacePoint& p) const {
  if (family_ == Family::wehler) {
    if (p.factors.size() != 2 || p.factors[0].dim() != 3 || p.factors[1].dim() != 3)
      throw InvalidPoint("expected a point of P^2 x P^2");
    const auto& x = p.factors[0].coords();
    const auto& y = p.factors[1].coords();
    BigInt lv = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) lv += wspec_.l[i][j] * x[i] * y[j];
    if (lv != 0) return false;
    auto mx = mono6(x), my = mono6(y);
    BigInt qv = 0;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) qv += wspec_.q[a][b] * mx[a] * my[b];
    return qv == 0;
  }
  if (p.factors.size() != 3) throw InvalidPoint("expected a point of P^1 x P^1 x P^1");
  for (const auto& f : p.factors)
    if (f.dim() != 2) throw InvalidPoint("expected a point of P^1 x P^1 x P^1");
  auto mu = mono3(p.factors[0].coords());
  auto mv = mono3(p.factors[1].coords());
  auto mw = mono3(p.factors[2].coords());
  BigInt cv = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) cv += tspec_.c[a][b][c] * mu[a] * mv[b] * mw[c];
  return cv == 0;
}

void Surface::require_on_surface(const SurfacePoint& p) const {
  if (!on_surface(p)) throw NotOnSurface("point does not satisfy the defining equations");
}

std::pair<BigInt, BigInt> vieta_other_root(const BigInt& a, const BigInt& b, const BigInt& c,
                                           const BigInt& s0, const BigInt& t0) {
  if (t0 == 0) {
    // Known root at (1 : 0), so a == 0. Second root (-c : b) when b != 0,
    // else (1 : 0) is a double root.
    if (b != 0) return {-c, b};
    return {1, 0};
  }
  if (s0 == 0) {
    // Known root at (0 : 1), so c == 0. Remaining factor a s + b t.
    return {-b, a};
  }
  if (a == 0) {
    // Roots are (1 : 0) and (-c : b); the known root has t0 != 0.
    return {1, 0};
  }
  // Product of roots: (s1/t1)(s0/t0) = c/a.
  return {c * t0, a * s0};
}

SurfacePoint Surface::involution_unchecked(int axis, const SurfacePoint& p) const {
  if (family_ == Family::wehler) {
    if (axis < 1 || axis > 2) throw InvalidPoint("axis out of range for this family");
    const auto& x = p.factors[0].coords();
    const auto& y = p.factors[1].coords();
    // moving = the factor swept out by the fiber; fixed = the other one.
    const bool move_y = (axis == 1);
    const auto& fix = move_y ? x : y;
    const auto& mov = move_y ? y : x;
    // Linear constraint on the moving factor: sum_j c_j mov_j = 0.
    std::vector<BigInt> c(3, BigInt(0));
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) c[j] += move_y ? fix[i] * wspec_.l[i][j] : wspec_.l[j][i] * fix[i];
    if (c[0] == 0 && c[1] == 0 && c[2] == 0) throw DegenerateLine(axis);
    // Pivot on the largest-index nonzero coefficient; kernel basis
    // v_j = e_j c_k - e_k c_j for the two non-pivot indices j.
    int k = c[2] != 0 ? 2 : (c[1] != 0 ? 1 : 0);
    int j1 = k == 0 ? 1 : 0;
    int j2 = k == 2 ? 1 : 2;
    std::vector<BigInt> v(3, BigInt(0)), w(3, BigInt(0));
    v[j1] = c[k];
    v[k] -= c[j1];
    w[j2] = c[k];
    w[k] -= c[j2];
    // Residual quadratic on the fiber line, in coordinates mov = s v + t w.
    auto mfix = mono6(fix);
    auto conic_pair = [&](const std::vector<BigInt>& z) {
      auto mz = mono6(z);
      BigInt val = 0;
      for (int m = 0; m < 6; ++m)
        for (int n = 0; n < 6; ++n)
          val += move_y ? wspec_.q[m][n] * mfix[m] * mz[n] : wspec_.q[m][n] * mz[m] * mfix[n];
      return val;
    };
    BigInt qa = conic_pair(v);
    BigInt qc = conic_pair(w);
    std::vector<BigInt> vw(3);
    for (int i = 0; i < 3; ++i) vw[i] = v[i] + w[i];
    BigInt qb = conic_pair(vw) - qa - qc;
    if (qa == 0 && qb == 0 && qc == 0) throw DegenerateFiber(axis);
    // Fiber coordinates of the input point: mov = (mov_j1 / c_k) v + (mov_j2 / c_k) w.
    auto [s1, t1] = vieta_other_root(qa, qb, qc, mov[j1], mov[j2]);
    std::vector<BigInt> out(3);
    for (int i = 0; i < 3; ++i) out[i] = s1 * v[i] + t1 * w[i];
    SurfacePoint q = p;
    q.factors[move_y ? 1 : 0] = ProjPoint(out);
    return q;
  }
  if (axis < 1 || axis > 3) throw InvalidPoint("axis out of range for this family");
  int mi = axis - 1;
  int oi1 = mi == 0 ? 1 : 0;
  int oi2 = mi == 2 ? 1 : 2;
  auto m1 = mono3(p.factors[oi1].coords());
  auto m2 = mono3(p.factors[oi2].coords());
  // Quadratic in the moving factor: coefficients of (u0^2, u0u1, u1^2).
  BigInt coef[3] = {0, 0, 0};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int m = 0; m < 3; ++m) {
        // c index order follows factor order; place the moving index.
        int idx[3];
        idx[mi] = a;
        idx[oi1] = b;
        idx[oi2] = m;
        coef[a] += tspec_.c[idx[0]][idx[1]][idx[2]] * m1[b] * m2[m];
      }
  if (coef[0] == 0 && coef[1] == 0 && coef[2] == 0) throw DegenerateFiber(axis);
  const auto& mov = p.factors[mi].coords();
  auto [s1, t1] = vieta_other_root(coef[0], coef[1], coef[2], mov[0], mov[1]);
  SurfacePoint q = p;
  q.factors[mi] = ProjPoint(std::vector<BigInt>{s1, t1});
  return q;
}

SurfacePoint Surface::involution(int axis, const SurfacePoint& p) const {
  require_on_surface(p);
  return involution_unchecked(axis, p);
}

SurfacePoint Surface::forward_unchecked(const SurfacePoint& p) const {
  SurfacePoint q = p;
  for (int axis = 1; axis <= num_axes(); ++axis) q = involution_unchecked(axis, q);
  return q;
}

SurfacePoint Surface::backward_unchecked(const SurfacePoint& p) const {
  SurfacePoint q = p;
  for (int axis = num_axes(); axis >= 1; --axis) q = involution_unchecked(axis, q);
  return q;
}

SurfacePoint Surface::forward(const SurfacePoint& p) const {
  require_on_surface(p);
  return forward_unchecked(p);
}

SurfacePoint Surface::backward(const SurfacePoint& p) const {
  require_on_surface(p);
  return backward_unchecked(p);
}

Real Surface::ambient_height(const SurfacePoint& p, int prec) const {
  Real h(prec);
  for (const auto& f : p.factors) h = h + f.naive_height(prec);
  return h;
}

namespace {

using i128 = __int128;

BigInt bigint_from_i128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 a = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  BigInt n = (unsigned long)(a >> 64);
  n <<= 64;
  n += (unsigned long)(a & ~0ULL);
  return neg ? BigInt(-n) : n;
}

// Exact integer square root of a nonnegative 128-bit value, if it is a
// perfect square. Pre: n < 2^125 so the root fits an unsigned 64-bit seed.
bool square_root_i128(i128 n, i128& root) {
  if (n < 0) return false;
  static const unsigned char sq_mod64[64] = {
      1, 1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0,
      0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0,
      0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0};
  if (!sq_mod64[(unsigned)(n & 63)]) return false;
  unsigned long long r = (unsigned long long)sqrtl((long double)n);
  while (r > 0 && (i128)r * r > n) --r;
  while ((i128)(r + 1) * (r + 1) <= n) ++r;
  if ((i128)r * r != n) return false;
  root = r;
  return true;
}

// Solutions (s : t) of a s^2 + b s t + c t^2 = 0 in 128-bit arithmetic.
// Pre: |a|,|b|,|c| small enough that the discriminant stays below 2^125.
int quadratic_roots_i128(i128 a, i128 b, i128 c, i128 s[2], i128 t[2]) {
  if (a == 0 && b == 0 && c == 0) return 0;
  if (a == 0) {
    int k = 0;
    s[k] = 1, t[k] = 0, ++k;
    if (b != 0) s[k] = -c, t[k] = b, ++k;
    return k;
  }
  i128 disc = b * b - 4 * a * c, r;
  if (!square_root_i128(disc, r)) return 0;
  int k = 0;
  s[k] = -b + r, t[k] = 2 * a, ++k;
  if (r != 0) s[k] = -b - r, t[k] = 2 * a, ++k;
  return k;
}

// Largest absolute entry of an integer matrix, as a long (clamped).
long max_abs_entry(const IntMat& m) {
  BigInt best = 0;
  for (const auto& row : m)
    for (const auto& v : row) {
      BigInt a = abs(v);
      if (a > best) best = a;
    }
  if (!best.fits_slong_p()) return std::numeric_limits<long>::max();
  return best.get_si();
}

// Streaming odometer over primitive first-nonzero-positive representatives
// of P^{dim-1}(Q) with |coords| <= hmax, lexicographic, restricted to
// lead coordinate values in [lo, hi]. Calls fn(const long* coords).
template <int dim, typename Fn>
void for_primitive(long hmax, long lo, long hi, Fn&& fn) {
  long v[dim];
  for (long first = std::max(lo, 0L); first <= hi; ++first) {
    v[0] = first;
    for (int i = 1; i < dim; ++i) v[i] = (first == 0) ? 0 : -hmax;
    for (;;) {
      bool lead_ok = false;
      long g = 0;
      for (int i = 0; i < dim; ++i) {
        if (!lead_ok && v[i] != 0) {
          if (v[i] < 0) { g = 0; break; }
          lead_ok = true;
        }
        g = std::gcd(g, std::labs(v[i]));
      }
      if (lead_ok && g == 1) fn((const long*)v);
      int i = dim - 1;
      while (i >= 1 && v[i] == hmax) v[i--] = -hmax;
      if (i < 1) break;
      ++v[i];
    }
  }
}

// Integer square root test; returns true and the root when n is a perfect square.
bool perfect_square(const BigInt& n, BigInt& root) {
  if (n < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
  return true;
}

// Solutions (s : t) of a s^2 + b s t + c t^2 = 0 over Q, if any.
std::vector<std::pair<BigInt, BigInt>> quadratic_roots(const BigInt& a, const BigInt& b,
                                                       const BigInt& c) {
  std::vector<std::pair<BigInt, BigInt>> roots;
  if (a == 0 && b == 0 && c == 0) return roots;  // callers treat as degenerate
  if (a == 0) {
    roots.emplace_back(1, 0);
    if (b != 0) roots.emplace_back(-c, b);
    return roots;
  }
  BigInt disc = b * b - 4 * a * c;
  BigInt r;
  if (!perfect_square(disc, r)) return roots;
  roots.emplace_back(-b + r, 2 * a);
  if (r != 0) roots.emplace_back(-b - r, 2 * a);
  return roots;
}

}  // namespace

std::vector<SurfacePoint> Surface::find_points(double height_bound, size_t limit,
                                               int threads) const {
  if (height_bound < 0) throw InvalidPoint("height bound must be nonnegative");
  long hmax = static_cast<long>(std::floor(std::exp(height_bound) + 1e-9));
  if (hmax < 1) hmax = 1;
  std::vector<SurfacePoint> found;
  std::set<SurfacePoint> seen;

  auto add = [&](SurfacePoint&& sp) {
    if (seen.insert(sp).second) found.push_back(std::move(sp));
  };

  if (family_ == Family::wehler) {
    // Fiber solve over the base x: the y-line L(x, .) = 0 carries a conic
    // cut by Q(x, .). Per-surface magnitude bounds decide whether the whole
    // solve fits 128-bit arithmetic; otherwise an exact big-integer path
    // runs the identical algorithm.
    long lmax_e = max_abs_entry(wspec_.l), qmax_e = max_abs_entry(wspec_.q);
    long double cB = 3.0L * lmax_e * hmax;
    long double cxB = 6.0L * qmax_e * hmax * hmax;
    long double qB = 6.0L * cxB * (2.0L * cB) * (2.0L * cB);
    bool fast = cB <= 9e17L && cxB <= 4e18L && qB <= 2e18L;

    long lfast[3][3], qfast[6][6];
    if (fast) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) lfast[i][j] = wspec_.l[i][j].get_si();
      for (int m = 0; m < 6; ++m)
        for (int n = 0; n < 6; ++n) qfast[m][n] = wspec_.q[m][n].get_si();
    }

    auto scan_fast = [&](long lo, long hi) {
      std::vector<SurfacePoint> local;
      for_primitive<3>(hmax, lo, hi, [&](const long* x) {
        long c[3] = {0, 0, 0};
        for (int j = 0; j < 3; ++j)
          for (int i = 0; i < 3; ++i) c[j] += x[i] * lfast[i][j];
        if (c[0] == 0 && c[1] == 0 && c[2] == 0) return;  // degenerate line
        int k = c[2] != 0 ? 2 : (c[1] != 0 ? 1 : 0);
        int j1 = k == 0 ? 1 : 0;
        int j2 = k == 2 ? 1 : 2;
        long v[3] = {0, 0, 0}, w[3] = {0, 0, 0};
        v[j1] = c[k];
        v[k] -= c[j1];
        w[j2] = c[k];
        w[k] -= c[j2];
        long m6x[6] = {x[0] * x[0], x[0] * x[1], x[0] * x[2],
                       x[1] * x[1], x[1] * x[2], x[2] * x[2]};
        long cx[6];
        for (int n = 0; n < 6; ++n) {
          long acc = 0;
          for (int m = 0; m < 6; ++m) acc += qfast[m][n] * m6x[m];
          cx[n] = acc;
        }
        auto conic = [&](const long* z) {
          long m6z[6] = {z[0] * z[0], z[0] * z[1], z[0] * z[2],
                         z[1] * z[1], z[1] * z[2], z[2] * z[2]};
          i128 acc = 0;
          for (int n = 0; n < 6; ++n) acc += (i128)cx[n] * m6z[n];
          return acc;
        };
        long vw[3] = {v[0] + w[0], v[1] + w[1], v[2] + w[2]};
        i128 qa = conic(v), qc = conic(w);
        i128 qb = conic(vw) - qa - qc;
        if (qa == 0 && qb == 0 && qc == 0) return;  // degenerate fiber
        i128 rs[2], rt[2];
        int nr = quadratic_roots_i128(qa, qb, qc, rs, rt);
        for (int r = 0; r < nr; ++r) {
          std::vector<BigInt> xx(3), yy(3);
          for (int i = 0; i < 3; ++i) xx[i] = x[i];
          for (int i = 0; i < 3; ++i) yy[i] = bigint_from_i128(rs[r] * v[i] + rt[r] * w[i]);
          local.push_back(SurfacePoint{{ProjPoint(xx), ProjPoint(yy)}});
        }
      });
      return local;
    };

    auto scan_big = [&](long lo, long hi) {
      std::vector<SurfacePoint> local;
      for_primitive<3>(hmax, lo, hi, [&](const long* xl) {
        std::vector<BigInt> x(3);
        for (int i = 0; i < 3; ++i) x[i] = xl[i];
        std::vector<BigInt> c(3, BigInt(0));
        for (int j = 0; j < 3; ++j)
          for (int i = 0; i < 3; ++i) c[j] += x[i] * wspec_.l[i][j];
        if (c[0] == 0 && c[1] == 0 && c[2] == 0) return;  // degenerate line
        int k = c[2] != 0 ? 2 : (c[1] != 0 ? 1 : 0);
        int j1 = k == 0 ? 1 : 0;
        int j2 = k == 2 ? 1 : 2;
        std::vector<BigInt> v(3, BigInt(0)), w(3, BigInt(0));
        v[j1] = c[k];
        v[k] -= c[j1];
        w[j2] = c[k];
        w[k] -= c[j2];
        auto mx = mono6(x);
        auto conic = [&](const std::vector<BigInt>& z) {
          auto mz = mono6(z);
          BigInt val = 0;
          for (int m = 0; m < 6; ++m)
            for (int n = 0; n < 6; ++n) val += wspec_.q[m][n] * mx[m] * mz[n];
          return val;
        };
        BigInt qa = conic(v), qc = conic(w);
        std::vector<BigInt> vw(3);
        for (int i = 0; i < 3; ++i) vw[i] = v[i] + w[i];
        BigInt qb = conic(vw) - qa - qc;
        if (qa == 0 && qb == 0 && qc == 0) return;  // degenerate fiber
        for (auto& [s, t] : quadratic_roots(qa, qb, qc)) {
          std::vector<BigInt> y(3);
          for (int i = 0; i < 3; ++i) y[i] = s * v[i] + t * w[i];
          local.push_back(SurfacePoint{{ProjPoint(x), ProjPoint(y)}});
        }
      });
      return local;
    };

    auto scan_chunk = [&](long lo, long hi) { return fast ? scan_fast(lo, hi) : scan_big(lo, hi); };

    int nt = std::max(1, threads);
    if (nt == 1) {
      auto local = scan_chunk(0, hmax);
      for (auto& sp : local) {
        add(std::move(sp));
        if (limit && found.size() >= limit) break;
      }
    } else {
      long chunk = hmax / nt + 1;
      std::vector<std::future<std::vector<SurfacePoint>>> futs;
      for (int t = 0; t < nt; ++t) {
        long lo = t * chunk;
        long hi = std::min(hmax, lo + chunk - 1);
        if (lo > hmax) break;
        futs.push_back(std::async(std::launch::async, scan_chunk, lo, hi));
      }
      for (auto& f : futs) {
        for (auto& sp : f.get()) {
          if (limit && found.size() >= limit) break;
          add(std::move(sp));
        }
      }
    }
    if (limit && found.size() > limit) found.resize(limit);
    return found;
  }

  // Triple family: bases (u, v) in P^1 x P^1 with the product of coordinate
  // bounds <= e^bound, so h(u) + h(v) <= bound. The P^1 list is small enough
  // to materialize; pairs are enumerated u-major, partner points bucketed by
  // coordinate magnitude so only admissible pairs are visited.
  std::vector<std::pair<long, long>> p1s;
  for_primitive<2>(hmax, 0, hmax, [&](const long* u) { p1s.emplace_back(u[0], u[1]); });
  std::vector<std::vector<size_t>> bucket(hmax + 1);
  for (size_t i = 0; i < p1s.size(); ++i)
    bucket[std::max(std::labs(p1s[i].first), std::labs(p1s[i].second))].push_back(i);

  long cmax_e = 0;
  {
    BigInt best = 0;
    for (const auto& plane : tspec_.c)
      best = std::max(best, BigInt(max_abs_entry(plane)));
    cmax_e = best.fits_slong_p() ? best.get_si() : std::numeric_limits<long>::max();
  }
  long double coefB = 27.0L * cmax_e * hmax * hmax;
  bool fast3 = coefB <= 2e18L;
  long cf[3][3][3];
  if (fast3)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int m = 0; m < 3; ++m) cf[a][b][m] = tspec_.c[a][b][m].get_si();

  auto scan_pairs = [&](size_t ui_lo, size_t ui_hi) {
    std::vector<SurfacePoint> local;
    for (size_t ui = ui_lo; ui < ui_hi; ++ui) {
      auto [u0, u1] = p1s[ui];
      long cu = std::max(std::labs(u0), std::labs(u1));
      long mu[3] = {u0 * u0, u0 * u1, u1 * u1};
      for (long m = 1; m <= hmax / cu; ++m) {
        for (size_t vi : bucket[m]) {
          auto [v0, v1] = p1s[vi];
          long mv[3] = {v0 * v0, v0 * v1, v1 * v1};
          if (fast3) {
            i128 coef[3] = {0, 0, 0};
            for (int a = 0; a < 3; ++a)
              for (int b = 0; b < 3; ++b) {
                long muv = mu[a] * mv[b];
                for (int k = 0; k < 3; ++k) coef[k] += (i128)cf[a][b][k] * muv;
              }
            if (coef[0] == 0 && coef[1] == 0 && coef[2] == 0) continue;
            i128 rs[2], rt[2];
            int nr = quadratic_roots_i128(coef[0], coef[1], coef[2], rs, rt);
            for (int r = 0; r < nr; ++r) {
              std::vector<BigInt> uu = {BigInt(u0), BigInt(u1)}, vv = {BigInt(v0), BigInt(v1)};
              std::vector<BigInt> zz = {bigint_from_i128(rs[r]), bigint_from_i128(rt[r])};
              local.push_back(SurfacePoint{{ProjPoint(uu), ProjPoint(vv), ProjPoint(zz)}});
            }
          } else {
            BigInt coef[3] = {0, 0, 0};
            for (int a = 0; a < 3; ++a)
              for (int b = 0; b < 3; ++b)
                for (int k = 0; k < 3; ++k) coef[k] += tspec_.c[a][b][k] * (mu[a] * mv[b]);
            if (coef[0] == 0 && coef[1] == 0 && coef[2] == 0) continue;
            for (auto& [sr, tr] : quadratic_roots(coef[0], coef[1], coef[2])) {
              std::vector<BigInt> uu = {BigInt(u0), BigInt(u1)}, vv = {BigInt(v0), BigInt(v1)};
              local.push_back(
                  SurfacePoint{{ProjPoint(uu), ProjPoint(vv), ProjPoint(std::vector<BigInt>{sr, tr})}});
            }
          }
        }
      }
    }
    return local;
  };

  int nt = std::max(1, threads);
  if (nt == 1) {
    auto local = scan_pairs(0, p1s.size());
    for (auto& sp : local) {
      add(std::move(sp));
      if (limit && found.size() >= limit) break;
    }
  } else {
    size_t chunk = (p1s.size() + nt - 1) / nt;
    std::vector<std::future<std::vector<SurfacePoint>>> futs;
    for (int t = 0; t < nt; ++t) {
      size_t lo = std::min(p1s.size(), t * chunk);
      size_t hi = std::min(p1s.size(), lo + chunk);
      futs.push_back(std::async(std::launch::async, scan_pairs, lo, hi));
    }
    for (auto& f : futs) {
      for (auto& sp : f.get()) {
        if (limit && found.size() >= limit) break;
        add(std::move(sp));
      }
    }
  }
  if (limit && found.size() > limit) found.resize(limit);
  return found;
}

}  // namespace surfdyn::surfaces
