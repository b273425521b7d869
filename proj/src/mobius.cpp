// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include "surfdyn/mobius.hpp"

#include <algorithm>
#include <cmath>

#include "surfdyn/errors.hpp"

namespace surfdyn::mobius {

namespace {

std::array<std::array<BigInt, 2>, 2> normalize_matrix(std::array<std::array<BigInt, 2>, 2> m) {
  BigInt g = gcd(gcd(m[0][0], m[0][1]), gcd(m[1][0], m[1][1]));
  if (g == 0) throw NotInvertible("zero matrix");
  for (auto& row : m)
    for (auto& e : row) e /= g;
  // Fix the projective sign: first nonzero entry positive.
  for (const auto& row : m)
    for (const auto& e : row) {
      if (e == 0) continue;
      if (e < 0)
        for (auto& r2 : m)
          for (auto& e2 : r2) e2 = -e2;
      goto done;
    }
done:
  return m;
}

}  // namespace

MobiusMap::MobiusMap(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d)
    : MobiusMap(std::array<std::array<BigInt, 2>, 2>{{{a, b}, {c, d}}}) {}

MobiusMap::MobiusMap(const std::array<std::array<BigInt, 2>, 2>& m) : m_(normalize_matrix(m)) {
  if (det() == 0) throw NotInvertible("matrix has determinant zero");
}

BigInt MobiusMap::det() const { return m_[0][0] * m_[1][1] - m_[0][1] * m_[1][0]; }

bool MobiusMap::is_scalar() const {
  return m_[0][1] == 0 && m_[1][0] == 0 && m_[0][0] == m_[1][1];
}

ProjPoint MobiusMap::apply(const ProjPoint& x) const {
  if (x.dim() != 2) throw InvalidPoint("expected a point of P^1");
  return ProjPoint(std::vector<BigInt>{m_[0][0] * x[0] + m_[0][1] * x[1],
                                       m_[1][0] * x[0] + m_[1][1] * x[1]});
}

ProjPoint MobiusMap::apply_inverse(const ProjPoint& x) const {
  if (x.dim() != 2) throw InvalidPoint("expected a point of P^1");
  // Adjugate acts as the inverse on P^1.
  return ProjPoint(std::vector<BigInt>{m_[1][1] * x[0] - m_[0][1] * x[1],
                                       -m_[1][0] * x[0] + m_[0][0] * x[1]});
}

bool MobiusMap::fixes(const ProjPoint& x) const {
  if (x.dim() != 2) throw InvalidPoint("expected a point of P^1");
  BigInt y0 = m_[0][0] * x[0] + m_[0][1] * x[1];
  BigInt y1 = m_[1][0] * x[0] + m_[1][1] * x[1];
  return y0 * x[1] - y1 * x[0] == 0;
}

std::string map_type_name(MapType t) {
  switch (t) {
    case MapType::I_periodic: return "I_periodic";
    case MapType::II_two_fixed: return "II_two_fixed";
    case MapType::III_parabolic: return "III_parabolic";
  }
  return "?";
}

Classification classify(const MobiusMap& f) {
  const auto& m = f.entries();
  BigInt tr = f.trace();
  BigInt dt = f.det();
  Classification cls;
  cls.scalar = f.is_scalar();
  cls.t = BigRat(tr * tr, dt) - 2;
  cls.t.canonicalize();

  BigInt disc = tr * tr - 4 * dt;
  if (disc == 0 && !cls.scalar) {
    cls.type = MapType::III_parabolic;
  } else if (cls.scalar || (cls.t.get_den() == 1 && cls.t >= -2 && cls.t <= 2)) {
    cls.type = MapType::I_periodic;
  } else {
    cls.type = MapType::II_two_fixed;
  }

  if (cls.type == MapType::I_periodic) {
    // Smallest n with F^n scalar. The eigenvalue ratio is a root of unity
    // of order 1..6, so n <= 12 always suffices; scan to be safe.
    std::array<std::array<BigInt, 2>, 2> p = m;
    for (int n = 1; n <= 24; ++n) {
      if (p[0][1] == 0 && p[1][0] == 0 && p[0][0] == p[1][1]) {
        cls.order = n;
        break;
      }
      std::array<std::array<BigInt, 2>, 2> q;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) q[i][j] = p[i][0] * m[0][j] + p[i][1] * m[1][j];
      p = q;
    }
    if (cls.scalar) cls.order = 1;
  }

  // Fixed points: eigenvectors of F. For the eigenvalue mu the vector
  // (b, mu - a) works when b != 0, (mu - d, c) when c != 0; a diagonal
  // matrix fixes the coordinate points.
  if (cls.scalar) return cls;  // every point fixed; nothing to report
  if (disc == 0) {
    // One fixed point, rational: kernel of 2F - tr I.
    BigInt aa = m[0][0] - m[1][1];
    std::vector<BigInt> v;
    if (m[0][1] != 0 || aa != 0)
      v = {2 * m[0][1], -aa};
    else
      v = {aa, 2 * m[1][0]};
    ProjPoint pv(v);
    cls.fixed.push_back({QuadNum(BigRat(pv[0])), QuadNum(BigRat(pv[1]))});
    cls.field_d = 1;
    return cls;
  }
  if (disc < 0) {
    cls.complex_fixed = true;
    cls.field_d = 0;
    return cls;
  }
  auto sq = extract_square_part(disc);
  cls.field_d = sq.d.get_si();
  for (int sgn = +1; sgn >= -1; sgn -= 2) {
    // mu = (tr + sgn * s sqrt(d)) / 2.
    BigInt ss = sgn * sq.s;
    QuadNum mu = sq.d == 1 ? QuadNum(BigRat(BigInt(tr + ss), 2))
                           : QuadNum(BigRat(tr, 2), BigRat(ss, 2), sq.d.get_si());
    QuadNum zero(BigRat(0));
    if (m[0][1] != 0) {
      cls.fixed.push_back({QuadNum(BigRat(m[0][1])), mu - QuadNum(BigRat(m[0][0]))});
    } else if (m[1][0] != 0) {
      cls.fixed.push_back({mu - QuadNum(BigRat(m[1][1])), QuadNum(BigRat(m[1][0]))});
    } else {
      // Diagonal: fixed points are the coordinate points.
      cls.fixed.push_back({QuadNum(BigRat(1)), zero});
      cls.fixed.push_back({zero, QuadNum(BigRat(1))});
      break;
    }
  }
  return cls;
}

namespace {

double naive_h(const ProjPoint& x) {
  // log max(|x0|, |x1|) for a primitive representative; exact enough for
  // double comparisons far from the threshold.
  return x.naive_height(64).to_double();
}

// Exact count for a parabolic map through its linear normal form: with u
// the fixed vector, v a complement, and x = S u + T0 v (scaled integral),
// the n-th orbit point is proportional to (S mu + n T0 k) u + T0 mu v,
// where F v = k u + mu v. Coordinates are linear integer forms in n whose
// gcd is bounded, so the count window is finite and certified.
long count_parabolic(const MobiusMap& f, const ProjPoint& x, double t) {
  const auto& m = f.entries();
  BigInt tr = f.trace();
  // tr^2 = 4 det forces tr even.
  BigInt mu = tr / 2;
  // Primitive fixed vector u: kernel of 2F - tr I.
  BigInt aa = m[0][0] - m[1][1];
  std::vector<BigInt> uv;
  if (m[0][1] != 0 || aa != 0)
    uv = {2 * m[0][1], -aa};
  else
    uv = {aa, 2 * m[1][0]};
  ProjPoint up(uv);
  BigInt u0 = up[0], u1 = up[1];
  // Complement v: a coordinate vector independent of u.
  BigInt v0 = 0, v1 = 0;
  if (u0 == 0) {
    v0 = 1;
  } else {
    v1 = 1;
  }
  // x = (S u + T0 v) / den with den = det(u | v).
  BigInt s_num = x[0] * v1 - x[1] * v0;
  BigInt t_num = u0 * x[1] - u1 * x[0];
  if (t_num == 0) throw PeriodicCenter("center is the fixed point");
  // F v = k u + mu v with integral k (u primitive).
  BigInt fv0 = m[0][0] * v0 + m[0][1] * v1;
  BigInt fv1 = m[1][0] * v0 + m[1][1] * v1;
  BigInt w0 = fv0 - mu * v0, w1 = fv1 - mu * v1;
  BigInt k = (u0 != 0) ? w0 / u0 : w1 / u1;
  if (k * u0 != w0 || k * u1 != w1)
    throw InvalidPoint("parabolic normal form failed an exact divisibility");
  // Coordinates X(n) = A n + B, Y(n) = C n + D.
  BigInt slope = t_num * k;
  BigInt A = slope * u0, B = s_num * mu * u0 + t_num * mu * v0;
  BigInt C = slope * u1, D = s_num * mu * u1 + t_num * mu * v1;
  // gcd(X, Y) divides G = den * t_num * mu (cross-eliminations).
  BigInt den = u0 * v1 - u1 * v0;
  BigInt bound_g = abs(den * t_num * mu);
  if (bound_g == 0) throw InvalidPoint("degenerate parabolic data");
  // The legs below run while the dominant linear form stays under e^t * G,
  // roughly e^t * G / max(|A|,|C|) steps plus a max(|B|,|D|) / max(|A|,|C|)
  // shift. Refuse windows that would take tens of millions of iterations
  // up front, before exp(t) touches any big-float machinery.
  {
    auto bits = [](const BigInt& z) {
      return z == 0 ? 0.0 : static_cast<double>(mpz_sizeinbase(z.get_mpz_t(), 2));
    };
    double lead = std::max(bits(A), bits(C));
    double window_bits =
        std::max(t / std::log(2.0) + bits(bound_g), std::max(bits(B), bits(D))) - lead + 2;
    if (!(window_bits < 25.0))  // ~3e7 steps; also catches non-finite t
      throw InsufficientOrbit("parabolic count window too large for this height bound");
  }
  // Count |X|/g and |Y|/g below e^t: beyond |n| where both linear forms
  // exceed e^t * G on their increasing side, nothing more can qualify.
  BigInt limit(1);
  {
    double scaled = std::exp(t);
    // e^t * G as an integer ceiling; t is modest (grid values).
    mpz_class gl = bound_g;
    mpf_class lf(scaled, 64);
    mpf_class total = lf * mpf_class(gl);
    limit = BigInt(ceil(total));
  }
  long count = 0;
  long guard = 0;
  for (int dir = 0; dir < 2; ++dir) {
    for (long step = (dir == 0 ? 0 : 1);; ++step) {
      if (++guard > 60'000'000)
        throw InsufficientOrbit("parabolic count window too large for this height bound");
      long n = dir == 0 ? step : -step;
      BigInt xn = A * n + B, yn = C * n + D;
      BigInt g = gcd(xn, yn);
      if (g == 0) throw InvalidPoint("orbit left P^1 unexpectedly");
      BigInt ax = abs(xn), ay = abs(yn);
      BigInt mx = ax > ay ? ax : ay;
      if (mx <= limit) {
        // h(n) = log(mx / g) <= t?
        Real h = log_bigint(mx / g, 64);
        if (h.to_double() <= t) ++count;
      } else {
        // Past the vertex of both forms, values only grow; stop the leg.
        bool increasing;
        if (dir == 0)
          increasing = abs(A * (n + 1) + B) >= abs(xn) && abs(C * (n + 1) + D) >= abs(yn);
        else
          increasing = abs(A * (n - 1) + B) >= abs(xn) && abs(C * (n - 1) + D) >= abs(yn);
        if (increasing) break;
      }
    }
  }
  return count;
}

// Iterative count with an escape margin: heights along non-parabolic
// non-periodic orbits grow linearly in |n| with per-step wobble bounded in
// terms of the matrix and point sizes, so once a leg clears t by the
// margin it can never return.
long count_by_iteration(const MobiusMap& f, const ProjPoint& x, double t) {
  double maxent = 0;
  for (const auto& row : f.entries())
    for (const auto& e : row) maxent = std::max(maxent, std::fabs(e.get_d()));
  double margin = 25.0 + 2.0 * std::log(1.0 + maxent) + 2.0 * std::max(0.0, naive_h(x));
  long count = naive_h(x) <= t ? 1 : 0;
  for (int dir = 0; dir < 2; ++dir) {
    ProjPoint q = x;
    for (long step = 0; step < 200000; ++step) {
      q = dir == 0 ? f.apply(q) : f.apply_inverse(q);
      double h = naive_h(q);
      if (h <= t) ++count;
      if (h > t + margin) break;
      if (step == 199999)
        throw InsufficientOrbit("orbit count failed to escape the height bound");
    }
  }
  return count;
}

}  // namespace

long p1_count(const MobiusMap& f, const ProjPoint& x, double t) {
  if (x.dim() != 2) throw InvalidPoint("expected a point of P^1");
  Classification cls = classify(f);
  if (cls.type == MapType::I_periodic)
    throw PeriodicCenter("every point is periodic under a finite-order map");
  if (f.fixes(x)) throw PeriodicCenter("center is a fixed point");
  if (t < 0) return 0;
  if (cls.type == MapType::III_parabolic) return count_parabolic(f, x, t);
  return count_by_iteration(f, x, t);
}

GrowthReport growth_regime(const MobiusMap& f, const ProjPoint& x,
                           const std::vector<double>& t_grid) {
  Classification cls = classify(f);
  if (cls.type == MapType::I_periodic)
    throw PeriodicMap("finite-order map has no growth regime");
  if (f.fixes(x)) throw PeriodicCenter("center is a fixed point");
  if (t_grid.empty()) throw InvalidDepth("empty T grid");

  GrowthReport rep;
  double sxx_lin = 0, sxy_lin = 0, sxx_exp = 0, sxy_exp = 0;
  for (double t : t_grid) {
    long n = p1_count(f, x, t);
    rep.counts.emplace_back(t, n);
    double e = std::exp(t);
    sxx_lin += t * t;
    sxy_lin += t * static_cast<double>(n);
    sxx_exp += e * e;
    sxy_exp += e * static_cast<double>(n);
  }
  double a = sxx_lin > 0 ? sxy_lin / sxx_lin : 0;
  double b = sxx_exp > 0 ? sxy_exp / sxx_exp : 0;
  double rl = 0, re = 0, nn = 0;
  for (auto& [t, n] : rep.counts) {
    double dn = static_cast<double>(n);
    rl += (dn - a * t) * (dn - a * t);
    re += (dn - b * std::exp(t)) * (dn - b * std::exp(t));
    nn += dn * dn;
  }
  rep.residual_linear = nn > 0 ? std::sqrt(rl / nn) : 0;
  rep.residual_exponential = nn > 0 ? std::sqrt(re / nn) : 0;
  rep.exponential = rep.residual_exponential < rep.residual_linear;
  return rep;
}

}  // namespace surfdyn::mobius
