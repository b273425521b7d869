// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include "surfdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "surfdyn/errors.hpp"

namespace surfdyn::spectral {

// ---------- integer matrix helpers ----------

BigInt NSLattice::pair(const IntVec& x, const IntVec& y) const {
  size_t n = gram.size();
  if (x.size() != n || y.size() != n) throw InvalidPoint("pairing dimension mismatch");
  BigInt s = 0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) s += x[i] * gram[i][j] * y[j];
  return s;
}

QuadNum NSLattice::pair(const QuadVec& x, const QuadVec& y) const {
  size_t n = gram.size();
  if (x.size() != n || y.size() != n) throw InvalidPoint("pairing dimension mismatch");
  QuadNum s;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) s = s + x[i] * QuadNum(BigRat(gram[i][j])) * y[j];
  return s;
}

QuadNum NSLattice::pair(const QuadVec& x, const IntVec& y) const {
  QuadVec qy;
  qy.reserve(y.size());
  for (const auto& c : y) qy.emplace_back(BigRat(c));
  return pair(x, qy);
}

NSLattice make_lattice(const IntMat& gram, std::vector<std::string> labels) {
  size_t n = gram.size();
  for (const auto& row : gram)
    if (row.size() != n) throw ParseError("gram matrix must be square");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (gram[i][j] != gram[j][i]) throw ParseError("gram matrix must be symmetric");
  return NSLattice{gram, std::move(labels)};
}

IntMat identity(int n) {
  IntMat m(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMat transpose(const IntMat& m) {
  size_t n = m.size(), k = m.empty() ? 0 : m[0].size();
  IntMat t(k, IntVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j) t[j][i] = m[i][j];
  return t;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
  size_t n = a.size(), m = b[0].size(), k = b.size();
  IntMat c(n, IntVec(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

BigInt det(const IntMat& m) {
  // Bareiss fraction-free elimination.
  size_t n = m.size();
  if (n == 0) return 1;
  IntMat a = m;
  BigInt prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

namespace {

// Gauss-Jordan over exact rationals; returns false if singular.
bool rat_invert(const std::vector<RatVec>& m, std::vector<RatVec>& out) {
  size_t n = m.size();
  std::vector<RatVec> a = m;
  out.assign(n, RatVec(n, BigRat(0)));
  for (size_t i = 0; i < n; ++i) out[i][i] = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return false;
    std::swap(a[piv], a[col]);
    std::swap(out[piv], out[col]);
    BigRat inv = BigRat(1) / a[col][col];
    for (size_t j = 0; j < n; ++j) {
      a[col][j] *= inv;
      a[col][j].canonicalize();
      out[col][j] *= inv;
      out[col][j].canonicalize();
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      BigRat f = a[r][col];
      for (size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        a[r][j].canonicalize();
        out[r][j] -= f * out[col][j];
        out[r][j].canonicalize();
      }
    }
  }
  return true;
}

}  // namespace

IntMat unimodular_inverse(const IntMat& m) {
  size_t n = m.size();
  std::vector<RatVec> rm(n, RatVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) rm[i][j] = BigRat(m[i][j]);
  std::vector<RatVec> inv;
  if (!rat_invert(rm, inv)) throw NotIsometry("matrix is singular");
  IntMat out(n, IntVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (inv[i][j].get_den() != 1)
        throw NotIsometry("matrix inverse is not integral");
      out[i][j] = inv[i][j].get_num();
    }
  return out;
}

// ---------- PullbackMap ----------

PullbackMap::PullbackMap(NSLattice lattice, IntMat m) : lat_(std::move(lattice)), m_(std::move(m)) {
  size_t n = lat_.gram.size();
  if (m_.size() != n) throw NotIsometry("pullback matrix rank mismatch");
  for (const auto& row : m_)
    if (row.size() != n) throw NotIsometry("pullback matrix must be square");
  det_ = spectral::det(m_);
  if (det_ != 1 && det_ != -1) throw NotIsometry("pullback determinant must be +-1");
  IntMat check = mat_mul(mat_mul(transpose(m_), lat_.gram), m_);
  if (check != lat_.gram) throw NotIsometry("pullback does not preserve the intersection form");
  minv_ = unimodular_inverse(m_);
}

IntVec PullbackMap::apply(const IntVec& v) const {
  size_t n = m_.size();
  if (v.size() != n) throw InvalidPoint("vector dimension mismatch");
  IntVec r(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r[i] += m_[i][j] * v[j];
  return r;
}

QuadVec PullbackMap::apply(const QuadVec& v) const {
  size_t n = m_.size();
  if (v.size() != n) throw InvalidPoint("vector dimension mismatch");
  QuadVec r(n);
  for (size_t i = 0; i < n; ++i) {
    QuadNum s;
    for (size_t j = 0; j < n; ++j) s = s + QuadNum(BigRat(m_[i][j])) * v[j];
    r[i] = s;
  }
  return r;
}

IntVec PullbackMap::apply_inverse(const IntVec& v) const {
  size_t n = minv_.size();
  if (v.size() != n) throw InvalidPoint("vector dimension mismatch");
  IntVec r(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r[i] += minv_[i][j] * v[j];
  return r;
}

QuadVec PullbackMap::apply_inverse(const QuadVec& v) const {
  size_t n = minv_.size();
  if (v.size() != n) throw InvalidPoint("vector dimension mismatch");
  QuadVec r(n);
  for (size_t i = 0; i < n; ++i) {
    QuadNum s;
    for (size_t j = 0; j < n; ++j) s = s + QuadNum(BigRat(minv_[i][j])) * v[j];
    r[i] = s;
  }
  return r;
}

// ---------- polynomials ----------

std::vector<BigInt> charpoly(const IntMat& m) {
  // Faddeev-LeVerrier. For integer input every division below is exact.
  int n = static_cast<int>(m.size());
  std::vector<BigInt> c(static_cast<size_t>(n) + 1, BigInt(0));
  c[n] = 1;
  IntMat b = identity(n);
  for (int k = 1; k <= n; ++k) {
    IntMat a = mat_mul(m, b);
    BigInt tr = 0;
    for (int i = 0; i < n; ++i) tr += a[i][i];
    BigInt ck = -tr / k;
    c[n - k] = ck;
    b = a;
    for (int i = 0; i < n; ++i) b[i][i] += ck;
  }
  return c;
}

std::optional<std::vector<BigInt>> divide_quadratic_factor(const std::vector<BigInt>& p,
                                                           const BigInt& tau) {
  // p(t) = q(t) (t^2 - tau t + 1) + linear remainder; exact integer synthetic
  // division from the top coefficient down.
  int deg = static_cast<int>(p.size()) - 1;
  if (deg < 2) return std::nullopt;
  std::vector<BigInt> r = p;
  std::vector<BigInt> q(static_cast<size_t>(deg) - 1, BigInt(0));
  for (int k = deg; k >= 2; --k) {
    BigInt coef = r[k];
    q[k - 2] = coef;
    if (coef == 0) continue;
    r[k] = 0;
    r[k - 1] += tau * coef;
    r[k - 2] -= coef;
  }
  if (r[0] != 0 || r[1] != 0) return std::nullopt;
  return q;
}

namespace {

using Poly = std::vector<BigRat>;  // low-to-high

void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_deriv(const Poly& p) {
  Poly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * BigRat(static_cast<long>(i)));
  poly_trim(d);
  return d;
}

BigRat poly_eval(const Poly& p, const BigRat& x) {
  BigRat r(0);
  for (size_t i = p.size(); i-- > 0;) {
    r = r * x + p[i];
    r.canonicalize();
  }
  return r;
}

// Remainder of a by b, monic-normalized divisor handling via rational ops.
Poly poly_rem(const Poly& a, const Poly& b) {
  Poly r = a;
  poly_trim(r);
  while (r.size() >= b.size() && !r.empty()) {
    BigRat f = r.back() / b.back();
    size_t shift = r.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) {
      r[shift + i] -= f * b[i];
      r[shift + i].canonicalize();
    }
    poly_trim(r);
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    BigRat lead = a.back();
    for (auto& c : a) {
      c /= lead;
      c.canonicalize();
    }
  }
  return a;
}

Poly poly_div_exact(const Poly& a, const Poly& b) {
  Poly r = a, q(a.size(), BigRat(0));
  poly_trim(r);
  while (r.size() >= b.size() && !r.empty()) {
    BigRat f = r.back() / b.back();
    size_t shift = r.size() - b.size();
    q[shift] = f;
    for (size_t i = 0; i < b.size(); ++i) {
      r[shift + i] -= f * b[i];
      r[shift + i].canonicalize();
    }
    poly_trim(r);
  }
  poly_trim(q);
  return q;
}

Poly squarefree_part(const Poly& p) {
  Poly d = poly_deriv(p);
  if (d.empty()) return p;
  Poly g = poly_gcd(p, d);
  if (g.size() <= 1) return p;
  return poly_div_exact(p, g);
}

std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain;
  Poly p0 = p;
  poly_trim(p0);
  chain.push_back(p0);
  Poly p1 = poly_deriv(p0);
  if (p1.empty()) return chain;
  chain.push_back(p1);
  while (true) {
    const Poly& a = chain[chain.size() - 2];
    const Poly& b = chain[chain.size() - 1];
    Poly r = poly_rem(a, b);
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  return chain;
}

int sign_variations(const std::vector<Poly>& chain, const BigRat& x) {
  int v = 0, prev = 0;
  for (const auto& q : chain) {
    int s = sgn(poly_eval(q, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

BigRat cauchy_bound(const Poly& p) {
  BigRat m(0);
  BigRat lead = abs(p.back());
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    BigRat c = abs(p[i]) / lead;
    if (c > m) m = c;
  }
  return m + 1;
}

}  // namespace

int sturm_count(const std::vector<BigRat>& p, const BigRat& a, const BigRat& b) {
  Poly sf = squarefree_part(p);
  poly_trim(sf);
  if (sf.size() <= 1) return 0;
  auto chain = sturm_chain(sf);
  return sign_variations(chain, a) - sign_variations(chain, b);
}

namespace {

std::optional<BigRat> extreme_real_root(const Poly& p, int bits, bool largest) {
  Poly sf = squarefree_part(p);
  poly_trim(sf);
  if (sf.size() <= 1) return std::nullopt;
  auto chain = sturm_chain(sf);
  BigRat bound = cauchy_bound(sf);
  BigRat lo = -bound, hi = bound;
  if (sign_variations(chain, lo) - sign_variations(chain, hi) == 0) return std::nullopt;
  BigRat width_target(BigInt(1), BigInt(1) << bits);
  while (hi - lo > width_target) {
    BigRat mid = (lo + hi) / 2;
    mid.canonicalize();
    if (largest) {
      int cnt = sign_variations(chain, mid) - sign_variations(chain, hi);
      if (cnt >= 1)
        lo = mid;
      else
        hi = mid;
    } else {
      int cnt = sign_variations(chain, lo) - sign_variations(chain, mid);
      if (cnt >= 1)
        hi = mid;
      else
        lo = mid;
    }
  }
  BigRat mid = (lo + hi) / 2;
  mid.canonicalize();
  return mid;
}

}  // namespace

std::optional<BigRat> largest_real_root(const std::vector<BigRat>& p, int bits) {
  return extreme_real_root(p, bits, true);
}

std::optional<BigRat> smallest_real_root(const std::vector<BigRat>& p, int bits) {
  return extreme_real_root(p, bits, false);
}

std::vector<std::complex<double>> poly_roots(const std::vector<BigInt>& p) {
  using C = std::complex<double>;
  int deg = static_cast<int>(p.size()) - 1;
  while (deg > 0 && p[deg] == 0) --deg;
  if (deg <= 0) return {};
  std::vector<C> a(deg + 1);
  double lead = p[deg].get_d();
  for (int i = 0; i <= deg; ++i) a[i] = C(p[i].get_d() / lead, 0.0);
  std::vector<C> z(deg);
  C seed(0.4, 0.9);
  C acc(1.0, 0.0);
  for (int i = 0; i < deg; ++i) {
    acc *= seed;
    z[i] = acc;
  }
  auto eval = [&](C x) {
    C r(0, 0);
    for (int i = deg; i >= 0; --i) r = r * x + a[i];
    return r;
  };
  for (int iter = 0; iter < 1000; ++iter) {
    double shift = 0;
    for (int i = 0; i < deg; ++i) {
      C num = eval(z[i]);
      C den(1, 0);
      for (int j = 0; j < deg; ++j)
        if (j != i) den *= (z[i] - z[j]);
      C dz = num / den;
      z[i] -= dz;
      shift = std::max(shift, std::abs(dz));
    }
    if (shift < 1e-14) break;
  }
  return z;
}

// ---------- entropy ----------

Entropy entropy(const PullbackMap& f) {
  std::vector<BigInt> p = charpoly(f.matrix());
  Poly pr(p.size());
  for (size_t i = 0; i < p.size(); ++i) pr[i] = BigRat(p[i]);

  BigRat bound = cauchy_bound(pr);
  // Real roots strictly outside [-1, 1]; isometries place the spectral
  // radius on the real line, so radius == 1 iff there are none.
  int n_pos = sturm_count(pr, BigRat(1), bound);
  int n_neg = sturm_count(pr, -bound, BigRat(-1));
  if (poly_eval(pr, BigRat(-1)) == 0 && n_neg > 0) {
    // (a, -1] counted the root at -1 itself; it is not outside.
    n_neg -= 1;
  }
  if (n_pos + n_neg == 0) throw NullEntropy("spectral radius is 1");

  std::optional<BigRat> rmax = largest_real_root(pr);
  std::optional<BigRat> rmin = smallest_real_root(pr);
  BigRat radius(0);
  int eigen_sign = 1;
  if (n_pos > 0 && rmax) radius = *rmax;
  if (n_neg > 0 && rmin) {
    BigRat m = -*rmin;
    if (m > radius) {
      radius = m;
      eigen_sign = -1;
    }
  }

  Entropy ent;
  ent.eigen_sign = eigen_sign;
  double rad_d = radius.get_d();
  ent.lambda_approx = rad_d;
  ent.h_top = std::log(rad_d);

  // Try to recognize the quadratic factor t^2 - tau t + 1 for the dominant
  // eigenvalue; tau = radius + 1/radius up to sign.
  double tau_hat = rad_d + 1.0 / rad_d;
  for (long delta : {0L, -1L, 1L}) {
    long tau_abs = static_cast<long>(std::llround(tau_hat)) + delta;
    if (tau_abs <= 2) continue;
    BigInt tau = BigInt(tau_abs) * eigen_sign;
    auto q = divide_quadratic_factor(p, tau);
    if (!q) continue;
    // The other eigenvalues of an isometry sit on the unit circle; accept
    // only if the residual factor confirms dominance.
    bool ok = true;
    for (const auto& root : poly_roots(*q)) {
      if (std::abs(root) > 1.0 + 1e-9) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    QuadNum lam = quad_char_root(BigInt(tau_abs));
    if (std::abs(lam.to_double() - rad_d) > 1e-6 * rad_d) continue;
    ent.exact = true;
    ent.lambda = lam;
    ent.tau = tau_abs;
    ent.lambda_approx = lam.to_double();
    ent.h_top = std::log(ent.lambda_approx);
    return ent;
  }
  return ent;
}

// ---------- eigenclasses ----------

QuadVec kernel_vector(const std::vector<QuadVec>& m_in) {
  size_t n = m_in.size();
  std::vector<QuadVec> m = m_in;
  std::vector<int> pivot_row_of_col(n, -1);
  size_t row = 0;
  for (size_t col = 0; col < n && row < n; ++col) {
    size_t piv = row;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) continue;
    std::swap(m[piv], m[row]);
    QuadNum inv = m[row][col].inv();
    for (size_t j = 0; j < n; ++j) m[row][j] = m[row][j] * inv;
    for (size_t r = 0; r < n; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      QuadNum f = m[r][col];
      for (size_t j = 0; j < n; ++j) m[r][j] = m[r][j] - f * m[row][j];
    }
    pivot_row_of_col[col] = static_cast<int>(row);
    ++row;
  }
  // First free column spans the kernel.
  long free_col = -1;
  for (size_t col = 0; col < n; ++col)
    if (pivot_row_of_col[col] < 0) {
      free_col = static_cast<long>(col);
      break;
    }
  if (free_col < 0) throw Error("kernel requested for a nonsingular matrix");
  QuadVec v(n, QuadNum(BigRat(0)));
  v[free_col] = QuadNum(BigRat(1));
  for (size_t col = 0; col < n; ++col) {
    int pr = pivot_row_of_col[col];
    if (pr >= 0) v[col] = -m[pr][free_col];
  }
  return v;
}

namespace {

// Scale to Z[sqrt(d)] entries with content 1.
void canonicalize_quadvec(QuadVec& v) {
  BigInt l = 1;
  for (const auto& q : v) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.a().get_den().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.b().get_den().get_mpz_t());
  }
  BigInt g = 0;
  std::vector<std::pair<BigInt, BigInt>> parts;
  parts.reserve(v.size());
  for (const auto& q : v) {
    BigRat a = q.a() * BigRat(l);
    BigRat b = q.b() * BigRat(l);
    a.canonicalize();
    b.canonicalize();
    parts.emplace_back(a.get_num(), b.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), parts.back().first.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), parts.back().second.get_mpz_t());
  }
  if (g == 0) throw Error("zero eigenvector");
  long d = 1;
  for (const auto& q : v)
    if (!q.is_rational()) d = q.d();
  for (size_t i = 0; i < v.size(); ++i) {
    BigRat a(parts[i].first, g), b(parts[i].second, g);
    a.canonicalize();
    b.canonicalize();
    v[i] = (b == 0) ? QuadNum(a) : QuadNum(a, b, d);
  }
}

std::vector<double> to_doubles(const QuadVec& v) {
  std::vector<double> r;
  r.reserve(v.size());
  for (const auto& q : v) r.push_back(q.to_double());
  return r;
}

// Power iteration fallback for a non-quadratic dominant eigenvalue.
std::vector<double> power_iterate(const IntMat& m, const std::vector<double>& start,
                                  double* lambda_out) {
  size_t n = m.size();
  std::vector<double> v = start;
  double lam = 0;
  for (int iter = 0; iter < 200000; ++iter) {
    std::vector<double> w(n, 0.0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) w[i] += m[i][j].get_d() * v[j];
    double norm = 0;
    for (double x : w) norm = std::max(norm, std::fabs(x));
    if (norm == 0) break;
    for (double& x : w) x /= norm;
    double delta = 0;
    for (size_t i = 0; i < n; ++i) delta = std::max(delta, std::fabs(w[i] - v[i]));
    lam = norm;
    v = w;
    if (delta < 1e-13 && iter > 3) break;
  }
  if (lambda_out) *lambda_out = lam;
  return v;
}

}  // namespace

EigenClasses nef_eigenclasses(const PullbackMap& f, std::optional<IntVec> ample) {
  Entropy ent = entropy(f);
  if (!ample) throw AmbiguousCone("an ample reference class is required to fix signs");
  const NSLattice& lat = f.lattice();
  size_t n = lat.gram.size();
  if (ample->size() != n) throw InvalidPoint("ample class dimension mismatch");

  EigenClasses out;
  if (!ent.exact) {
    // Numeric fallback: expanding and contracting classes by power iteration.
    std::vector<double> start(n);
    for (size_t i = 0; i < n; ++i) start[i] = (*ample)[i].get_d();
    out.exact = false;
    out.lambda_f = 0;
    out.nu_plus_f = power_iterate(f.matrix(), start, &out.lambda_f);
    double lam_inv = 0;
    out.nu_minus_f = power_iterate(f.inverse_matrix(), start, &lam_inv);
    auto fix_sign = [&](std::vector<double>& v) {
      double s = 0;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) s += v[i] * lat.gram[i][j].get_d() * (*ample)[j].get_d();
      if (s < 0)
        for (double& x : v) x = -x;
    };
    fix_sign(out.nu_plus_f);
    fix_sign(out.nu_minus_f);
    out.nu_f.resize(n);
    for (size_t i = 0; i < n; ++i) out.nu_f[i] = out.nu_plus_f[i] + out.nu_minus_f[i];
    return out;
  }

  if (ent.eigen_sign < 0)
    throw AmbiguousCone("dominant eigenvalue is negative; no nef eigenclass exists");

  const QuadNum lambda = ent.lambda;
  std::vector<QuadVec> shifted(n, QuadVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      shifted[i][j] = QuadNum(BigRat(f.matrix()[i][j]));
      if (i == j) shifted[i][j] = shifted[i][j] - lambda;
    }
  QuadVec v = kernel_vector(shifted);
  canonicalize_quadvec(v);
  int s = lat.pair(v, *ample).sign();
  if (s == 0) throw AmbiguousCone("eigenclass pairs to zero with the ample reference");
  if (s < 0)
    for (auto& q : v) q = -q;

  QuadVec w(n);
  for (size_t i = 0; i < n; ++i) w[i] = v[i].conj();
  int sw = lat.pair(w, *ample).sign();
  if (sw == 0) throw AmbiguousCone("conjugate eigenclass pairs to zero with the ample reference");
  if (sw < 0)
    for (auto& q : w) q = -q;

  // Internal consistency: exact eigen identities and isotropy.
  {
    QuadVec mv = f.apply(v);
    QuadVec mw = f.apply(w);
    QuadNum lam_inv = lambda.inv();
    for (size_t i = 0; i < n; ++i) {
      if (mv[i] != lambda * v[i]) throw Error("eigenvector identity failed");
      if (mw[i] != lam_inv * w[i]) throw Error("conjugate eigenvector identity failed");
    }
    if (!lat.pair(v, v).is_zero() || !lat.pair(w, w).is_zero())
      throw Error("eigenclass self-intersection is not zero");
  }

  out.exact = true;
  out.lambda = lambda;
  out.nu_plus = v;
  out.nu_minus = w;
  out.nu.resize(n);
  for (size_t i = 0; i < n; ++i) out.nu[i] = v[i] + w[i];
  out.nu_sq = lat.pair(out.nu, out.nu);
  if (out.nu_sq.sign() <= 0) throw Error("nef-and-big class has nonpositive square");
  out.lambda_f = lambda.to_double();
  out.nu_plus_f = to_doubles(out.nu_plus);
  out.nu_minus_f = to_doubles(out.nu_minus);
  out.nu_f = to_doubles(out.nu);
  return out;
}

CurveTest periodic_curve_test(const EigenClasses& eig, const NSLattice& lat,
                              const IntVec& curve_class) {
  if (!eig.exact) throw NonQuadraticSpectrum("exact eigenclasses required");
  CurveTest t;
  bool all_zero = true;
  for (const auto& c : curve_class)
    if (c != 0) all_zero = false;
  if (all_zero) {
    // A zero class pairs to zero with everything; report it periodic but
    // flagged so consumers do not feed it into the perturbation machinery.
    t.periodic = true;
    t.degenerate = true;
    return t;
  }
  t.pair_plus = lat.pair(eig.nu_plus, curve_class);
  t.pair_minus = lat.pair(eig.nu_minus, curve_class);
  t.pair_nu = lat.pair(eig.nu, curve_class);
  t.periodic = t.pair_nu.is_zero();
  return t;
}

// ---------- ample perturbation ----------

namespace {

// Exact PSD test for a symmetric integer matrix: the characteristic
// polynomial of a PSD matrix, written as q(s) = (-1)^m p(-s), has only
// nonnegative coefficients, and conversely (all eigenvalues are real).
bool is_psd(const IntMat& m) {
  std::vector<BigInt> p = charpoly(m);
  int deg = static_cast<int>(p.size()) - 1;
  for (int k = 0; k <= deg; ++k) {
    BigInt c = p[k];
    if ((deg - k) % 2 == 1) c = -c;
    if (c < 0) return false;
  }
  return true;
}

// Solve A x = rhs over exact rationals; false when singular.
bool rat_solve(const std::vector<RatVec>& a_in, const RatVec& rhs_in, RatVec& x) {
  size_t n = a_in.size();
  std::vector<RatVec> a = a_in;
  RatVec rhs = rhs_in;
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return false;
    std::swap(a[piv], a[col]);
    std::swap(rhs[piv], rhs[col]);
    BigRat inv = BigRat(1) / a[col][col];
    for (size_t j = col; j < n; ++j) {
      a[col][j] *= inv;
      a[col][j].canonicalize();
    }
    rhs[col] *= inv;
    rhs[col].canonicalize();
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      BigRat f = a[r][col];
      for (size_t j = col; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        a[r][j].canonicalize();
      }
      rhs[r] -= f * rhs[col];
      rhs[r].canonicalize();
    }
  }
  x = rhs;
  return true;
}

}  // namespace

Perturbation ample_perturbation(const EigenClasses& eig, const NSLattice& lat,
                                const std::vector<IntVec>& curves) {
  if (!eig.exact) throw NonQuadraticSpectrum("exact eigenclasses required");
  size_t n = lat.gram.size();
  Perturbation out;
  out.z.assign(n, BigInt(0));
  if (curves.empty()) {
    out.unconstrained = true;
    out.eps_max = 0;
    return out;
  }
  size_t m = curves.size();
  for (const auto& c : curves) {
    if (c.size() != n) throw InvalidPoint("curve class dimension mismatch");
    if (!lat.pair(eig.nu, c).is_zero())
      throw InvalidPoint("curve class does not pair to zero with nu");
  }

  // Gram matrix of the null configuration; must be negative semidefinite.
  IntMat nmat(m, IntVec(m));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) nmat[i][j] = lat.pair(curves[i], curves[j]);
  IntMat neg(m, IntVec(m));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) neg[i][j] = -nmat[i][j];
  if (!is_psd(neg))
    throw InfeasibleConfiguration("null configuration is not negative semidefinite");
  if (det(nmat) == 0)
    throw InfeasibleConfiguration(
        "null configuration is degenerate; no strictly negative combination exists");

  // Solve N a = -1. For an intersection matrix of distinct curves (negative
  // definite, nonnegative off-diagonal) the solution is strictly positive.
  std::vector<RatVec> nr(m, RatVec(m));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) nr[i][j] = BigRat(nmat[i][j]);
  RatVec rhs(m, BigRat(-1)), a;
  if (!rat_solve(nr, rhs, a))
    throw InfeasibleConfiguration("null configuration is singular");
  BigInt l = 1;
  for (auto& ai : a) {
    ai.canonicalize();
    if (ai <= 0) throw InfeasibleConfiguration("no positive combination pairs negatively");
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), ai.get_den().get_mpz_t());
  }
  std::vector<BigInt> ai;
  BigInt g = 0;
  for (const auto& q : a) {
    ai.push_back(q.get_num() * (l / q.get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ai.back().get_mpz_t());
  }
  for (auto& x : ai) x /= g;

  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j) out.z[j] += ai[i] * curves[i][j];
  out.a = ai;

  // (Z, C_j) < 0 must hold strictly for every supplied class.
  for (size_t j = 0; j < m; ++j)
    if (lat.pair(out.z, curves[j]) >= 0)
      throw InfeasibleConfiguration("combination fails strict negativity");

  // (nu - eps Z)^2 = (nu^2) + eps^2 (Z^2) since (nu, Z) = 0; find the largest
  // eps = k/2^16 keeping it positive. (Z^2) < 0 because Z pairs negatively
  // with each of its own summands.
  BigInt z2 = lat.pair(out.z, out.z);
  const long denom_bits = 16;
  BigInt denom = BigInt(1) << denom_bits;
  auto positive_at = [&](const BigInt& k) {
    BigRat e2(k * k, denom * denom);
    e2.canonicalize();
    QuadNum val = eig.nu_sq + QuadNum(BigRat(z2)) * QuadNum(e2);
    return val.sign() > 0;
  };
  double bound_d = std::sqrt(eig.nu_sq.to_double() / -z2.get_d());
  BigInt hi = BigInt(static_cast<long>(bound_d * 65536.0) + 2);
  BigInt lo = 0;
  while (positive_at(hi)) hi *= 2;
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (positive_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  if (lo == 0)
    throw InfeasibleConfiguration("epsilon below the 2^-16 resolution");
  out.eps_max = BigRat(lo, denom);
  out.eps_max.canonicalize();
  return out;
}

}  // namespace surfdyn::spectral
