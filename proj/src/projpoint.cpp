// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include "surfdyn/projpoint.hpp"

#include <sstream>

#include "surfdyn/errors.hpp"

namespace surfdyn {

ProjPoint::ProjPoint(const std::vector<BigRat>& coords) {
  if (coords.empty()) throw InvalidPoint("empty coordinate vector");
  // Clear denominators with the lcm, then normalize the integer vector.
  BigInt l = 1;
  for (const auto& q : coords) {
    BigRat c = q;
    c.canonicalize();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  }
  std::vector<BigInt> v;
  v.reserve(coords.size());
  for (const auto& q : coords) {
    BigRat c = q;
    c.canonicalize();
    v.push_back(c.get_num() * (l / c.get_den()));
  }
  normalize(std::move(v));
}

ProjPoint::ProjPoint(const std::vector<BigInt>& coords) {
  if (coords.empty()) throw InvalidPoint("empty coordinate vector");
  normalize(coords);
}

ProjPoint ProjPoint::from_ints(std::initializer_list<long> coords) {
  std::vector<BigInt> v;
  v.reserve(coords.size());
  for (long c : coords) v.emplace_back(c);
  return ProjPoint(v);
}

void ProjPoint::normalize(std::vector<BigInt> v) {
  BigInt g = 0;
  for (const auto& c : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) throw InvalidPoint("zero vector is not a projective point");
  int lead = 0;
  for (const auto& c : v) {
    if (c != 0) {
      lead = sgn(c);
      break;
    }
  }
  if (lead < 0) g = -g;
  for (auto& c : v) c /= g;
  x_ = std::move(v);
}

size_t ProjPoint::max_bits() const {
  size_t best = 0;
  for (const auto& c : x_) {
    if (c == 0) continue;
    size_t b = mpz_sizeinbase(c.get_mpz_t(), 2);
    if (b > best) best = b;
  }
  return best;
}

Real log_bigint(const BigInt& n, int prec) {
  size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  size_t keep = static_cast<size_t>(prec) + 64;
  if (bits <= keep) {
    Real r = Real::from_bigint(n, prec);
    return r.log();
  }
  size_t drop = bits - keep;
  BigInt top;
  mpz_tdiv_q_2exp(top.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
  Real r = Real::from_bigint(top, prec).log();
  r += Real::from_int(static_cast<long>(drop), prec) * Real::log2_const(prec);
  return r;
}

Real ProjPoint::naive_height(int prec) const {
  BigInt m = 0;
  for (const auto& c : x_) {
    BigInt a = abs(c);
    if (a > m) m = a;
  }
  // Primitive representative: m >= 1 always.
  if (m == 1) return Real(prec);
  return log_bigint(m, prec);
}

std::string ProjPoint::str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < x_.size(); ++i) {
    if (i) os << " : ";
    os << x_[i];
  }
  os << ")";
  return os.str();
}

}  // namespace surfdyn
