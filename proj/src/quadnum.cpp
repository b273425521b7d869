// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include "surfdyn/quadnum.hpp"

#include <sstream>

#include "surfdyn/errors.hpp"

namespace surfdyn {

namespace {

bool is_squarefree_gt1(long d) {
  if (d <= 1) return false;
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

}  // namespace

QuadNum::QuadNum(const BigRat& a, const BigRat& b, long d) : a_(a), b_(b), d_(d) {
  if (b_ == 0) {
    d_ = 1;
    return;
  }
  if (d == 1) {  // sqrt(1) = 1: fold b into the rational part
    a_ += b_;
    b_ = 0;
    canon();
    return;
  }
  if (!is_squarefree_gt1(d)) {
    throw InvalidPoint("quadratic discriminant must be squarefree and > 1");
  }
  canon();
}

void QuadNum::canon() {
  a_.canonicalize();
  b_.canonicalize();
  if (b_ == 0) d_ = 1;
}

long QuadNum::common_d(const QuadNum& x, const QuadNum& y) {
  if (x.d_ == y.d_) return x.d_;
  if (x.is_rational()) return y.d_;
  if (y.is_rational()) return x.d_;
  throw MixedField("cannot combine sqrt(" + std::to_string(x.d_) + ") with sqrt(" +
                   std::to_string(y.d_) + ")");
}

bool QuadNum::compatible(const QuadNum& x, const QuadNum& y) {
  return x.d_ == y.d_ || x.is_rational() || y.is_rational();
}

QuadNum QuadNum::operator+(const QuadNum& o) const {
  long d = common_d(*this, o);
  QuadNum r;
  r.a_ = a_ + o.a_;
  r.b_ = b_ + o.b_;
  r.d_ = d;
  r.canon();
  return r;
}

QuadNum QuadNum::operator-(const QuadNum& o) const { return *this + (-o); }

QuadNum QuadNum::operator-() const {
  QuadNum r;
  r.a_ = -a_;
  r.b_ = -b_;
  r.d_ = d_;
  return r;
}

QuadNum QuadNum::operator*(const QuadNum& o) const {
  long d = common_d(*this, o);
  QuadNum r;
  r.a_ = a_ * o.a_ + BigRat(d) * b_ * o.b_;
  r.b_ = a_ * o.b_ + b_ * o.a_;
  r.d_ = d;
  r.canon();
  return r;
}

QuadNum QuadNum::operator/(const QuadNum& o) const { return *this * o.inv(); }

bool QuadNum::operator==(const QuadNum& o) const {
  if (!compatible(*this, o)) return false;
  return a_ == o.a_ && b_ == o.b_;
}

QuadNum QuadNum::conj() const {
  QuadNum r;
  r.a_ = a_;
  r.b_ = -b_;
  r.d_ = d_;
  r.canon();
  return r;
}

BigRat QuadNum::norm() const {
  BigRat n = a_ * a_ - BigRat(d_) * b_ * b_;
  n.canonicalize();
  return n;
}

BigRat QuadNum::trace() const { return BigRat(2) * a_; }

QuadNum QuadNum::inv() const {
  BigRat n = norm();
  if (n == 0) throw InvalidPoint("division by zero quadratic number");
  QuadNum r;
  r.a_ = a_ / n;
  r.b_ = -b_ / n;
  r.d_ = d_;
  r.canon();
  return r;
}

QuadNum QuadNum::pow(long n) const {
  QuadNum base = *this;
  if (n < 0) {
    base = inv();
    n = -n;
  }
  QuadNum acc(BigRat(1));
  while (n > 0) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

int QuadNum::sign() const {
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 against d b^2. a + b sqrt(d) has the sign of
  // the dominant term.
  BigRat lhs = a_ * a_;
  BigRat rhs = BigRat(d_) * b_ * b_;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;
  return c > 0 ? sa : sb;
}

Real QuadNum::to_real(int prec) const {
  Real ra = Real::from_bigrat(a_, prec);
  if (b_ == 0) return ra;
  Real rd = Real::from_int(d_, prec).sqrt();
  return ra + Real::from_bigrat(b_, prec) * rd;
}

double QuadNum::to_double() const { return to_real(64).to_double(); }

std::string QuadNum::str() const {
  std::ostringstream os;
  if (b_ == 0) {
    os << a_;
    return os.str();
  }
  os << a_ << (sgn(b_) < 0 ? " - " : " + ");
  BigRat ab = abs(b_);
  if (ab != 1) os << ab << "*";
  os << "sqrt(" << d_ << ")";
  return os.str();
}

SquarePart extract_square_part(const BigInt& n) {
  if (n <= 0) throw InvalidPoint("square part extraction needs a positive integer");
  BigInt s = 1, d = n;
  // Strip square factors by trial division; inputs here are traces squared,
  // so this stays tiny.
  BigInt p = 2;
  BigInt rest = n;
  BigInt dd = 1;
  while (p * p <= rest) {
    if (rest % p == 0) {
      int e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      for (int i = 0; i < e / 2; ++i) s *= p;
      if (e % 2) dd *= p;
    }
    ++p;
  }
  dd *= rest;
  d = dd;
  return SquarePart{s, d};
}

QuadNum quad_char_root(const BigInt& tau) {
  if (abs(tau) <= 2) throw NotHyperbolic("trace must satisfy |tau| > 2");
  BigInt disc = tau * tau - 4;
  SquarePart sp = extract_square_part(disc);
  // (tau + s*sqrt(d)) / 2
  BigRat a(tau, 2);
  a.canonicalize();
  BigRat b(sp.s, 2);
  b.canonicalize();
  if (sp.d == 1) {
    // Perfect-square discriminant: rational root.
    return QuadNum(a + b);
  }
  if (!sp.d.fits_slong_p()) throw InvalidPoint("discriminant too large");
  return QuadNum(a, b, sp.d.get_si());
}

}  // namespace surfdyn
