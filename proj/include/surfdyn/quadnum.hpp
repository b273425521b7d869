// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>

#include "surfdyn/real.hpp"

namespace surfdyn {

using BigInt = mpz_class;
using BigRat = mpq_class;

// Element a + b*sqrt(d) of a real quadratic field, a and b exact rationals,
// d > 1 squarefree. d == 1 encodes a plain rational (b folded into a).
// Arithmetic is exact. Operands from different fields are rejected unless
// one side is rational.
class QuadNum {
 public:
  QuadNum() : a_(0), b_(0), d_(1) {}
  QuadNum(const BigRat& a) : a_(a), b_(0), d_(1) { canon(); }
  QuadNum(long a) : a_(a), b_(0), d_(1) {}
  QuadNum(const BigRat& a, const BigRat& b, long d);

  const BigRat& a() const { return a_; }
  const BigRat& b() const { return b_; }
  long d() const { return d_; }

  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  QuadNum operator+(const QuadNum& o) const;
  QuadNum operator-(const QuadNum& o) const;
  QuadNum operator*(const QuadNum& o) const;
  QuadNum operator/(const QuadNum& o) const;
  QuadNum operator-() const;
  bool operator==(const QuadNum& o) const;
  bool operator!=(const QuadNum& o) const { return !(*this == o); }

  // Galois conjugate a - b*sqrt(d).
  QuadNum conj() const;
  // Field norm a^2 - d b^2 (rational).
  BigRat norm() const;
  // Field trace 2a (rational).
  BigRat trace() const;
  // Multiplicative inverse; throws on zero.
  QuadNum inv() const;
  // Exact integer power (negative allowed when invertible).
  QuadNum pow(long n) const;

  // Sign of the real value under sqrt(d) > 0, computed exactly.
  int sign() const;
  bool operator<(const QuadNum& o) const { return (*this - o).sign() < 0; }
  bool operator>(const QuadNum& o) const { return (*this - o).sign() > 0; }
  bool operator<=(const QuadNum& o) const { return (*this - o).sign() <= 0; }
  bool operator>=(const QuadNum& o) const { return (*this - o).sign() >= 0; }

  Real to_real(int prec) const;
  double to_double() const;
  // Rendered as "a + b*sqrt(d)" with exact rationals.
  std::string str() const;

  // True if values sit in compatible fields (equal d or one rational).
  static bool compatible(const QuadNum& x, const QuadNum& y);

 private:
  void canon();
  static long common_d(const QuadNum& x, const QuadNum& y);

  BigRat a_, b_;
  long d_;
};

// Largest root (tau + sqrt(tau^2-4))/2 of t^2 - tau*t + 1 for integer trace
// tau with |tau| > 2. The squarefree part of tau^2-4 becomes the field
// discriminant. Throws NotHyperbolic for |tau| <= 2.
QuadNum quad_char_root(const BigInt& tau);

// Splits n > 0 as s^2 * d with d squarefree; returns {s, d}.
struct SquarePart {
  BigInt s;
  BigInt d;
};
SquarePart extract_square_part(const BigInt& n);

}  // namespace surfdyn
