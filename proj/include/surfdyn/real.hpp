// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace surfdyn {

// Process-wide default mantissa size in bits for Real values. 128 unless
// overridden (CLI flag or SURFDYN_PRECISION environment variable).
int default_precision();
void set_default_precision(int bits);

// Thin RAII wrapper over an mpfr_t. Values carry their precision; binary
// operations round to the larger of the two operand precisions. All
// roundings are to nearest.
class Real {
 public:
  Real();
  explicit Real(int prec);
  Real(double x, int prec);
  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  static Real from_int(long n, int prec);
  static Real from_bigint(const mpz_class& n, int prec);
  static Real from_bigrat(const mpq_class& q, int prec);
  static Real log2_const(int prec);
  static Real pi_const(int prec);

  int precision() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // Decimal string with the given number of significant digits, printf %.*g
  // style. Used by every serializer so formatting is uniform.
  std::string str(int sig_digits = 17) const;

  Real operator+(const Real& o) const;
  Real operator-(const Real& o) const;
  Real operator*(const Real& o) const;
  Real operator/(const Real& o) const;
  Real operator-() const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);

  bool operator<(const Real& o) const { return mpfr_cmp(v_, o.v_) < 0; }
  bool operator>(const Real& o) const { return mpfr_cmp(v_, o.v_) > 0; }
  bool operator<=(const Real& o) const { return mpfr_cmp(v_, o.v_) <= 0; }
  bool operator>=(const Real& o) const { return mpfr_cmp(v_, o.v_) >= 0; }
  bool operator==(const Real& o) const { return mpfr_equal_p(v_, o.v_) != 0; }
  bool operator!=(const Real& o) const { return !(*this == o); }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  Real abs() const;
  Real log() const;
  Real exp() const;
  Real sqrt() const;
  // this^n for signed integer n.
  Real pow_si(long n) const;

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  mpfr_t v_;
};

Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
inline Real abs(const Real& a) { return a.abs(); }

}  // namespace surfdyn
