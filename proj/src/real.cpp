// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include "surfdyn/real.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <utility>
#include <vector>

namespace surfdyn {

namespace {
std::atomic<int> g_default_prec{128};
}

int default_precision() { return g_default_prec.load(); }

void set_default_precision(int bits) {
  if (bits < 53) bits = 53;
  g_default_prec.store(bits);
}

Real::Real() { mpfr_init2(v_, g_default_prec.load()); mpfr_set_zero(v_, 1); }

Real::Real(int prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }

Real::Real(double x, int prec) {
  mpfr_init2(v_, prec);
  mpfr_set_d(v_, x, MPFR_RNDN);
}

Real::Real(const Real& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::from_int(long n, int prec) {
  Real r(prec);
  mpfr_set_si(r.v_, n, MPFR_RNDN);
  return r;
}

Real Real::from_bigint(const mpz_class& n, int prec) {
  Real r(prec);
  mpfr_set_z(r.v_, n.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real Real::from_bigrat(const mpq_class& q, int prec) {
  Real r(prec);
  mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real Real::log2_const(int prec) {
  Real r(prec);
  mpfr_const_log2(r.v_, MPFR_RNDN);
  return r;
}

Real Real::pi_const(int prec) {
  Real r(prec);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

std::string Real::str(int sig_digits) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%%.%dRg", sig_digits);
  // First call sizes the output.
  int n = mpfr_snprintf(nullptr, 0, buf, v_);
  std::vector<char> out(static_cast<size_t>(n) + 1);
  mpfr_snprintf(out.data(), out.size(), buf, v_);
  return std::string(out.data());
}

namespace {
inline int join_prec(mpfr_srcptr a, mpfr_srcptr b) {
  mpfr_prec_t pa = mpfr_get_prec(a), pb = mpfr_get_prec(b);
  return static_cast<int>(pa > pb ? pa : pb);
}
}  // namespace

Real Real::operator+(const Real& o) const {
  Real r(join_prec(v_, o.v_));
  mpfr_add(r.v_, v_, o.v_, MPFR_RNDN);
  return r;
}

Real Real::operator-(const Real& o) const {
  Real r(join_prec(v_, o.v_));
  mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN);
  return r;
}

Real Real::operator*(const Real& o) const {
  Real r(join_prec(v_, o.v_));
  mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN);
  return r;
}

Real Real::operator/(const Real& o) const {
  Real r(join_prec(v_, o.v_));
  mpfr_div(r.v_, v_, o.v_, MPFR_RNDN);
  return r;
}

Real Real::operator-() const {
  Real r(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

Real& Real::operator+=(const Real& o) {
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real Real::abs() const {
  Real r(precision());
  mpfr_abs(r.v_, v_, MPFR_RNDN);
  return r;
}

Real Real::log() const {
  Real r(precision());
  mpfr_log(r.v_, v_, MPFR_RNDN);
  return r;
}

Real Real::exp() const {
  Real r(precision());
  mpfr_exp(r.v_, v_, MPFR_RNDN);
  return r;
}

Real Real::sqrt() const {
  Real r(precision());
  mpfr_sqrt(r.v_, v_, MPFR_RNDN);
  return r;
}

Real Real::pow_si(long n) const {
  Real r(precision());
  mpfr_pow_si(r.v_, v_, n, MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
Real min(const Real& a, const Real& b) { return a <= b ? a : b; }

}  // namespace surfdyn
