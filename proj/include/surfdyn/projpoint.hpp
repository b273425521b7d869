// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include "surfdyn/quadnum.hpp"
#include "surfdyn/real.hpp"

namespace surfdyn {

// Point of P^n(Q) stored in the unique primitive integer representative:
// gcd of coordinates 1, first nonzero coordinate positive.
class ProjPoint {
 public:
  ProjPoint() = default;
  // Normalizes rational homogeneous coordinates. Throws InvalidPoint on the
  // zero vector.
  explicit ProjPoint(const std::vector<BigRat>& coords);
  explicit ProjPoint(const std::vector<BigInt>& coords);
  static ProjPoint from_ints(std::initializer_list<long> coords);

  size_t dim() const { return x_.size(); }
  const std::vector<BigInt>& coords() const { return x_; }
  const BigInt& operator[](size_t i) const { return x_[i]; }

  bool operator==(const ProjPoint& o) const { return x_ == o.x_; }
  bool operator!=(const ProjPoint& o) const { return x_ != o.x_; }
  bool operator<(const ProjPoint& o) const { return x_ < o.x_; }

  // log max |x_i| over the primitive representative, evaluated at the given
  // mantissa precision. Large coordinates are handled by splitting off the
  // bit length, so only the top bits are ever converted to floating point.
  Real naive_height(int prec = default_precision()) const;

  // Bit length of the largest |coordinate|; proxy for coordinate size.
  size_t max_bits() const;

  std::string str() const;

 private:
  void normalize(std::vector<BigInt> v);
  std::vector<BigInt> x_;
};

// log of a positive integer at the given precision, via bit-length
// splitting: log n = (L-k) log 2 + log(n >> (L-k)) for k ~ prec bits.
Real log_bigint(const BigInt& n, int prec);

}  // namespace surfdyn
