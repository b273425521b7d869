// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "surfdyn/quadnum.hpp"

namespace surfdyn::spectral {

using IntVec = std::vector<BigInt>;
using IntMat = std::vector<IntVec>;
using RatVec = std::vector<BigRat>;
using QuadVec = std::vector<QuadNum>;

// Hyperbolic lattice model of the Neron-Severi group: an integer Gram
// matrix of signature (1, rank-1) in a fixed basis. Signature is the
// caller's responsibility; everything here only needs symmetry.
struct NSLattice {
  IntMat gram;
  std::vector<std::string> labels;  // optional basis labels

  int rank() const { return static_cast<int>(gram.size()); }
  // Intersection pairing in the given basis.
  BigInt pair(const IntVec& x, const IntVec& y) const;
  QuadNum pair(const QuadVec& x, const QuadVec& y) const;
  QuadNum pair(const QuadVec& x, const IntVec& y) const;
};

NSLattice make_lattice(const IntMat& gram, std::vector<std::string> labels = {});

// Pullback action of an automorphism on the lattice. Construction verifies
// M^T G M = G and det M = +-1 exactly.
class PullbackMap {
 public:
  PullbackMap(NSLattice lattice, IntMat m);

  const NSLattice& lattice() const { return lat_; }
  const IntMat& matrix() const { return m_; }
  const IntMat& inverse_matrix() const { return minv_; }
  const BigInt& det() const { return det_; }

  IntVec apply(const IntVec& v) const;
  QuadVec apply(const QuadVec& v) const;
  IntVec apply_inverse(const IntVec& v) const;
  QuadVec apply_inverse(const QuadVec& v) const;

 private:
  NSLattice lat_;
  IntMat m_, minv_;
  BigInt det_;
};

// Spectral radius data. When the dominant eigenvalue generates a quadratic
// field (the supported surfaces all do), lambda is exact and tau is the
// integer trace of its minimal factor t^2 - tau t + 1; eigen_sign tells
// whether the actual dominant eigenvalue is +lambda or -lambda. Otherwise
// exact == false and lambda_approx isolates the radius to 1e-12.
struct Entropy {
  bool exact = false;
  QuadNum lambda;      // radius, positive, exact path only
  long tau = 0;        // |trace| of the quadratic factor, exact path only
  int eigen_sign = 1;  // sign of the dominant eigenvalue
  double lambda_approx = 0.0;
  double h_top = 0.0;
};

// Throws NullEntropy when the spectral radius is exactly 1.
Entropy entropy(const PullbackMap& f);

// Nef eigenclass data for quadratic lambda. nu_plus spans the expanding
// eigenline, scaled so its entries lie in Z[sqrt(d)] with content 1 and
// (nu_plus, ample) > 0; nu_minus is its Galois conjugate with the same sign
// rule; nu = nu_plus + nu_minus. For non-quadratic lambda the exact fields
// are absent and the *_f fields come from power iteration (tolerance 1e-12).
struct EigenClasses {
  bool exact = false;
  QuadNum lambda;  // dominant eigenvalue (positive), exact path only
  QuadVec nu_plus, nu_minus, nu;
  QuadNum nu_sq;  // (nu . nu), exact path only
  double lambda_f = 0.0;
  std::vector<double> nu_plus_f, nu_minus_f, nu_f;
};

EigenClasses nef_eigenclasses(const PullbackMap& f, std::optional<IntVec> ample);

// Exact pairing report for one curve class against the eigenclasses.
struct CurveTest {
  QuadNum pair_plus, pair_minus, pair_nu;
  bool periodic = false;    // (nu, c) == 0
  bool degenerate = false;  // zero class: periodic trivially, carries no curve
};

CurveTest periodic_curve_test(const EigenClasses& eig, const NSLattice& lat,
                              const IntVec& curve_class);

// Effective combination Z = sum a_i C_i (a_i > 0, primitive integers) with
// (Z, C_j) < 0 for every supplied class, plus the largest epsilon with
// denominator 2^16 keeping (nu - eps Z)^2 > 0. With no curves supplied the
// result is the unconstrained sentinel.
struct Perturbation {
  std::vector<BigInt> a;  // empty when no curves were supplied
  IntVec z;               // the class Z in the lattice basis (zeros if none)
  BigRat eps_max;         // largest admissible epsilon, 0 when unconstrained
  bool unconstrained = false;
};

Perturbation ample_perturbation(const EigenClasses& eig, const NSLattice& lat,
                                const std::vector<IntVec>& curves);

// --- exact linear/polynomial helpers (exposed for tests) ---

// Characteristic polynomial of an integer matrix, coefficients low-to-high,
// monic. Faddeev-LeVerrier; all intermediate divisions are exact.
std::vector<BigInt> charpoly(const IntMat& m);

// Divides p by t^2 - tau t + 1; returns quotient iff the division is exact.
std::optional<std::vector<BigInt>> divide_quadratic_factor(
    const std::vector<BigInt>& p, const BigInt& tau);

// Number of real roots of p (squarefree part is taken internally) in the
// half-open interval (a, b], by Sturm's theorem.
int sturm_count(const std::vector<BigRat>& p, const BigRat& a, const BigRat& b);

// Largest real root of p isolated to width < 2^-bits; empty if none.
std::optional<BigRat> largest_real_root(const std::vector<BigRat>& p, int bits = 80);
// Smallest real root, same contract.
std::optional<BigRat> smallest_real_root(const std::vector<BigRat>& p, int bits = 80);

// All complex roots, Durand-Kerner in double precision. Degree stays small.
std::vector<std::complex<double>> poly_roots(const std::vector<BigInt>& p);

BigInt det(const IntMat& m);
IntMat mat_mul(const IntMat& a, const IntMat& b);
IntMat transpose(const IntMat& m);
IntMat identity(int n);
// Inverse of a matrix with det +-1 (integer entries guaranteed).
IntMat unimodular_inverse(const IntMat& m);

// Kernel vector of a square QuadNum matrix with one-dimensional kernel.
QuadVec kernel_vector(const std::vector<QuadVec>& m);

}  // namespace surfdyn::spectral
