// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace surfdyn {

// Base class for every error raised by the library. Each condition gets its
// own type so callers can branch on the failure mode instead of parsing
// message text.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input value outside a constructor's domain (zero vector, non-squarefree d,
// dimension mismatch, zero factor of a product point, ...).
struct InvalidPoint : Error {
  using Error::Error;
};

// quad_char_root called with |trace| <= 2.
struct NotHyperbolic : Error {
  using Error::Error;
};

// Mixing quadratic numbers from different fields without an exact embedding.
struct MixedField : Error {
  using Error::Error;
};

// Pullback matrix does not preserve the intersection form, or is singular.
struct NotIsometry : Error {
  using Error::Error;
};

// Spectral radius of the pullback is 1: no positive entropy.
struct NullEntropy : Error {
  using Error::Error;
};

// Eigenclass sign cannot be fixed: no ample reference supplied, or the
// dominant eigenvalue is not positive.
struct AmbiguousCone : Error {
  using Error::Error;
};

// ample_perturbation cannot produce a strict certificate for the supplied
// curve configuration.
struct InfeasibleConfiguration : Error {
  using Error::Error;
};

// Dominant eigenvalue is not quadratic over Q; exact eigenclass data is
// unavailable (numeric fallback still applies where documented).
struct NonQuadraticSpectrum : Error {
  using Error::Error;
};

// The fiber through the point degenerates: the residual quadratic vanishes
// identically, so the involution is undefined there.
struct DegenerateFiber : Error {
  int axis;
  explicit DegenerateFiber(int ax)
      : Error("fiber quadratic vanishes identically on axis " + std::to_string(ax)),
        axis(ax) {}
  DegenerateFiber(int ax, const std::string& msg) : Error(msg), axis(ax) {}
};

// The linear slice defining the fiber vanishes identically (Wehler family
// only: the line L(x,.) = 0 is not a line).
struct DegenerateLine : Error {
  int axis;
  explicit DegenerateLine(int ax)
      : Error("fiber line vanishes identically on axis " + std::to_string(ax)),
        axis(ax) {}
  DegenerateLine(int ax, const std::string& msg) : Error(msg), axis(ax) {}
};

// Point fails the surface membership test.
struct NotOnSurface : Error {
  using Error::Error;
};

// Requested telescoping depth < 1.
struct InvalidDepth : Error {
  using Error::Error;
};

// Orbit record does not cover the requested counting threshold.
struct InsufficientOrbit : Error {
  using Error::Error;
};

// Periodicity could not be decided (degenerate fiber hit mid-iteration).
struct Indeterminate : Error {
  using Error::Error;
};

// Moebius counting asked to count around a periodic center.
struct PeriodicCenter : Error {
  using Error::Error;
};

// Growth-regime analysis asked for a finite-order map.
struct PeriodicMap : Error {
  using Error::Error;
};

// Moebius matrix with determinant zero.
struct NotInvertible : Error {
  using Error::Error;
};

// Malformed JSON or matrix input.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace surfdyn
