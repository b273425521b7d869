// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include "surfdyn/presets.hpp"

#include "surfdyn/errors.hpp"

namespace surfdyn::presets {

namespace {

using surfaces::IntCube;
using surfaces::Surface;
using surfaces::TripleSpec;
using surfaces::WehlerSpec;

surfaces::IntMat int_mat(std::initializer_list<std::initializer_list<long>> rows) {
  surfaces::IntMat m;
  for (const auto& r : rows) {
    std::vector<BigInt> row;
    for (long v : r) row.emplace_back(v);
    m.push_back(std::move(row));
  }
  return m;
}

spectral::IntMat spec_mat(std::initializer_list<std::initializer_list<long>> rows) {
  spectral::IntMat m;
  for (const auto& r : rows) {
    std::vector<BigInt> row;
    for (long v : r) row.emplace_back(v);
    m.push_back(std::move(row));
  }
  return m;
}

spectral::IntVec spec_vec(std::initializer_list<long> vals) {
  spectral::IntVec v;
  for (long x : vals) v.emplace_back(x);
  return v;
}

// ---------------------------------------------------------------------------
// Wehler preset: surface in P^2 x P^2 cut by L (1,1) and Q (2,2).
//
// L = sum_i x_i y_i.  Q was fitted so that four small rational points in
// general position lie on the surface (giving the point search plenty to
// find) while both coordinate projections stay fiberwise nondegenerate on
// every orbit sampled during validation:
//   ((1,1,-2),(1,1,1)), ((1,1,1),(1,-2,1)), ((1,-1,1),(1,2,1)),
//   ((2,1,1),(1,-1,-1)).
// ---------------------------------------------------------------------------
Preset make_wehler() {
  WehlerSpec ws;
  ws.l = int_mat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  // Monomial bases (x0^2, x0x1, x0x2, x1^2, x1x2, x2^2) on each side.
  ws.q = int_mat({
      {-3, -8, 15, 4, 8, -4},
      {0, 8, -4, 0, -8, 4},
      {0, 4, 0, 0, 0, 8},
      {0, 8, 0, -8, 0, 4},
      {4, 0, 4, 8, 4, -8},
      {0, -4, -4, 0, 8, 8},
  });

  // Expanding / contracting eigenclasses of f^* scaled as
  // D+ = (2+sqrt3) H1 - H2,  D- = -H1 + (2+sqrt3) H2.
  heights::DynamicalSystem sys{
      Surface::wehler(std::move(ws)),
      heights::HeightSpec{{QuadNum(BigRat(2), BigRat(1), 3), QuadNum(-1L)}},
      heights::HeightSpec{{QuadNum(-1L), QuadNum(BigRat(2), BigRat(1), 3)}},
      QuadNum(BigRat(7), BigRat(4), 3)};  // lambda = 7 + 4 sqrt3

  return Preset{"wehler",
                std::move(sys),
                spectral::NSLattice{spec_mat({{2, 4}, {4, 2}}), {"H1", "H2"}},
                spec_mat({{15, 4}, {-4, -1}}),
                spec_vec({1, 1}),
                heights::HeightSpec{{QuadNum(1L), QuadNum(1L)}}};
}

// ---------------------------------------------------------------------------
// Triple preset: (2,2,2) hypersurface in (P^1)^3.
//
// In the affine chart x = u1/u0 etc. the defining form is
//   x^2 + y^2 + z^2 - xyz - 3 + x^2 y^2 z^2 = 0,
// a symmetric Markov-like surface. Every coordinate fiber of every
// projection is a genuine conic (never identically zero), so the three
// involutions are total on rational points, and (1,1,1) and its orbit give
// small starting points.
// ---------------------------------------------------------------------------
Preset make_triple() {
  TripleSpec ts;
  ts.c = IntCube(3, surfaces::IntMat(3, std::vector<BigInt>(3, BigInt(0))));
  ts.c[0][0][0] = -3;
  ts.c[2][0][0] = 1;
  ts.c[0][2][0] = 1;
  ts.c[0][0][2] = 1;
  ts.c[1][1][1] = -1;
  ts.c[2][2][2] = 1;

  // D+ = (sqrt5-3) H1 + (sqrt5-1) H2 + 2 H3, D- its mirror under f <-> f^{-1}.
  heights::DynamicalSystem sys{
      Surface::triple(std::move(ts)),
      heights::HeightSpec{{QuadNum(BigRat(-3), BigRat(1), 5),
                           QuadNum(BigRat(-1), BigRat(1), 5), QuadNum(2L)}},
      heights::HeightSpec{{QuadNum(BigRat(3), BigRat(1), 5),
                           QuadNum(BigRat(1), BigRat(1), 5), QuadNum(-2L)}},
      QuadNum(BigRat(9), BigRat(4), 5)};  // lambda = 9 + 4 sqrt5

  return Preset{"triple",
                std::move(sys),
                spectral::NSLattice{spec_mat({{0, 2, 2}, {2, 0, 2}, {2, 2, 0}}),
                                    {"H1", "H2", "H3"}},
                spec_mat({{-1, -2, -6}, {2, 3, 10}, {2, 6, 15}}),
                spec_vec({1, 1, 1}),
                heights::HeightSpec{{QuadNum(1L), QuadNum(1L), QuadNum(1L)}}};
}

}  // namespace

std::vector<std::string> names() { return {"wehler", "triple"}; }

Preset get(const std::string& name) {
  if (name == "wehler") return make_wehler();
  if (name == "triple") return make_triple();
  throw ParseError("unknown preset: " + name);
}

}  // namespace surfdyn::presets
