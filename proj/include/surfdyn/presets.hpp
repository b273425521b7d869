#pragma once

// Built-in example surfaces with their spectral and dynamical data pinned,
// so the command-line tools and tests run without external input files.
//
// Each preset bundles:
//   - the surface (coefficients of the defining forms),
//   - the Neron-Severi lattice of the ambient hyperplane classes,
//   - the pullback action of the composed involution on that lattice,
//   - an ample class and its height functional,
//   - the expanding/contracting eigenclasses scaled so that the two
//     canonical heights are comparable (product normalization fixed
//     by the intersection pairing), and the dynamical degree.

#include <string>
#include <vector>

#include "surfdyn/heights.hpp"
#include "surfdyn/spectral.hpp"

namespace surfdyn::presets {

struct Preset {
  std::string name;
  heights::DynamicalSystem system;  // surface + eigenclass heights + lambda
  spectral::NSLattice lattice;      // pairing of the ambient hyperplane classes
  spectral::IntMat pullback;        // matrix of f^* in that basis
  spectral::IntVec ample;           // ample class used for searches/diagnostics
  heights::HeightSpec d_ample;      // height functional of the ample class
};

// Names of the available presets ("wehler", "triple").
std::vector<std::string> names();

// Look a preset up by name; throws ParseError for unknown names.
Preset get(const std::string& name);

}  // namespace surfdyn::presets
