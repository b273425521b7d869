// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "json.hpp"
#include "surfdyn/counting.hpp"
#include "surfdyn/heights.hpp"
#include "surfdyn/mobius.hpp"
#include "surfdyn/projpoint.hpp"
#include "surfdyn/quadnum.hpp"
#include "surfdyn/spectral.hpp"
#include "surfdyn/surfaces.hpp"

namespace surfdyn::io {

using json = nlohmann::json;

// Conventions: exact integers and rationals are decimal strings ("-42",
// "3/4") so no precision is lost; parsers also accept plain JSON integers.
// Quadratic numbers are {"a": rat, "b": rat, "d": int} meaning a + b sqrt(d).
// Reals are emitted as JSON numbers through their nearest double, which
// round-trips textually; non-finite values become strings.

json bigint_to_json(const BigInt& n);
BigInt bigint_from_json(const json& j);
json bigrat_to_json(const BigRat& q);
BigRat bigrat_from_json(const json& j);
json quadnum_to_json(const QuadNum& q);
QuadNum quadnum_from_json(const json& j);
json real_to_json(const Real& r);

json intmat_to_json(const spectral::IntMat& m);
spectral::IntMat intmat_from_json(const json& j);
json intvec_to_json(const spectral::IntVec& v);
spectral::IntVec intvec_from_json(const json& j);

json projpoint_to_json(const ProjPoint& p);
ProjPoint projpoint_from_json(const json& j);
json surface_point_to_json(const surfaces::SurfacePoint& p);
surfaces::SurfacePoint surface_point_from_json(const json& j);

// Surface files: {"family": "wehler", "l": 3x3, "q": 6x6} or
// {"family": "triple", "c": 3x3x3}. Optional spectral block used by the
// orbit pipeline on custom surfaces: {"gram": ..., "pullback": ...,
// "ample": ..., "labels": ...}.
json surface_to_json(const surfaces::Surface& s);
surfaces::Surface surface_from_json(const json& j);

json canonical_to_json(const heights::CanonicalHeightResult& r);
json residual_to_json(const heights::ResidualResult& r);

json counting_report_to_json(const dynamics::CountingReport& rep);
std::string counting_report_to_csv(const dynamics::CountingReport& rep);

json scan_report_to_json(const dynamics::ScanReport& rep, double height_bound, long max_period);

json classification_to_json(const mobius::Classification& cls);

// File helpers. load throws ParseError with the failing path in the
// message; save writes atomically-ish (truncate + write).
json load_json_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& text);

// Uniform 17-significant-digit formatting for doubles in CSV output.
std::string fmt_double(double x);

}  // namespace surfdyn::io
