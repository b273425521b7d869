// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
#include "surfdyn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "surfdyn/errors.hpp"

namespace surfdyn::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

}  // namespace

json bigint_to_json(const BigInt& n) { return n.get_str(); }

BigInt bigint_from_json(const json& j) {
  try {
    if (j.is_number_integer()) return BigInt(j.get<long>());
    if (j.is_string()) {
      BigInt n;
      if (mpz_set_str(n.get_mpz_t(), j.get<std::string>().c_str(), 10) != 0)
        bad("not an integer: " + j.get<std::string>());
      return n;
    }
  } catch (const json::exception& e) {
    bad(std::string("bad integer: ") + e.what());
  }
  bad("expected an integer (number or decimal string)");
}

json bigrat_to_json(const BigRat& q) { return q.get_str(); }

BigRat bigrat_from_json(const json& j) {
  try {
    if (j.is_number_integer()) return BigRat(j.get<long>());
    if (j.is_string()) {
      BigRat q;
      if (mpq_set_str(q.get_mpq_t(), j.get<std::string>().c_str(), 10) != 0)
        bad("not a rational: " + j.get<std::string>());
      if (q.get_den() == 0) bad("rational with zero denominator");
      q.canonicalize();
      return q;
    }
  } catch (const json::exception& e) {
    bad(std::string("bad rational: ") + e.what());
  }
  bad("expected a rational (number or 'p/q' string)");
}

json quadnum_to_json(const QuadNum& q) {
  return json{{"a", bigrat_to_json(q.a())}, {"b", bigrat_to_json(q.b())}, {"d", q.d()}};
}

QuadNum quadnum_from_json(const json& j) {
  if (!j.is_object() || !j.contains("a")) bad("expected {a, b, d} quadratic number");
  BigRat a = bigrat_from_json(j.at("a"));
  BigRat b = j.contains("b") ? bigrat_from_json(j.at("b")) : BigRat(0);
  long d = 1;
  if (j.contains("d")) {
    try {
      d = j.at("d").get<long>();
    } catch (const json::exception& e) {
      bad(std::string("bad quadratic number field d: ") + e.what());
    }
  }
  if (b == 0) return QuadNum(a);
  try {
    return QuadNum(a, b, d);  // the constructor folds d == 1 into the rational part
  } catch (const InvalidPoint& e) {
    bad(std::string("bad quadratic number: ") + e.what());
  }
}

json real_to_json(const Real& r) {
  double x = r.to_double();
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

json intmat_to_json(const spectral::IntMat& m) {
  json rows = json::array();
  for (const auto& r : m) {
    json row = json::array();
    for (const auto& e : r) row.push_back(bigint_to_json(e));
    rows.push_back(std::move(row));
  }
  return rows;
}

spectral::IntMat intmat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad("expected a nonempty matrix (array of arrays)");
  spectral::IntMat m;
  for (const auto& row : j) {
    if (!row.is_array()) bad("matrix rows must be arrays");
    std::vector<BigInt> r;
    for (const auto& e : row) r.push_back(bigint_from_json(e));
    m.push_back(std::move(r));
  }
  size_t w = m.front().size();
  for (const auto& r : m)
    if (r.size() != w) bad("ragged matrix");
  return m;
}

json intvec_to_json(const spectral::IntVec& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(bigint_to_json(e));
  return a;
}

spectral::IntVec intvec_from_json(const json& j) {
  if (!j.is_array()) bad("expected a vector (array)");
  spectral::IntVec v;
  for (const auto& e : j) v.push_back(bigint_from_json(e));
  return v;
}

json projpoint_to_json(const ProjPoint& p) {
  json a = json::array();
  for (size_t i = 0; i < p.dim(); ++i) a.push_back(bigint_to_json(p[i]));
  return a;
}

ProjPoint projpoint_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad("expected a projective point (array of coordinates)");
  std::vector<BigRat> coords;
  for (const auto& e : j) coords.push_back(bigrat_from_json(e));
  return ProjPoint(coords);
}

json surface_point_to_json(const surfaces::SurfacePoint& p) {
  json factors = json::array();
  for (const auto& f : p.factors) factors.push_back(projpoint_to_json(f));
  return json{{"factors", std::move(factors)}};
}

surfaces::SurfacePoint surface_point_from_json(const json& j) {
  const json* factors = nullptr;
  if (j.is_array()) {
    factors = &j;  // bare array-of-factors form accepted
  } else if (j.is_object() && j.contains("factors")) {
    factors = &j.at("factors");
  } else {
    bad("expected a surface point: {\"factors\": [[...], [...]]}");
  }
  surfaces::SurfacePoint p;
  for (const auto& f : *factors) p.factors.push_back(projpoint_from_json(f));
  return p;
}

json surface_to_json(const surfaces::Surface& s) {
  if (s.family() == surfaces::Family::wehler) {
    return json{{"family", "wehler"},
                {"l", intmat_to_json(s.wehler_spec().l)},
                {"q", intmat_to_json(s.wehler_spec().q)}};
  }
  json planes = json::array();
  for (const auto& plane : s.triple_spec().c) planes.push_back(intmat_to_json(plane));
  return json{{"family", "triple"}, {"c", std::move(planes)}};
}

surfaces::Surface surface_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) bad("surface file needs a \"family\" field");
  std::string fam = j.at("family").get<std::string>();
  if (fam == "wehler") {
    if (!j.contains("l") || !j.contains("q")) bad("wehler surface needs \"l\" and \"q\"");
    surfaces::WehlerSpec spec;
    spec.l = intmat_from_json(j.at("l"));
    spec.q = intmat_from_json(j.at("q"));
    return surfaces::Surface::wehler(std::move(spec));
  }
  if (fam == "triple") {
    if (!j.contains("c")) bad("triple surface needs \"c\"");
    const json& c = j.at("c");
    if (!c.is_array() || c.size() != 3) bad("\"c\" must be a 3x3x3 array");
    surfaces::TripleSpec spec;
    for (const auto& plane : c) spec.c.push_back(intmat_from_json(plane));
    return surfaces::Surface::triple(std::move(spec));
  }
  bad("unknown surface family: " + fam);
}

json canonical_to_json(const heights::CanonicalHeightResult& r) {
  return json{{"h_plus", real_to_json(r.h_plus)},
              {"h_minus", real_to_json(r.h_minus)},
              {"h_d", real_to_json(r.h_d)},
              {"depth_used", r.depth_used},
              {"error_bound", real_to_json(r.error_bound)},
              {"c_hat", real_to_json(r.c_hat)},
              {"clamped_plus", r.clamped_plus},
              {"clamped_minus", r.clamped_minus},
              {"vanish_plus", r.vanish_plus},
              {"vanish_minus", r.vanish_minus},
              {"vanish_d", r.vanish_d}};
}

json residual_to_json(const heights::ResidualResult& r) {
  return json{{"residual", real_to_json(r.residual)},
              {"tolerance", real_to_json(r.tolerance)},
              {"within", r.within},
              {"at_center", canonical_to_json(r.at_center)},
              {"at_forward", canonical_to_json(r.at_forward)},
              {"at_backward", canonical_to_json(r.at_backward)}};
}

json counting_report_to_json(const dynamics::CountingReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json row{{"log_t", r.log_t},          {"t", r.t},
             {"n_plus", r.n_plus},        {"sigma", r.sigma},
             {"predicted_n", r.predicted_n}, {"bracket_value", r.bracket_value},
             {"bracket_lo", r.bracket_lo}, {"bracket_hi", r.bracket_hi},
             {"pass", r.pass}};
    if (!rep.forward_only) row["n"] = r.n;
    rows.push_back(std::move(row));
  }
  return json{{"canonical", canonical_to_json(rep.canonical)},
              {"orbit_invariant", rep.orbit_invariant},
              {"forward_only", rep.forward_only},
              {"fwd_reach", rep.fwd_reach},
              {"bwd_reach", rep.bwd_reach},
              {"rows", std::move(rows)}};
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string counting_report_to_csv(const dynamics::CountingReport& rep) {
  std::ostringstream os;
  if (rep.forward_only)
    os << "T,N_plus,Sigma,predicted_N,bracket_lo,bracket_hi,pass\n";
  else
    os << "T,N,N_plus,Sigma,predicted_N,bracket_lo,bracket_hi,pass\n";
  for (const auto& r : rep.rows) {
    os << fmt_double(r.t) << ',';
    if (!rep.forward_only) os << r.n << ',';
    os << r.n_plus << ',' << r.sigma << ',' << fmt_double(r.predicted_n) << ','
       << fmt_double(r.bracket_lo) << ',' << fmt_double(r.bracket_hi) << ','
       << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

json scan_report_to_json(const dynamics::ScanReport& rep, double height_bound, long max_period) {
  json points = json::array();
  for (const auto& p : rep.searched) points.push_back(surface_point_to_json(p));
  json hits = json::array();
  for (const auto& h : rep.hits) {
    hits.push_back(json{{"point", surface_point_to_json(h.point)},
                        {"period", h.period},
                        {"reverified", h.reverified},
                        {"h_ambient", h.h_ambient},
                        {"h_d", std::isfinite(h.h_d) ? json(h.h_d) : json("nan")},
                        {"error_bound",
                         std::isfinite(h.error_bound) ? json(h.error_bound) : json("nan")}});
  }
  json rep_j{{"height_bound", height_bound},
             {"max_period", max_period},
             {"found_count", rep.searched.size()},
             {"points", std::move(points)},
             {"hits", std::move(hits)},
             {"indeterminate", rep.indeterminate}};
  if (rep.max_periodic_height)
    rep_j["max_periodic_height"] = *rep.max_periodic_height;
  else
    rep_j["max_periodic_height"] = nullptr;
  return rep_j;
}

json classification_to_json(const mobius::Classification& cls) {
  json fixed = json::array();
  for (const auto& fp : cls.fixed)
    fixed.push_back(json::array({quadnum_to_json(fp.x0), quadnum_to_json(fp.x1)}));
  return json{{"type", mobius::map_type_name(cls.type)},
              {"t", bigrat_to_json(cls.t)},
              {"scalar", cls.scalar},
              {"order", cls.order},
              {"fixed_points", std::move(fixed)},
              {"complex_fixed", cls.complex_fixed},
              {"field_d", cls.field_d}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open file: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    bad("cannot parse " + path + ": " + e.what());
  }
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << text;
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace surfdyn::io
