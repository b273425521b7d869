// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0
//
// surfdyn — command-line driver for the surface-dynamics library.
//
// Subcommands:
//   spectral   entropy, nef eigenclasses, curve tests, ample perturbation
//   orbit      canonical heights and orbit-counting table for one point
//   scan       rational-point search + periodic-point scan under a height bound
//   mobius     classification and orbit growth of a P^1 automorphism
//
// Exit codes: 0 success; 1 unexpected library error; 2 parse/input error;
// 3 spectral radius 1 (no entropy); 4 point not on surface; 5 degenerate
// fiber interrupted the computation (partial output was still written).
//
// stdout carries data only when --stdout is passed; all diagnostics and
// summaries go to stderr. Reports are written to --out (or a per-command
// default file name) unless --stdout is given without --out.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "surfdyn/counting.hpp"
#include "surfdyn/errors.hpp"
#include "surfdyn/heights.hpp"
#include "surfdyn/io.hpp"
#include "surfdyn/mobius.hpp"
#include "surfdyn/orbit.hpp"
#include "surfdyn/presets.hpp"
#include "surfdyn/real.hpp"
#include "surfdyn/spectral.hpp"
#include "surfdyn/surfaces.hpp"

namespace {

using surfdyn::io::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitNullEntropy = 3;
constexpr int kExitNotOnSurface = 4;
constexpr int kExitPartial = 5;

struct Options {
  std::string preset;
  std::string surface_file;
  std::string point_arg;
  std::string matrix_arg;
  std::string out;
  std::string format = "json";
  int depth = 3;
  int precision = 0;  // 0 = resolve from env / library default
  double height_bound = 4.0;
  long max_period = 12;
  int tmin = 4;
  int tmax = 12;
  int threads = 1;
  long limit = 0;
  bool forward_only = false;
  bool to_stdout = false;
};

int resolve_precision(const Options& opt) {
  int bits = surfdyn::default_precision();
  if (const char* env = std::getenv("SURFDYN_PRECISION")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 16 && v <= 1 << 20) bits = static_cast<int>(v);
  }
  if (opt.precision > 0) bits = opt.precision;
  return bits;
}

// Accepts either inline JSON or a path to a JSON file.
json json_arg(const std::string& arg) {
  json j = json::parse(arg, nullptr, false);
  if (!j.is_discarded()) return j;
  return surfdyn::io::load_json_file(arg);
}

// Everything the orbit/scan pipelines need, assembled from a preset or a
// surface file. Custom files must carry a spectral block ("gram",
// "pullback", "ample") from which the dynamical degree and the expanding /
// contracting height specs are derived.
struct SystemBundle {
  surfdyn::heights::DynamicalSystem system;
  surfdyn::spectral::NSLattice lattice;
  surfdyn::spectral::IntMat pullback;
  surfdyn::spectral::IntVec ample;
  std::vector<surfdyn::spectral::IntVec> curves;  // optional test classes
};

SystemBundle load_system(const Options& opt) {
  namespace sp = surfdyn::spectral;
  if (!opt.preset.empty()) {
    auto p = surfdyn::presets::get(opt.preset);
    return SystemBundle{std::move(p.system), std::move(p.lattice), std::move(p.pullback),
                        std::move(p.ample), {}};
  }
  if (opt.surface_file.empty())
    throw surfdyn::ParseError("no surface given: pass --preset or --surface FILE");
  json j = surfdyn::io::load_json_file(opt.surface_file);
  auto surf = surfdyn::io::surface_from_json(j);
  if (!j.contains("gram") || !j.contains("pullback"))
    throw surfdyn::ParseError(
        "custom surface file needs \"gram\" and \"pullback\" blocks to derive heights");
  auto gram = surfdyn::io::intmat_from_json(j.at("gram"));
  auto mat = surfdyn::io::intmat_from_json(j.at("pullback"));
  std::vector<std::string> labels;
  if (j.contains("labels"))
    for (const auto& l : j.at("labels")) labels.push_back(l.get<std::string>());
  auto lat = sp::make_lattice(gram, labels);
  sp::PullbackMap pm(lat, mat);
  std::optional<sp::IntVec> ample;
  if (j.contains("ample")) ample = surfdyn::io::intvec_from_json(j.at("ample"));
  auto eig = sp::nef_eigenclasses(pm, ample);
  if (!eig.exact)
    throw surfdyn::ParseError(
        "custom surface needs a quadratic dynamical degree for exact heights");
  std::vector<sp::IntVec> curves;
  if (j.contains("curves"))
    for (const auto& c : j.at("curves")) curves.push_back(surfdyn::io::intvec_from_json(c));
  surfdyn::heights::DynamicalSystem sys{std::move(surf),
                                        surfdyn::heights::HeightSpec{eig.nu_plus},
                                        surfdyn::heights::HeightSpec{eig.nu_minus}, eig.lambda};
  return SystemBundle{std::move(sys), std::move(lat), std::move(mat),
                      ample ? *ample : sp::IntVec{}, std::move(curves)};
}

void emit(const Options& opt, const std::string& default_name, const std::string& text) {
  std::string path = opt.out;
  if (path.empty() && !opt.to_stdout) path = default_name;
  if (!path.empty()) {
    surfdyn::io::save_text_file(path, text);
    std::cerr << "wrote " << path << "\n";
  }
  if (opt.to_stdout) std::cout << text;
}

std::string render(const Options& opt, const json& j) {
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- spectral

int cmd_spectral(const Options& opt) {
  namespace sp = surfdyn::spectral;
  SystemBundle b = load_system(opt);
  sp::PullbackMap pm(b.lattice, b.pullback);
  auto ent = sp::entropy(pm);
  std::optional<sp::IntVec> ample;
  if (!b.ample.empty()) ample = b.ample;
  auto eig = sp::nef_eigenclasses(pm, ample);

  json rep{{"exact", ent.exact},
           {"tau", ent.tau},
           {"eigen_sign", ent.eigen_sign},
           {"lambda_float", ent.lambda_approx},
           {"h_top", ent.h_top}};
  if (ent.exact) rep["lambda"] = surfdyn::io::quadnum_to_json(ent.lambda);
  auto quadvec = [](const sp::QuadVec& v) {
    json a = json::array();
    for (const auto& q : v) a.push_back(surfdyn::io::quadnum_to_json(q));
    return a;
  };
  if (eig.exact) {
    rep["nu_plus"] = quadvec(eig.nu_plus);
    rep["nu_minus"] = quadvec(eig.nu_minus);
    rep["nu"] = quadvec(eig.nu);
    rep["nu_sq"] = surfdyn::io::quadnum_to_json(eig.nu_sq);
  } else {
    rep["nu_plus_float"] = eig.nu_plus_f;
    rep["nu_minus_float"] = eig.nu_minus_f;
    rep["nu_float"] = eig.nu_f;
  }

  // The perturbation certificate only concerns the null configuration: the
  // classes pairing to zero with nu. Others are still reported by the test.
  std::vector<sp::IntVec> null_classes;
  json tests = json::array();
  for (const auto& c : b.curves) {
    auto t = sp::periodic_curve_test(eig, b.lattice, c);
    if (t.periodic && !t.degenerate) null_classes.push_back(c);
    tests.push_back(json{{"class", surfdyn::io::intvec_to_json(c)},
                         {"pair_plus", surfdyn::io::quadnum_to_json(t.pair_plus)},
                         {"pair_minus", surfdyn::io::quadnum_to_json(t.pair_minus)},
                         {"pair_nu", surfdyn::io::quadnum_to_json(t.pair_nu)},
                         {"periodic", t.periodic},
                         {"degenerate", t.degenerate}});
  }
  rep["curve_tests"] = std::move(tests);

  if (eig.exact) {
    try {
      auto pert = sp::ample_perturbation(eig, b.lattice, null_classes);
      json a = json::array();
      for (const auto& x : pert.a) a.push_back(surfdyn::io::bigint_to_json(x));
      rep["perturbation"] = json{{"a", std::move(a)},
                                 {"z", surfdyn::io::intvec_to_json(pert.z)},
                                 {"eps_max", surfdyn::io::bigrat_to_json(pert.eps_max)},
                                 {"unconstrained", pert.unconstrained}};
    } catch (const surfdyn::InfeasibleConfiguration& e) {
      rep["perturbation"] = json{{"infeasible", e.what()}};
    }
  }

  std::cerr << "entropy: lambda ~ " << ent.lambda_approx << "  h_top = " << ent.h_top
            << (ent.exact ? "  (exact quadratic)" : "  (numeric)") << "\n";
  emit(opt, "spectral_report.json", render(opt, rep));
  return kExitOk;
}

// ------------------------------------------------------------------- orbit

int cmd_orbit(const Options& opt) {
  namespace hs = surfdyn::heights;
  namespace dy = surfdyn::dynamics;
  int prec = resolve_precision(opt);
  SystemBundle b = load_system(opt);
  if (opt.point_arg.empty()) throw surfdyn::ParseError("orbit needs --point");
  auto pt = surfdyn::io::surface_point_from_json(json_arg(opt.point_arg));
  if (!b.system.surface.on_surface(pt)) throw surfdyn::NotOnSurface("point is not on the surface");

  auto ch = hs::canonical_heights(b.system, pt, opt.depth, prec);
  std::cerr << "h_plus = " << ch.h_plus.to_double() << "  h_minus = " << ch.h_minus.to_double()
            << "  h_d = " << ch.h_d.to_double() << "  error_bound = " << ch.error_bound.to_double()
            << "  depth_used = " << ch.depth_used << "\n";

  json rep{{"point", surfdyn::io::surface_point_to_json(pt)},
           {"depth", opt.depth},
           {"canonical", surfdyn::io::canonical_to_json(ch)}};

  bool partial = false;
  std::string partial_reason;
  std::optional<dy::CountingReport> counting;
  try {
    counting =
        dy::counting_report(b.system, pt, opt.depth, opt.tmin, opt.tmax, opt.forward_only, prec);
  } catch (const surfdyn::PeriodicCenter& e) {
    rep["periodic_center"] = true;
    auto period = dy::detect_periodic(b.system.surface, pt, opt.max_period);
    if (period) rep["period"] = *period;
    std::cerr << "periodic center: counting table skipped (" << e.what() << ")\n";
  } catch (const surfdyn::DegenerateFiber& e) {
    partial = true;
    partial_reason = e.what();
  } catch (const surfdyn::DegenerateLine& e) {
    partial = true;
    partial_reason = e.what();
  } catch (const surfdyn::Indeterminate& e) {
    partial = true;
    partial_reason = e.what();
  } catch (const surfdyn::InsufficientOrbit& e) {
    partial = true;
    partial_reason = e.what();
  }

  if (counting) {
    rep["counting"] = surfdyn::io::counting_report_to_json(*counting);
    std::cerr << "orbit invariant h_d(orbit) = " << counting->orbit_invariant
              << "  rows = " << counting->rows.size() << "\n";
  }
  if (partial) {
    rep["partial"] = true;
    rep["partial_reason"] = partial_reason;
    std::cerr << "partial result: " << partial_reason << "\n";
  }

  if (opt.format == "csv") {
    std::string text = counting ? surfdyn::io::counting_report_to_csv(*counting)
                                : std::string(opt.forward_only
                                                  ? "T,N_plus,Sigma,predicted_N,bracket_lo,"
                                                    "bracket_hi,pass\n"
                                                  : "T,N,N_plus,Sigma,predicted_N,bracket_lo,"
                                                    "bracket_hi,pass\n");
    emit(opt, "orbit_report.csv", text);
  } else {
    emit(opt, "orbit_report.json", render(opt, rep));
  }
  return partial ? kExitPartial : kExitOk;
}

// -------------------------------------------------------------------- scan

int cmd_scan(const Options& opt) {
  namespace dy = surfdyn::dynamics;
  int prec = resolve_precision(opt);
  SystemBundle b = load_system(opt);
  auto rep = dy::periodic_scan(b.system, opt.height_bound, opt.max_period, opt.depth,
                               static_cast<size_t>(opt.limit), opt.threads, prec);
  std::cerr << "searched " << rep.searched.size() << " points, " << rep.hits.size()
            << " periodic, " << rep.indeterminate << " indeterminate";
  if (rep.max_periodic_height)
    std::cerr << ", max periodic height " << *rep.max_periodic_height;
  std::cerr << "\n";
  json j = surfdyn::io::scan_report_to_json(rep, opt.height_bound, opt.max_period);
  emit(opt, "scan_report.json", render(opt, j));
  return kExitOk;
}

// ------------------------------------------------------------------ mobius

int cmd_mobius(const Options& opt) {
  namespace mb = surfdyn::mobius;
  if (opt.matrix_arg.empty()) throw surfdyn::ParseError("mobius needs --matrix");
  json mj = json_arg(opt.matrix_arg);
  if (mj.is_object() && mj.contains("matrix")) mj = mj.at("matrix");
  if (!mj.is_array() || mj.size() != 2 || !mj[0].is_array() || mj[0].size() != 2 ||
      mj[1].size() != 2)
    throw surfdyn::ParseError("mobius matrix must be a 2x2 integer array");
  mb::MobiusMap f(surfdyn::io::bigint_from_json(mj[0][0]), surfdyn::io::bigint_from_json(mj[0][1]),
                  surfdyn::io::bigint_from_json(mj[1][0]), surfdyn::io::bigint_from_json(mj[1][1]));
  auto cls = mb::classify(f);
  json rep{{"classification", surfdyn::io::classification_to_json(cls)}};
  std::cerr << "type " << mb::map_type_name(cls.type) << "  t = " << cls.t.get_str()
            << (cls.order ? "  order " + std::to_string(cls.order) : "") << "\n";

  std::string csv = "T,N\n";
  if (!opt.point_arg.empty()) {
    auto x = surfdyn::io::projpoint_from_json(json_arg(opt.point_arg));
    std::vector<double> grid;
    for (int t = opt.tmin; t <= opt.tmax; ++t) grid.push_back(static_cast<double>(t));
    try {
      auto growth = mb::growth_regime(f, x, grid);
      json counts = json::array();
      for (auto& [t, n] : growth.counts) {
        counts.push_back(json{{"t", t}, {"n", n}});
        csv += surfdyn::io::fmt_double(t) + "," + std::to_string(n) + "\n";
      }
      rep["counts"] = std::move(counts);
      rep["regime"] = growth.exponential ? "exponential" : "linear";
      rep["residual_linear"] = growth.residual_linear;
      rep["residual_exponential"] = growth.residual_exponential;
      std::cerr << "regime: " << (growth.exponential ? "exponential" : "linear")
                << "  (residuals " << growth.residual_linear << " vs "
                << growth.residual_exponential << ")\n";
    } catch (const surfdyn::PeriodicMap& e) {
      rep["counts_skipped"] = e.what();
      std::cerr << "counts skipped: " << e.what() << "\n";
    } catch (const surfdyn::PeriodicCenter& e) {
      rep["counts_skipped"] = e.what();
      std::cerr << "counts skipped: " << e.what() << "\n";
    }
  }

  if (opt.format == "csv")
    emit(opt, "mobius_report.csv", csv);
  else
    emit(opt, "mobius_report.json", render(opt, rep));
  return kExitOk;
}

void add_common(CLI::App* sub, Options& opt, bool with_surface) {
  if (with_surface) {
    sub->add_option("--preset", opt.preset, "built-in surface: wehler or triple");
    sub->add_option("--surface", opt.surface_file, "surface description file (JSON)");
  }
  sub->add_option("--precision", opt.precision, "working precision in bits");
  sub->add_option("--format", opt.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", opt.out, "output file (default: per-command name)");
  sub->add_flag("--stdout", opt.to_stdout, "write the report to stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic for surface automorphisms: entropy, canonical heights, "
               "orbit counting"};
  app.require_subcommand(1);
  Options opt;

  auto* sp = app.add_subcommand("spectral", "entropy and nef eigenclasses of the pullback");
  add_common(sp, opt, true);

  auto* orb = app.add_subcommand("orbit", "canonical heights and counting table for a point");
  add_common(orb, opt, true);
  orb->add_option("--point", opt.point_arg, "surface point (inline JSON or file)");
  orb->add_option("--depth", opt.depth, "telescoping depth");
  orb->add_option("--tmin", opt.tmin, "smallest grid exponent (T = e^t)");
  orb->add_option("--tmax", opt.tmax, "largest grid exponent");
  orb->add_option("--max-period", opt.max_period, "periodicity probe range");
  orb->add_flag("--forward-only", opt.forward_only, "count the forward orbit only");

  auto* sc = app.add_subcommand("scan", "find rational points and scan for periodic ones");
  add_common(sc, opt, true);
  sc->add_option("--height-bound", opt.height_bound, "log-height search bound");
  sc->add_option("--max-period", opt.max_period, "largest period tested");
  sc->add_option("--depth", opt.depth, "telescoping depth for hit annotation");
  sc->add_option("--threads", opt.threads, "worker threads for the search");
  sc->add_option("--limit", opt.limit, "stop after this many points (0 = all)");

  auto* mo = app.add_subcommand("mobius", "classify a P^1 automorphism and count orbit growth");
  add_common(mo, opt, false);
  mo->add_option("--matrix", opt.matrix_arg, "2x2 integer matrix (inline JSON or file)")
      ->required();
  mo->add_option("--point", opt.point_arg, "base point (inline JSON or file)");
  mo->add_option("--tmin", opt.tmin, "smallest log-height threshold");
  mo->add_option("--tmax", opt.tmax, "largest log-height threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (app.got_subcommand(sp)) return cmd_spectral(opt);
    if (app.got_subcommand(orb)) return cmd_orbit(opt);
    if (app.got_subcommand(sc)) return cmd_scan(opt);
    if (app.got_subcommand(mo)) return cmd_mobius(opt);
  } catch (const surfdyn::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const surfdyn::NotInvertible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const surfdyn::NullEntropy& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNullEntropy;
  } catch (const surfdyn::NotOnSurface& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotOnSurface;
  } catch (const surfdyn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitParse;
}
