#pragma once

// `facetkit` command-line driver. Exit codes: 0 success, 1 invalid
// arguments, 2 verification failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "facetkit/facetkit.hpp"

namespace facetkit::cli {

inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;
inline constexpr int kVerifyFailed = 2;

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json pattern_json(const FacePattern& p) { return json(std::vector<int>(p.dims.begin(), p.dims.end())); }

inline json chain_json(const WitnessChain& c, bool verified) {
  json dirs = json::array();
  for (const auto& u : c.directions) dirs.push_back(vec_to_json(u));
  return {{"claimed_dim", c.claimed_dim}, {"directions", dirs}, {"verified", verified}};
}

inline json histogram_json(const std::map<int, long>& h) {
  json out = json::object();
  for (const auto& [d, c] : h) out[std::to_string(d)] = c;
  return out;
}

struct RunReport {
  std::string command;
  json parameters = json::object();
  std::optional<std::uint64_t> seed;
  json outputs = json::object();
  double wall_time_s = 0.0;

  json to_json() const {
    json j = {{"command", command}, {"parameters", parameters}, {"outputs", outputs}, {"wall_time_s", wall_time_s}};
    j["seed"] = seed ? json(*seed) : json(nullptr);
    return j;
  }
};

/// Parses "a..b" (inclusive) into a pair.
inline std::pair<long, long> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  require(dots != std::string::npos, "range \"" + text + "\" must look like a..b");
  long a = 0, b = 0;
  try {
    std::size_t used = 0;
    a = std::stol(text.substr(0, dots), &used);
    require(used == dots, "bad range start");
    const std::string rest = text.substr(dots + 2);
    b = std::stol(rest, &used);
    require(used == rest.size(), "bad range end");
  } catch (const std::logic_error&) {
    throw std::invalid_argument("range \"" + text + "\" must look like a..b");
  }
  require(a <= b, "range \"" + text + "\" is empty");
  return {a, b};
}

inline std::string points_csv(const std::vector<fractal::Vec3>& pts) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& p : pts) out << p.x() << ',' << p.y() << ',' << p.z() << '\n';
  return out.str();
}

inline std::vector<fractal::Vec3> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::vector<fractal::Vec3> pts;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    fractal::Vec3 p;
    if (!(ss >> p.x() >> p.y() >> p.z()))
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected three numbers");
    pts.push_back(p);
  }
  return pts;
}

inline json packing_json(const fractal::CapPacking& pk) {
  json caps = json::array();
  for (std::size_t i = 0; i < pk.size(); ++i) {
    const auto& c = pk.caps[i];
    caps.push_back({{"normal", {c.normal.x(), c.normal.y(), c.normal.z()}},
                    {"offset", c.offset},
                    {"generation", pk.generation[i]}});
  }
  return {{"depth", pk.generation_depth},
          {"cap_count", pk.size()},
          {"max_descartes_residual", pk.max_descartes_residual},
          {"residual_fraction", pk.residual_fraction()},
          {"caps", caps}};
}

/// Largest |angular distance - sum of angular radii| over known tangent pairs.
inline double max_tangency_residual(const fractal::CapPacking& pk) {
  double worst = 0.0;
  for (const auto& [i, j] : pk.tangencies) {
    const auto& a = pk.caps[static_cast<std::size_t>(i)];
    const auto& b = pk.caps[static_cast<std::size_t>(j)];
    worst = std::max(worst, std::abs(fractal::angular_distance(a.normal, b.normal) - a.angular_radius() -
                                     b.angular_radius()));
  }
  return worst;
}

struct Options {
  // build
  std::string pattern;
  bool verify = false;
  std::string report;
  // shared
  std::string out;
  std::string body;
  std::uint64_t seed = 0;
  long samples = 10000;
  // lemma-check
  std::string seed_range = "0..99";
  int dim = 3;
  int max_vertices = 8;
  // fractal
  std::string kind;
  int depth = 8;
  long points = 100000;
  // boxdim
  std::string in;
  std::string scales = "3..9";
  // export-mesh
  int resolution = 3;
  // catalog
  std::string name;
};

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else write_text_file(path, text);
}

inline int run_build(const Options& o, RunReport& rep, std::ostream& out) {
  const Pattern d = Pattern::parse(o.pattern);
  const ConvexBody body = build_pattern(d);
  rep.parameters = {{"pattern", d.dims()}, {"verify", o.verify}};
  rep.outputs["ambient_dim"] = body.ambient_dim();
  emit(o.out, dump(to_json(body)) + "\n", out);
  if (!o.verify) return kOk;
  const auto pr = face_pattern(body);
  const auto expected = FacePattern::expected(d);
  bool ok = pr.pattern == expected;
  json chains = json::array();
  for (const auto& c : pr.chains) {
    const bool v = verify_chain(body, c);
    ok = ok && v;
    chains.push_back(chain_json(c, v));
  }
  rep.outputs["pattern"] = pattern_json(pr.pattern);
  rep.outputs["expected"] = pattern_json(expected);
  rep.outputs["witness_chains"] = chains;
  rep.outputs["verified"] = ok;
  if (!ok) throw VerificationFailure("pattern " + pr.pattern.str() + " does not match " + expected.str());
  return kOk;
}

inline int run_probe(const Options& o, RunReport& rep) {
  require(!o.body.empty(), "probe: --body is required");
  const ConvexBody body = body_from_json(read_json_file(o.body));
  rep.seed = o.seed;
  rep.parameters = {{"body", o.body}, {"samples", o.samples}};
  const auto pr = face_pattern(body);
  bool ok = true;
  json chains = json::array();
  for (const auto& c : pr.chains) {
    const bool v = verify_chain(body, c);
    ok = ok && v;
    chains.push_back(chain_json(c, v));
  }
  const auto hist = sample_probe(body, o.samples, o.seed);
  std::vector<int> stray;
  for (const auto& [d, c] : hist)
    if (!pr.pattern.dims.count(d)) stray.push_back(d);
  rep.outputs["pattern"] = pattern_json(pr.pattern);
  rep.outputs["witness_chains"] = chains;
  rep.outputs["histogram"] = histogram_json(hist);
  rep.outputs["unexpected_dims"] = stray;
  rep.outputs["verified"] = ok && stray.empty();
  if (!ok || !stray.empty()) throw VerificationFailure("probe: witness or sampling check failed");
  return kOk;
}

inline int run_lemma_check(const Options& o, RunReport& rep) {
  const auto [lo, hi] = parse_range(o.seed_range);
  require(lo >= 0, "lemma-check: seeds must be nonnegative");
  require(o.dim >= 1 && o.dim <= 5, "lemma-check: --dim must be in [1, 5]");
  require(o.max_vertices > o.dim && o.max_vertices <= 16, "lemma-check: --max-vertices must be in (dim, 16]");
  rep.parameters = {{"seed_range", {lo, hi}}, {"dim", o.dim}, {"max_vertices", o.max_vertices}};
  json runs = json::array();
  long passes = 0, failures = 0;
  for (long s = lo; s <= hi; ++s) {
    const auto pair = oracle::random_polytope_pair(static_cast<std::uint64_t>(s), o.dim, o.max_vertices);
    json r = {{"seed", s}, {"p_vertices", pair.p.size()}, {"q_vertices", pair.q.size()}, {"redraws", pair.redraws}};
    try {
      const auto lemma = oracle::check_lemma1(pair.p, pair.q, oracle::kCloudLimits);
      r["faces"] = lemma.decompositions.size();
      r["sum_vertices"] = lemma.sum.extreme_points().size();
      r["max_residual"] = lemma.max_residual;
      r["pass"] = true;
      ++passes;
    } catch (const oracle::DecompositionFailure& e) {
      r["pass"] = false;
      r["error"] = e.what();
      ++failures;
    }
    runs.push_back(r);
  }
  rep.outputs = {{"passes", passes}, {"failures", failures}, {"runs", runs}};
  if (failures) throw VerificationFailure("lemma-check: " + std::to_string(failures) + " decomposition failures");
  return kOk;
}

inline int run_fractal(const Options& o, RunReport& rep, std::ostream& out) {
  if (o.kind == "gasket") {
    const auto pk = fractal::apollonian_packing(o.depth);
    const double tangency = max_tangency_residual(pk);
    rep.parameters = {{"kind", "gasket"}, {"depth", o.depth}};
    rep.outputs = {{"cap_count", pk.size()},
                   {"max_descartes_residual", pk.max_descartes_residual},
                   {"max_tangency_residual", tangency}};
    emit(o.out, dump(packing_json(pk)) + "\n", out);
    if (pk.max_descartes_residual > 1e-9 || tangency > 1e-9)
      throw VerificationFailure("fractal: Descartes or tangency residual above 1e-9");
    return kOk;
  }
  if (o.kind == "sierpinski") {
    rep.seed = o.seed;
    rep.parameters = {{"kind", "sierpinski"}, {"points", o.points}};
    const auto pts = fractal::sierpinski_sphere(o.points, o.seed);
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, std::abs(p.norm() - 1.0));
    rep.outputs = {{"points", pts.size()}, {"max_norm_error", worst}};
    emit(o.out, points_csv(pts), out);
    if (worst > 1e-12) throw VerificationFailure("fractal: projected point off the unit sphere");
    return kOk;
  }
  if (o.kind == "gasket-residual") {
    rep.seed = o.seed;
    rep.parameters = {{"kind", "gasket-residual"}, {"depth", o.depth}, {"points", o.points}};
    const auto pk = fractal::apollonian_packing(o.depth);
    const auto rs = fractal::residual_sample(pk, o.points, o.seed);
    rep.outputs = {{"points", rs.points.size()},
                   {"candidates", rs.candidates},
                   {"acceptance_ratio", rs.acceptance_ratio()},
                   {"residual_fraction", pk.residual_fraction()}};
    emit(o.out, points_csv(rs.points), out);
    return kOk;
  }
  throw std::invalid_argument("fractal: --kind must be gasket, sierpinski or gasket-residual");
}

inline int run_boxdim(const Options& o, RunReport& rep) {
  require(!o.in.empty(), "boxdim: --in is required");
  const auto [lo, hi] = parse_range(o.scales);
  const auto pts = read_points_csv(o.in);
  const auto fit = fractal::box_dimension(pts, fractal::dyadic_scales(static_cast<int>(lo), static_cast<int>(hi)));
  rep.parameters = {{"in", o.in}, {"scales", {lo, hi}}, {"points", pts.size()}};
  rep.outputs = {{"scales", fit.scales}, {"counts", fit.counts}, {"slope", fit.slope}, {"r2", fit.r2}};
  for (std::size_t i = 1; i < fit.counts.size(); ++i)
    if (fit.counts[i] < fit.counts[i - 1]) throw VerificationFailure("boxdim: counts decrease as boxes shrink");
  return kOk;
}

inline int run_export_mesh(const Options& o, RunReport& rep, std::ostream& out) {
  require(!o.body.empty(), "export-mesh: --body is required");
  const ConvexBody body = body_from_json(read_json_file(o.body));
  const auto mesh = export_mesh(body, o.resolution);
  rep.parameters = {{"body", o.body}, {"resolution", o.resolution}};
  rep.outputs = {{"vertices", mesh.vertices.size()},
                 {"triangles", mesh.triangles.size()},
                 {"watertight", is_watertight(mesh)}};
  emit(o.out, to_obj(mesh), out);
  if (!is_watertight(mesh)) throw VerificationFailure("export-mesh: mesh is not watertight");
  return kOk;
}

inline int run_catalog(const Options& o, RunReport& rep, std::ostream& out) {
  if (o.name.empty()) {
    for (const auto& n : catalog_names()) out << n << '\n';
    rep.outputs["names"] = catalog_names();
    return kOk;
  }
  const ConvexBody body = catalog(o.name);
  rep.parameters = {{"name", o.name}, {"verify", o.verify}};
  emit(o.out, dump(to_json(body)) + "\n", out);
  if (o.verify) {
    const auto pr = face_pattern(body);
    bool ok = true;
    for (const auto& c : pr.chains) ok = ok && verify_chain(body, c);
    rep.outputs["pattern"] = pattern_json(pr.pattern);
    rep.outputs["verified"] = ok;
    if (!ok) throw VerificationFailure("catalog: witness chain failed");
  }
  return kOk;
}

/// Runs one subcommand. The RunReport goes to --report where a subcommand
/// writes a separate artifact, and to --out (or stdout) for report-only
/// subcommands.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"facetkit: convex bodies with prescribed facial dimensions"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "Build a body realizing a face-dimension pattern");
  build->add_option("--pattern", o.pattern, "Strictly increasing positive dimensions, e.g. 1,3,6")->required();
  build->add_option("--out", o.out, "Body JSON path (default stdout)");
  build->add_option("--report", o.report, "RunReport JSON path");
  build->add_flag("--verify", o.verify, "Check the face pattern and witness chains");

  auto* probe = app.add_subcommand("probe", "Face pattern, witness chains and sampled exposed-face histogram");
  probe->add_option("--body", o.body, "Body JSON")->required();
  probe->add_option("--samples", o.samples, "Number of random directions")->check(CLI::PositiveNumber);
  probe->add_option("--seed", o.seed, "Random seed")->required();
  probe->add_option("--out", o.report, "Report JSON path (default stdout)");

  auto* lemma = app.add_subcommand("lemma-check", "Face decomposition check on random polytope pairs");
  lemma->add_option("--seed-range", o.seed_range, "Inclusive seed range a..b")->required();
  lemma->add_option("--dim", o.dim, "Ambient dimension");
  lemma->add_option("--max-vertices", o.max_vertices, "Largest vertex count per polytope");
  lemma->add_option("--out", o.report, "Report JSON path (default stdout)");

  auto* frac = app.add_subcommand("fractal", "Spherical Apollonian packing or projected Sierpinski points");
  frac->add_option("--kind", o.kind, "gasket | sierpinski | gasket-residual")->required();
  frac->add_option("--depth", o.depth, "Packing depth (gasket kinds)");
  frac->add_option("--points", o.points, "Number of points (point-cloud kinds)")->check(CLI::PositiveNumber);
  frac->add_option("--seed", o.seed, "Random seed (point-cloud kinds)");
  frac->add_option("--out", o.out, "Caps JSON or points CSV (default stdout)");
  frac->add_option("--report", o.report, "RunReport JSON path");

  auto* box = app.add_subcommand("boxdim", "Box-counting dimension of a CSV point cloud");
  box->add_option("--in", o.in, "Points CSV (x,y,z per line)")->required();
  box->add_option("--scales", o.scales, "Dyadic exponent range a..b for box sides 2^-a..2^-b");
  box->add_option("--out", o.report, "Fit JSON path (default stdout)");

  auto* mesh = app.add_subcommand("export-mesh", "OBJ mesh of a 3-D body from support points");
  mesh->add_option("--body", o.body, "Body JSON")->required();
  mesh->add_option("--resolution", o.resolution, "Icosphere subdivision level");
  mesh->add_option("--out", o.out, "OBJ path (default stdout)");
  mesh->add_option("--report", o.report, "RunReport JSON path");

  auto* cat = app.add_subcommand("catalog", "List or write catalog fixtures");
  cat->add_option("--name", o.name, "Fixture name (omit to list)");
  cat->add_option("--out", o.out, "Body JSON path (default stdout)");
  cat->add_option("--report", o.report, "RunReport JSON path");
  cat->add_flag("--verify", o.verify, "Check the fixture's witness chains");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(std::move(argv_rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kInvalid;
  }

  RunReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  bool report_to_stdout = false;
  try {
    if (build->parsed()) {
      rep.command = "build";
      code = run_build(o, rep, out);
    } else if (probe->parsed()) {
      rep.command = "probe";
      report_to_stdout = true;
      code = run_probe(o, rep);
    } else if (lemma->parsed()) {
      rep.command = "lemma-check";
      report_to_stdout = true;
      code = run_lemma_check(o, rep);
    } else if (frac->parsed()) {
      rep.command = "fractal";
      if (o.kind != "gasket" && frac->count("--seed") == 0)
        throw std::invalid_argument("fractal: --seed is required for --kind " + o.kind);
      code = run_fractal(o, rep, out);
    } else if (box->parsed()) {
      rep.command = "boxdim";
      report_to_stdout = true;
      code = run_boxdim(o, rep);
    } else if (mesh->parsed()) {
      rep.command = "export-mesh";
      code = run_export_mesh(o, rep, out);
    } else if (cat->parsed()) {
      rep.command = "catalog";
      code = run_catalog(o, rep, out);
    }
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    rep.outputs["error"] = e.what();
    code = kVerifyFailed;
  } catch (const oracle::DecompositionFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    rep.outputs["error"] = e.what();
    code = kVerifyFailed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.report.empty() || report_to_stdout) emit(o.report, dump(rep.to_json()) + "\n", out);
  return code;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

} // namespace facetkit::cli
