// SPDX-License-Identifier: Apache-2.0
//
// Instance generation, file formats and the benchmark runner behind the CLI.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "geom.hpp"
#include "incidence2d.hpp"
#include "incidence3d.hpp"
#include "report.hpp"
#include "triangles.hpp"

namespace incidence::bench {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { lines2d, planes3d, circles2d, circles2d_var, spheres3d, lines3d, circles3d, triangles };
enum class Algo { efficient, naive, naive_duality, sector, dual, brute };

inline const std::vector<std::pair<std::string, Kind>>& kind_names() {
  static const std::vector<std::pair<std::string, Kind>> v{
      {"lines2d", Kind::lines2d},     {"planes3d", Kind::planes3d}, {"circles2d", Kind::circles2d},
      {"circles2d-var", Kind::circles2d_var}, {"spheres3d", Kind::spheres3d}, {"lines3d", Kind::lines3d},
      {"circles3d", Kind::circles3d}, {"triangles", Kind::triangles}};
  return v;
}

inline const std::vector<std::pair<std::string, Algo>>& algo_names() {
  static const std::vector<std::pair<std::string, Algo>> v{{"efficient", Algo::efficient}, {"naive", Algo::naive},
                                                           {"naive-duality", Algo::naive_duality},
                                                           {"sector", Algo::sector},       {"dual", Algo::dual},
                                                           {"brute", Algo::brute}};
  return v;
}

inline Kind parse_kind(const std::string& s) {
  for (const auto& [n, k] : kind_names())
    if (n == s) return k;
  throw ParameterError("unknown kind: " + s);
}

inline Algo parse_algo(const std::string& s) {
  for (const auto& [n, a] : algo_names())
    if (n == s) return a;
  throw ParameterError("unknown algorithm: " + s);
}

inline std::string to_string(Kind k) {
  for (const auto& [n, v] : kind_names())
    if (v == k) return n;
  return "?";
}

inline std::string to_string(Algo a) {
  for (const auto& [n, v] : algo_names())
    if (v == a) return n;
  return "?";
}

inline bool is_3d(Kind k) { return k != Kind::lines2d && k != Kind::circles2d && k != Kind::circles2d_var; }

struct Params {
  double r = 0.1;
  double r1 = 0.05, r2 = 0.25;
  Triangle tri{0.45, 0.4, 0.35};
  double beta = 0.2, s = 0.2;
};

struct Instance {
  Kind kind = Kind::lines2d;
  std::vector<Point2> p2;
  std::vector<Point3> p3;
  std::vector<Line2> lines2;
  std::vector<Plane3> planes;
  std::vector<Point2> centers2;  // congruent circles
  std::vector<Circle2> circles2;
  std::vector<Point3> centers3;  // spheres
  std::vector<Line3> lines3;
  std::vector<Circle3> circles3;
  Params params;

  std::size_t m() const { return is_3d(kind) ? p3.size() : p2.size(); }
  std::size_t n() const {
    switch (kind) {
      case Kind::lines2d: return lines2.size();
      case Kind::planes3d: return planes.size();
      case Kind::circles2d: return centers2.size();
      case Kind::circles2d_var: return circles2.size();
      case Kind::spheres3d: return centers3.size();
      case Kind::lines3d: return lines3.size();
      case Kind::circles3d: return circles3.size();
      case Kind::triangles: return p3.size();
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// generators

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(g_); }
  Point2 square() { return {uniform(), uniform()}; }
  Point3 ball() {
    while (true) {
      const Point3 p{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
      if (dot(p, p) <= 1.0) return p;
    }
  }
  Point3 sphere() {
    std::normal_distribution<double> nd;
    while (true) {
      const Point3 p{nd(g_), nd(g_), nd(g_)};
      if (norm(p) > 1e-12) return normalized(p);
    }
  }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(g_); }

 private:
  std::mt19937_64 g_;
};

inline Line2 line_through(Point2 a, Point2 b) {
  if (a.x == b.x) return Line2::vertical_at(a.x);
  return Line2::through(a, b);
}

inline Line3 line3_through(Rng& rng) {
  while (true) {
    const Point3 a = rng.ball(), b = rng.ball();
    if (std::abs(b.x - a.x) >= 1e-9) return Line3::from_point_direction(a, b - a);
  }
}

inline Plane3 random_plane(Rng& rng) {
  const Point3 p = rng.ball();
  while (true) {
    const Point3 nrm = rng.sphere();
    if (std::abs(nrm.z) >= 1e-9) return Plane3::from_normal(p, nrm);
  }
}

// Lines through random pairs of the given points.
inline std::vector<Line2> pair_sampled_lines(const std::vector<Point2>& pts, std::size_t n, Rng& rng) {
  if (pts.size() < 2) throw ParameterError("pair sampling needs at least two points");
  std::vector<Line2> out;
  while (out.size() < n) {
    const auto i = rng.index(pts.size()), j = rng.index(pts.size());
    if (i == j || (pts[i].x == pts[j].x && pts[i].y == pts[j].y)) continue;
    out.push_back(line_through(pts[i], pts[j]));
  }
  return out;
}

// For triangles, m is |B| and n the number of planted near-copies (each uses
// three of the m points, perturbed by at most eps/2).
inline Instance gen_random_instance(Kind kind, std::size_t m, std::size_t n, std::uint64_t seed, const Params& prm,
                                    double eps = 0.0) {
  Rng rng(seed);
  Instance in;
  in.kind = kind;
  in.params = prm;
  if (is_3d(kind)) {
    for (std::size_t i = 0; i < m; ++i) in.p3.push_back(rng.ball());
  } else {
    for (std::size_t i = 0; i < m; ++i) in.p2.push_back(rng.square());
  }
  switch (kind) {
    case Kind::lines2d:
      for (std::size_t j = 0; j < n; ++j) in.lines2.push_back(line_through(rng.square(), rng.square()));
      break;
    case Kind::planes3d:
      for (std::size_t j = 0; j < n; ++j) in.planes.push_back(random_plane(rng));
      break;
    case Kind::circles2d:
      for (std::size_t j = 0; j < n; ++j) in.centers2.push_back(rng.square());
      break;
    case Kind::circles2d_var:
      for (std::size_t j = 0; j < n; ++j) in.circles2.push_back({rng.square(), rng.uniform(prm.r1, prm.r2)});
      break;
    case Kind::spheres3d:
      for (std::size_t j = 0; j < n; ++j) in.centers3.push_back(rng.ball());
      break;
    case Kind::lines3d:
      for (std::size_t j = 0; j < n; ++j) in.lines3.push_back(line3_through(rng));
      break;
    case Kind::circles3d:
      for (std::size_t j = 0; j < n; ++j) {
        const Point3 c = rng.ball();
        in.circles3.push_back({c, prm.r, rng.sphere()});
      }
      break;
    case Kind::triangles: {
      const auto g = triangle_geometry(prm.tri.u, prm.tri.v, prm.tri.w);
      const double jitter = 0.5 * eps / std::sqrt(3.0);
      for (std::size_t k = 0; k < n && 3 * k + 2 < in.p3.size(); ++k) {
        const Point3 a = (1.0 - prm.tri.u) * rng.ball();
        const Point3 d = rng.sphere();
        Point3 side = cross(d, rng.sphere());
        while (norm(side) < 1e-6) side = cross(d, rng.sphere());
        side = normalized(side);
        const Point3 pts[3] = {a, a + prm.tri.u * d, a + g.z * d + g.h * side};
        for (int t = 0; t < 3; ++t) {
          const Point3 off{rng.uniform(-jitter, jitter), rng.uniform(-jitter, jitter), rng.uniform(-jitter, jitter)};
          in.p3[3 * k + t] = pts[t] + off;
        }
      }
      break;
    }
  }
  return in;
}

// ---------------------------------------------------------------------------
// files

inline std::vector<double> parse_row(const std::string& line, const std::string& path, std::size_t lineno) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t\r");
    const auto e = tok.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw IoError(path + ":" + std::to_string(lineno) + ": empty field");
    tok = tok.substr(b, e - b + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw IoError(path + ":" + std::to_string(lineno) + ": malformed number '" + tok + "'");
    }
  }
  return out;
}

inline bool skip_line(const std::string& line) {
  const auto b = line.find_first_not_of(" \t\r");
  return b == std::string::npos || line[b] == '#';
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

struct PointFile {
  int dim = 0;  // 0 for an empty file
  std::vector<Point2> p2;
  std::vector<Point3> p3;
};

inline PointFile load_points(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  PointFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    const auto v = parse_row(line, path, lineno);
    if (v.size() != 2 && v.size() != 3)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 2 or 3 coordinates");
    if (out.dim == 0) out.dim = static_cast<int>(v.size());
    if (static_cast<int>(v.size()) != out.dim)
      throw IoError(path + ":" + std::to_string(lineno) + ": mixed dimensions");
    if (out.dim == 2) out.p2.push_back({v[0], v[1]});
    else out.p3.push_back({v[0], v[1], v[2]});
  }
  return out;
}

inline void write_or_throw(std::ofstream& f, const std::string& path) {
  if (!f) throw IoError("cannot write " + path);
}

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void save_points(const std::string& path, const std::vector<Point2>& pts) {
  std::ofstream f(path);
  write_or_throw(f, path);
  for (const auto& p : pts) f << num(p.x) << ',' << num(p.y) << '\n';
  write_or_throw(f, path);
}

inline void save_points(const std::string& path, const std::vector<Point3>& pts) {
  std::ofstream f(path);
  write_or_throw(f, path);
  for (const auto& p : pts) f << num(p.x) << ',' << num(p.y) << ',' << num(p.z) << '\n';
  write_or_throw(f, path);
}

inline std::string object_tag(Kind k) {
  switch (k) {
    case Kind::lines2d: return "line2d";
    case Kind::planes3d: return "plane3";
    case Kind::circles2d:
    case Kind::circles2d_var: return "circle2";
    case Kind::spheres3d: return "sphere3";
    case Kind::lines3d: return "line3";
    case Kind::circles3d: return "circle3";
    case Kind::triangles: return "none";
  }
  return "none";
}

inline void save_objects(const std::string& path, const Instance& in) {
  if (in.kind == Kind::triangles) throw ParameterError("triangle instances have no objects file");
  std::ofstream f(path);
  write_or_throw(f, path);
  f << object_tag(in.kind) << '\n';
  switch (in.kind) {
    case Kind::lines2d:
      for (const auto& l : in.lines2) {
        if (l.vertical) f << "V," << num(l.x0) << '\n';
        else f << num(l.a) << ',' << num(l.b) << '\n';
      }
      break;
    case Kind::planes3d:
      for (const auto& p : in.planes) f << num(p.a) << ',' << num(p.b) << ',' << num(p.c) << '\n';
      break;
    case Kind::circles2d:
      for (const auto& c : in.centers2) f << num(c.x) << ',' << num(c.y) << ',' << num(in.params.r) << '\n';
      break;
    case Kind::circles2d_var:
      for (const auto& c : in.circles2) f << num(c.center.x) << ',' << num(c.center.y) << ',' << num(c.radius) << '\n';
      break;
    case Kind::spheres3d:
      for (const auto& c : in.centers3) f << num(c.x) << ',' << num(c.y) << ',' << num(c.z) << '\n';
      break;
    case Kind::lines3d:
      for (const auto& l : in.lines3) f << num(l.a) << ',' << num(l.b) << ',' << num(l.c) << ',' << num(l.d) << '\n';
      break;
    case Kind::circles3d:
      for (const auto& c : in.circles3)
        f << num(c.center.x) << ',' << num(c.center.y) << ',' << num(c.center.z) << ',' << num(c.radius) << ','
          << num(c.axis.x) << ',' << num(c.axis.y) << ',' << num(c.axis.z) << '\n';
      break;
    case Kind::triangles: break;
  }
  write_or_throw(f, path);
}

// Fills the object side of `in` (kind already set). For circles2d and
// circles3d every radius in the file must agree; that radius becomes r.
inline void load_objects(const std::string& path, Instance& in) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::optional<double> common_r;
  auto fail = [&](const std::string& what) { throw IoError(path + ":" + std::to_string(lineno) + ": " + what); };
  while (std::getline(f, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    if (!header) {
      if (trim(line) != object_tag(in.kind)) fail("header '" + trim(line) + "' does not match kind " + to_string(in.kind));
      header = true;
      continue;
    }
    if (in.kind == Kind::lines2d && trim(line).rfind("V", 0) == 0) {
      const auto rest = trim(line).substr(1);
      if (rest.empty() || rest[0] != ',') fail("expected V,x0");
      const auto v = parse_row(rest.substr(1), path, lineno);
      if (v.size() != 1) fail("expected V,x0");
      in.lines2.push_back(Line2::vertical_at(v[0]));
      continue;
    }
    const auto v = parse_row(line, path, lineno);
    auto need = [&](std::size_t k) {
      if (v.size() != k) fail("expected " + std::to_string(k) + " fields");
    };
    auto same_r = [&](double r) {
      if (common_r && std::abs(*common_r - r) > 1e-12 * std::max(1.0, r)) fail("radii differ");
      common_r = r;
    };
    switch (in.kind) {
      case Kind::lines2d: need(2); in.lines2.push_back(Line2::slope_intercept(v[0], v[1])); break;
      case Kind::planes3d: need(3); in.planes.push_back({v[0], v[1], v[2]}); break;
      case Kind::circles2d:
        need(3);
        same_r(v[2]);
        in.centers2.push_back({v[0], v[1]});
        break;
      case Kind::circles2d_var:
        need(3);
        if (!(v[2] > 0.0)) fail("radius must be positive");
        in.circles2.push_back({{v[0], v[1]}, v[2]});
        break;
      case Kind::spheres3d: need(3); in.centers3.push_back({v[0], v[1], v[2]}); break;
      case Kind::lines3d: need(4); in.lines3.push_back({v[0], v[1], v[2], v[3]}); break;
      case Kind::circles3d: {
        need(7);
        same_r(v[3]);
        const Point3 ax{v[4], v[5], v[6]};
        if (!(norm(ax) > 0.0)) fail("zero axis");
        in.circles3.push_back({{v[0], v[1], v[2]}, v[3], normalized(ax)});
        break;
      }
      case Kind::triangles: fail("triangle instances have no objects file");
    }
  }
  if (!header && in.kind != Kind::triangles) {
    // an empty file is an empty instance
  }
  if (common_r) in.params.r = *common_r;
}

// Maps points (and objects, which share their coordinates) into the unit
// square, or the unit ball in 3D, when some point lies outside. Returns true
// and reports the map on `log` when it did.
inline bool normalize_instance(Instance& in, std::ostream& log = std::cerr) {
  if (is_3d(in.kind)) {
    if (in.p3.empty()) return false;
    double far = 0.0;
    for (const auto& p : in.p3) far = std::max(far, norm(p));
    if (far <= 1.0 + 1e-12) return false;
    Point3 lo = in.p3[0], hi = in.p3[0];
    for (const auto& p : in.p3) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const Point3 c = 0.5 * (lo + hi);
    double rad = 0.0;
    for (const auto& p : in.p3) rad = std::max(rad, norm(p - c));
    const Similarity3 sim{c, 1.0 / std::max(rad, 1e-300)};
    for (auto& p : in.p3) p = sim.apply(p);
    for (auto& x : in.planes) x = sim.apply(x);
    for (auto& x : in.centers3) x = sim.apply(x);
    for (auto& x : in.lines3) x = sim.apply(x);
    for (auto& x : in.circles3) x = sim.apply(x);
    in.params.r *= sim.scale;
    log << "normalized: x' = " << sim.scale << " * (x - (" << c.x << ", " << c.y << ", " << c.z << "))\n";
    return true;
  }
  if (in.p2.empty()) return false;
  bool inside = true;
  for (const auto& p : in.p2)
    if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0) inside = false;
  if (inside) return false;
  const Similarity2 sim = unit_square_map(in.p2, 0.0);
  for (auto& p : in.p2) p = sim.apply(p);
  for (auto& x : in.lines2) x = sim.apply(x);
  for (auto& x : in.centers2) x = sim.apply(x);
  for (auto& x : in.circles2) x = sim.apply(x);
  in.params.r *= sim.scale;
  in.params.r1 *= sim.scale;
  in.params.r2 *= sim.scale;
  log << "normalized: x' = " << sim.scale << " * (x - (" << sim.origin.x << ", " << sim.origin.y << "))\n";
  return true;
}

// ---------------------------------------------------------------------------
// running

struct Outcome {
  RunMetrics metrics;
  std::uint64_t k_filtered = 0;
  double max_distortion = 1.0;
  std::uint32_t dup_factor = 0;
  std::vector<IncidencePair> pairs;  // report mode
  std::vector<TripleMatch> triples;  // triangles, report mode
};

inline Mode parse_mode(const std::string& s) {
  if (s == "report") return Mode::filtered;
  if (s == "count") return Mode::count;
  if (s == "candidates") return Mode::candidates;
  throw ParameterError("unknown mode: " + s);
}

inline Outcome from_report(const Report& rep, double eps) {
  Outcome o;
  o.metrics = rep.metrics;
  o.k_filtered = rep.metrics.filtered;
  o.max_distortion = rep.metrics.distortion(eps);
  o.dup_factor = rep.metrics.max_multiplicity;
  o.pairs = rep.pairs;
  return o;
}

inline Outcome from_oracle(const OracleResult& res, std::uint64_t work, const std::vector<double>& dists, double eps) {
  Outcome o;
  o.metrics.candidates = work;
  o.metrics.unique_candidates = work;
  o.metrics.filtered = res.count;
  o.metrics.elapsed_ms = res.elapsed_ms;
  o.k_filtered = res.count;
  o.dup_factor = res.count > 0 ? 1 : 0;
  for (std::size_t i = 0; i < res.pairs.size(); ++i) o.pairs.push_back({res.pairs[i].first, res.pairs[i].second, dists[i], 0});
  (void)eps;
  return o;
}

[[noreturn]] inline void unsupported(Kind k, Algo a) {
  throw ParameterError("algorithm " + to_string(a) + " does not support kind " + to_string(k));
}

inline TriangleQuery triangle_query(const Instance& in, double eps) {
  return {in.params.tri, eps, in.params.beta, in.params.s};
}

template <class Pt, class Obj>
Outcome brute_outcome(const std::vector<Pt>& P, const std::vector<Obj>& objs, double eps) {
  const auto res = brute_force_pairs(P, objs, eps);
  std::vector<double> d;
  for (const auto& [p, o] : res.pairs) d.push_back(object_distance(P[p], objs[o]));
  return from_oracle(res, static_cast<std::uint64_t>(P.size()) * objs.size(), d, eps);
}

inline Outcome run_algorithm(const Instance& in, Algo algo, double eps, Mode mode = Mode::filtered) {
  const auto& prm = in.params;
  switch (in.kind) {
    case Kind::lines2d:
      switch (algo) {
        case Algo::efficient: return from_report(report_point_line_2d(in.p2, in.lines2, eps, mode), eps);
        case Algo::naive: return from_report(naive_grid_report(in.p2, in.lines2, eps, mode), eps);
        case Algo::naive_duality: return from_report(naive_duality_report(in.p2, in.lines2, eps, mode), eps);
        case Algo::brute: return brute_outcome(in.p2, in.lines2, eps);
        default: unsupported(in.kind, algo);
      }
    case Kind::planes3d:
      switch (algo) {
        case Algo::efficient: return from_report(report_point_plane_3d(in.p3, in.planes, eps, mode), eps);
        case Algo::naive: return from_report(naive_grid_report(in.p3, in.planes, eps, mode), eps);
        case Algo::naive_duality: return from_report(naive_duality_report(in.p3, in.planes, eps, mode), eps);
        case Algo::brute: return brute_outcome(in.p3, in.planes, eps);
        default: unsupported(in.kind, algo);
      }
    case Kind::circles2d:
      switch (algo) {
        case Algo::sector:
          return from_report(report_congruent_pairs_2d_sector(in.p2, in.centers2, prm.r, eps, mode), eps);
        case Algo::efficient:
        case Algo::dual: return from_report(report_congruent_pairs_2d_dual(in.p2, in.centers2, prm.r, eps, mode), eps);
        case Algo::naive: return from_report(naive_grid_report(in.p2, circles_around(in.centers2, prm.r), eps, mode), eps);
        case Algo::naive_duality:
          return from_report(naive_duality_congruent_2d(in.p2, in.centers2, prm.r, eps, mode), eps);
        case Algo::brute: return brute_outcome(in.p2, circles_around(in.centers2, prm.r), eps);
      }
      break;
    case Kind::circles2d_var:
      switch (algo) {
        case Algo::efficient:
          return from_report(report_point_circle_2d(in.p2, in.circles2, eps, prm.r1, prm.r2, mode), eps);
        case Algo::naive: return from_report(naive_grid_report(in.p2, in.circles2, eps, mode), eps);
        case Algo::brute: return brute_outcome(in.p2, in.circles2, eps);
        default: unsupported(in.kind, algo);
      }
    case Kind::spheres3d:
      switch (algo) {
        case Algo::efficient: return from_report(report_congruent_pairs_3d(in.p3, in.centers3, prm.r, eps, mode), eps);
        case Algo::naive: return from_report(naive_grid_report(in.p3, spheres_around(in.centers3, prm.r), eps, mode), eps);
        case Algo::naive_duality:
          return from_report(naive_duality_congruent_3d(in.p3, in.centers3, prm.r, eps, mode), eps);
        case Algo::brute: return brute_outcome(in.p3, spheres_around(in.centers3, prm.r), eps);
        default: unsupported(in.kind, algo);
      }
    case Kind::lines3d:
      switch (algo) {
        case Algo::efficient: return from_report(report_point_line_3d(in.p3, in.lines3, eps, mode), eps);
        case Algo::naive: return from_report(naive_grid_report(in.p3, in.lines3, eps, mode), eps);
        case Algo::brute: return brute_outcome(in.p3, in.lines3, eps);
        default: unsupported(in.kind, algo);
      }
    case Kind::circles3d:
      switch (algo) {
        case Algo::efficient: return from_report(report_point_circle_3d(in.p3, in.circles3, prm.r, eps, mode), eps);
        case Algo::naive: return from_report(naive_grid_report(in.p3, in.circles3, eps, mode), eps);
        case Algo::brute: return brute_outcome(in.p3, in.circles3, eps);
        default: unsupported(in.kind, algo);
      }
    case Kind::triangles: {
      const auto q = triangle_query(in, eps);
      Outcome o;
      if (algo == Algo::efficient) {
        const auto rep = report_congruent_triangles(in.p3, q, 1.0);
        o.metrics.cells_visited = rep.cells_visited;
        o.metrics.candidates = rep.candidates;
        o.metrics.unique_candidates = rep.candidates;
        o.metrics.filtered = rep.triples.size();
        o.metrics.elapsed_ms = rep.elapsed_ms;
        o.k_filtered = rep.triples.size();
        o.max_distortion = std::max(1.0, rep.alpha);
        o.dup_factor = rep.max_multiplicity;
        o.triples = rep.triples;
        return o;
      }
      if (algo == Algo::brute) {
        validate(q);
        const auto res = brute_force_triples(in.p3, q);
        const double n = static_cast<double>(in.p3.size());
        o.metrics.candidates = static_cast<std::uint64_t>(n * n * n);
        o.metrics.filtered = res.count;
        o.metrics.elapsed_ms = res.elapsed_ms;
        o.k_filtered = res.count;
        o.dup_factor = res.count > 0 ? 1 : 0;
        for (const auto& t : res.triples) o.triples.push_back({t[0], t[1], t[2], 0, 0, 0});
        return o;
      }
      unsupported(in.kind, algo);
    }
  }
  unsupported(in.kind, algo);
}

// Exact incidence count, or nothing when the oracle would exceed its budget.
inline std::optional<std::uint64_t> oracle_count(const Instance& in, double eps) {
  try {
    return run_algorithm(in, Algo::brute, eps).k_filtered;
  } catch (const OracleBudgetExceeded&) {
    return std::nullopt;
  }
}

inline std::string param_string(const Instance& in) {
  const auto& p = in.params;
  char buf[96];
  switch (in.kind) {
    case Kind::circles2d:
    case Kind::spheres3d:
    case Kind::circles3d: std::snprintf(buf, sizeof buf, "r=%g", p.r); return buf;
    case Kind::circles2d_var: std::snprintf(buf, sizeof buf, "r1=%g;r2=%g", p.r1, p.r2); return buf;
    case Kind::triangles: std::snprintf(buf, sizeof buf, "tri=%g;%g;%g", p.tri.u, p.tri.v, p.tri.w); return buf;
    default: return "";
  }
}

struct BenchRecord {
  Kind kind = Kind::lines2d;
  Algo algo = Algo::efficient;
  std::size_t m = 0, n = 0;
  double eps = 0.0;
  std::string param;
  std::uint64_t seed = 0;
  std::string mode;
  Outcome outcome;
  std::optional<std::uint64_t> k_true;
};

inline const char* csv_header() {
  return "kind,algo,m,n,eps,param,seed,mode,cells_visited,candidates,k_true,k_filtered,dup_factor,max_distortion,"
         "elapsed_ms";
}

inline std::string csv_row(const BenchRecord& r) {
  char buf[512];
  const auto& o = r.outcome;
  const std::string kt = r.k_true ? std::to_string(*r.k_true) : "";
  std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%g,%s,%llu,%s,%llu,%llu,%s,%llu,%u,%.6f,%.3f", to_string(r.kind).c_str(),
                to_string(r.algo).c_str(), r.m, r.n, r.eps, r.param.c_str(), static_cast<unsigned long long>(r.seed),
                r.mode.c_str(), static_cast<unsigned long long>(o.metrics.cells_visited),
                static_cast<unsigned long long>(o.metrics.candidates), kt.c_str(),
                static_cast<unsigned long long>(o.k_filtered), o.dup_factor, o.max_distortion, o.metrics.elapsed_ms);
  return buf;
}

struct BenchConfig {
  Kind kind = Kind::lines2d;
  std::vector<Algo> algos{Algo::efficient};
  std::vector<std::size_t> ms{1000}, ns{1000};
  std::vector<double> eps{0.01};
  Params params;
  std::uint64_t seed = 1;
  std::string mode = "report";
  bool with_oracle = true;
};

// One record per (m, n, eps, algo) in that nesting order. A fixed instance
// (loaded from files) overrides m and n.
inline std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg, const Instance* fixed = nullptr,
                                              std::ostream& log = std::cerr) {
  std::vector<BenchRecord> out;
  const Mode mode = parse_mode(cfg.mode);
  const std::vector<std::size_t> ms = fixed ? std::vector<std::size_t>{fixed->m()} : cfg.ms;
  const std::vector<std::size_t> ns = fixed ? std::vector<std::size_t>{fixed->n()} : cfg.ns;
  for (auto m : ms)
    for (auto n : ns)
      for (double eps : cfg.eps) {
        const Instance in = fixed ? *fixed : gen_random_instance(cfg.kind, m, n, cfg.seed, cfg.params, eps);
        std::optional<std::uint64_t> truth;
        if (cfg.with_oracle) {
          truth = oracle_count(in, eps);
          if (!truth) log << "warning: oracle budget exceeded for m=" << m << " n=" << n << "; k_true left blank\n";
        }
        for (auto a : cfg.algos) {
          BenchRecord r{cfg.kind, a, in.m(), in.n(), eps, param_string(in), cfg.seed, cfg.mode, {}, truth};
          r.outcome = run_algorithm(in, a, eps, mode);
          r.outcome.pairs.clear();
          r.outcome.triples.clear();
          out.push_back(std::move(r));
        }
      }
  return out;
}

}  // namespace incidence::bench
