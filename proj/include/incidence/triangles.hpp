// SPDX-License-Identifier: Apache-2.0
//
// Triples of points spanning triangles nearly congruent to a fat reference
// triangle: near pairs for the longest side, then points near the circle
// swept by the third vertex.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "geom.hpp"
#include "incidence3d.hpp"
#include "report.hpp"

namespace incidence {

struct TriangleQuery {
  Triangle triangle;  // u = |ab| longest, v = |ac|, w = |bc|
  double eps = 0.0;
  double beta = 0.0;  // lower bound for u
  double s = 0.0;     // lower bound for the height over ab
};

struct TriangleGeometry {
  double z = 0.0;  // offset of the foot of the height from a along ab
  double h = 0.0;  // height over ab
};

inline TriangleGeometry triangle_geometry(double u, double v, double w) {
  if (!(u > 0.0 && v > 0.0 && w > 0.0)) throw ParameterError("side lengths must be positive");
  const double t = 0.5 * (u + v + w);
  const double area2 = t * (t - u) * (t - v) * (t - w);
  if (!(area2 > 0.0)) throw ParameterError("degenerate triangle");
  return {(u * u + v * v - w * w) / (2.0 * u), 2.0 * std::sqrt(area2) / u};
}

// Tube constant: a triple whose sides are each within eps of (u, v, w)
// keeps its third vertex within tube_constant * eps of the swept circle.
inline double tube_constant(const Triangle& t) {
  const auto [z, h] = triangle_geometry(t.u, t.v, t.w);
  const double u = t.u, v = t.v, w = t.w;
  const double zu = 0.5 - (v * v - w * w) / (2.0 * u * u), zv = v / u, zw = -w / u;
  const double hu = -z * zu / h, hv = (v - z * zv) / h, hw = -z * zw / h;
  const double gz = std::abs(zu) + std::abs(zv) + std::abs(zw);
  const double gh = std::abs(hu) + std::abs(hv) + std::abs(hw);
  return 2.0 * std::sqrt(gz * gz + gh * gh);
}

inline void validate(const TriangleQuery& q) {
  const auto& t = q.triangle;
  if (!(q.eps > 0.0)) throw ParameterError("eps must be positive");
  if (!(t.u >= t.v && t.u >= t.w)) throw ParameterError("u must be the longest side");
  if (!(q.beta > 0.0 && q.beta <= t.u && t.u <= 0.5)) throw ParameterError("need beta <= u <= 1/2");
  const auto g = triangle_geometry(t.u, t.v, t.w);
  if (!(q.s > 0.0 && g.h >= q.s)) throw ParameterError("height below the fatness bound s");
  if (!(q.eps <= std::min(q.beta, q.s) / 20.0)) throw ParameterError("need eps <= min(beta, s)/20");
  if (!(tube_constant(t) * q.eps < g.h / 10.0)) throw ParameterError("tube radius must stay below h/10");
}

struct PairTorus {
  std::uint32_t p = 0, q = 0;
  Circle3 circle;
  double tube_radius = 0.0;
};

inline PairTorus torus_for_pair(Point3 p, Point3 q, const TriangleQuery& query, std::uint32_t ip = 0,
                                std::uint32_t iq = 0) {
  const double len = norm(q - p);
  if (!(len > 0.0)) throw ParameterError("coincident pair");
  const auto g = triangle_geometry(query.triangle.u, query.triangle.v, query.triangle.w);
  const Point3 axis = (1.0 / len) * (q - p);
  return {ip, iq, Circle3{p + g.z * axis, g.h, axis}, tube_constant(query.triangle) * query.eps};
}

struct TripleMatch {
  std::uint32_t p = 0, q = 0, o = 0;
  double dev_u = 0.0, dev_v = 0.0, dev_w = 0.0;
  double max_dev() const { return std::max({dev_u, dev_v, dev_w}); }
};

struct TriangleReport {
  std::vector<TripleMatch> triples;  // sorted by (p, q, o)
  std::uint64_t stage1_candidates = 0;
  std::uint64_t pruned_pairs = 0;
  std::uint64_t candidates = 0;  // unique stage-2 triples
  std::uint32_t max_multiplicity = 0;
  std::uint64_t cells_visited = 0;
  double alpha = 0.0;  // max side deviation over candidates, in units of eps
  double tube_constant = 0.0;
  double elapsed_ms = 0.0;
  std::map<std::string, double> extras;
};

// filter_factor a > 0 keeps triples with every deviation <= a eps; a = 0
// keeps every candidate.
inline TriangleReport report_congruent_triangles(const std::vector<Point3>& B, const TriangleQuery& query,
                                                 double filter_factor = 0.0) {
  validate(query);
  detail::Stopwatch sw;
  TriangleReport out;
  const auto& t = query.triangle;
  const double eps = query.eps;
  out.tube_constant = tube_constant(t);
  if (B.size() < 3) return out;

  const Report pairs = report_congruent_pairs_3d(B, B, t.u, eps, Mode::filtered);
  out.stage1_candidates = pairs.metrics.unique_candidates;
  out.cells_visited += pairs.metrics.cells_visited;
  std::vector<PairTorus> tori;
  std::vector<Circle3> circles;
  for (const auto& pr : pairs.pairs) {
    if (pr.point == pr.object) continue;
    tori.push_back(torus_for_pair(B[pr.point], B[pr.object], query, pr.point, pr.object));
    circles.push_back(tori.back().circle);
  }
  out.pruned_pairs = tori.size();
  if (tori.empty()) {
    out.elapsed_ms = sw.ms();
    return out;
  }
  const auto g = triangle_geometry(t.u, t.v, t.w);
  const Report hits = report_point_circle_3d(B, circles, g.h, out.tube_constant * eps, Mode::candidates);
  out.cells_visited += hits.metrics.cells_visited;
  out.max_multiplicity = hits.metrics.max_multiplicity;
  out.extras["qstar_violations"] = hits.extras.at("qstar_violations");
  for (const auto& c : hits.pairs) {
    const auto& tp = tori[c.object];
    if (c.point == tp.p || c.point == tp.q) continue;
    TripleMatch m{tp.p, tp.q, c.point, std::abs(norm(B[tp.q] - B[tp.p]) - t.u),
                  std::abs(norm(B[c.point] - B[tp.p]) - t.v), std::abs(norm(B[c.point] - B[tp.q]) - t.w)};
    ++out.candidates;
    out.alpha = std::max(out.alpha, m.max_dev() / eps);
    if (filter_factor > 0.0 && m.max_dev() > filter_factor * eps) continue;
    out.triples.push_back(m);
  }
  std::sort(out.triples.begin(), out.triples.end(), [](const TripleMatch& a, const TripleMatch& b) {
    return std::tie(a.p, a.q, a.o) < std::tie(b.p, b.q, b.o);
  });
  out.elapsed_ms = sw.ms();
  return out;
}

}  // namespace incidence
