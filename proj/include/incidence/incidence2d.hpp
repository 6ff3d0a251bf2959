// SPDX-License-Identifier: Apache-2.0
//
// Planar algorithms: points vs lines, congruent pairs (sector and duality
// methods) and points vs circles of bounded radii.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "geom.hpp"
#include "grid.hpp"
#include "plan.hpp"
#include "report.hpp"

namespace incidence {

namespace detail {

// Routes emissions of a core run back to original indices.
struct PairSink {
  Collector* col = nullptr;
  std::vector<Block>* blocks = nullptr;
  const std::vector<std::uint32_t>* point_ids = nullptr;   // core point -> original id
  const std::vector<std::uint32_t>* object_ids = nullptr;  // core object -> original id
  bool swapped = false;  // core points stand for original objects
  std::uint32_t tag = 0;

  std::uint32_t pid(std::uint32_t i) const { return point_ids ? (*point_ids)[i] : i; }
  std::uint32_t oid(std::uint32_t i) const { return object_ids ? (*object_ids)[i] : i; }

  void emit(std::uint32_t cp, std::uint32_t co) {
    if (swapped) col->emit(oid(co), pid(cp), tag);
    else col->emit(pid(cp), oid(co), tag);
  }

  void block(const std::vector<std::uint32_t>& cps, const std::vector<std::uint32_t>& cos) {
    if (!blocks) return;
    Block b;
    for (auto i : cps) b.points.push_back(pid(i));
    for (auto i : cos) b.objects.push_back(oid(i));
    if (swapped) std::swap(b.points, b.objects);
    blocks->push_back(std::move(b));
  }
};

inline std::uint32_t unpack_axis(std::uint64_t key, int which) {
  constexpr std::uint64_t mask = (std::uint64_t{1} << 21) - 1;
  return static_cast<std::uint32_t>((key >> (21 * (2 - which))) & mask);
}
inline std::int64_t unpack_index(std::uint64_t key, int which) {
  return static_cast<std::int64_t>(unpack_axis(key, which)) - (std::int64_t{1} << 20);
}

// Vertical-distance primal/dual core: points in [0,1]^2, non-vertical lines
// with |a| <= 1. Reports every pair with vertical distance <= sqrt(2) e, and
// only pairs with vertical distance <= 5e.
inline void vertical_core_2d(const std::vector<Point2>& pts, const std::vector<Line2>& lines, double e,
                             const DeltaPlan& plan, PairSink& sink, RunMetrics& m) {
  if (pts.empty() || lines.empty()) return;
  const double d1 = plan.delta1, d2 = plan.delta2;
  const bool primal_only = plan.strategy == Strategy::primal_only;
  const auto reach =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::sqrt(2.0) * e / d1 - 1e-12)));

  const auto g = build_grid<2>({{0.0, 0.0}, {1.0, 1.0}}, {d1, d1});
  PackedBuckets pb;
  for (std::uint32_t i = 0; i < pts.size(); ++i) {
    const auto k = g.locate({pts[i].x, pts[i].y}, 1e-6);
    pb.add(pack_key(k[0], k[1]), i);
  }
  pb.finalize();

  std::vector<std::pair<std::uint64_t, std::uint32_t>> crossings;
  for (std::uint32_t j = 0; j < lines.size(); ++j)
    for_each_cell_crossed_by_line_2d(lines[j], g, [&](const CellKey<2>& k) {
      crossings.emplace_back(pack_key(k[0], k[1]), j);
    });
  m.cells_visited += crossings.size();
  std::sort(crossings.begin(), crossings.end());

  const auto dg = build_grid<2>({{-1.0, -d1}, {1.0, d1}}, {2.0 * d2, 2.0 * d1 * d2});
  PackedBuckets db;
  std::vector<std::uint32_t> ps, ls;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> hits;  // bipartite: (dual cell, point)

  for (std::size_t s = 0; s < crossings.size();) {
    std::size_t t = s;
    ls.clear();
    while (t < crossings.size() && crossings[t].first == crossings[s].first) ls.push_back(crossings[t++].second);
    const std::uint64_t key = crossings[s].first;
    s = t;
    const std::int64_t ci = unpack_index(key, 0), cj = unpack_index(key, 1);
    ps.clear();
    for (auto dj = -reach; dj <= reach; ++dj) {
      if (cj + dj < 0 || cj + dj >= g.counts[1]) continue;
      pb.for_each_in(pack_key(ci, cj + dj), [&](std::uint32_t p) { ps.push_back(p); });
    }
    if (ps.empty()) continue;

    if (primal_only) {
      for (auto p : ps)
        for (auto l : ls) sink.emit(p, l);
      sink.block(ps, ls);
      continue;
    }

    const auto o = g.center({ci, cj});
    db.clear();
    for (auto l : ls) {
      const Line2& L = lines[l];
      const double dloc = L.b + L.a * o[0] - o[1];
      db.add(pack_key(dg.axis_index(0, L.a), dg.axis_index(1, -dloc)), l);
    }
    db.finalize();
    hits.clear();
    for (auto p : ps) {
      const double xi = pts[p].x - o[0], eta = pts[p].y - o[1];
      std::uint64_t last = ~std::uint64_t{0};
      for (std::int64_t c = 0; c < dg.counts[0]; ++c) {
        const double y0 = xi * dg.lo(0, c) - eta, y1 = xi * dg.hi(0, c) - eta;
        auto [r0, r1] = dg.closed_range_expanded(1, std::min(y0, y1), std::max(y0, y1), 1);
        if (r0 > r1) continue;
        m.cells_visited += static_cast<std::uint64_t>(r1 - r0 + 1);
        db.for_each_entry_in_range(pack_key(c, r0), pack_key(c, r1), [&](std::uint64_t cell, std::uint32_t l) {
          sink.emit(p, l);
          if (sink.blocks && cell != last) {
            hits.emplace_back(cell, p);
            last = cell;
          }
        });
      }
    }
    if (sink.blocks) {
      std::sort(hits.begin(), hits.end());
      std::vector<std::uint32_t> bp, bl;
      for (std::size_t a = 0; a < hits.size();) {
        std::size_t b = a;
        bp.clear();
        bl.clear();
        while (b < hits.size() && hits[b].first == hits[a].first) bp.push_back(hits[b++].second);
        db.for_each_in(hits[a].first, [&](std::uint32_t l) { bl.push_back(l); });
        sink.block(bp, bl);
        a = b;
      }
    }
  }
}

inline bool line_meets_unit_square(const Line2& l) {
  const double y0 = l.b, y1 = l.a + l.b;
  return std::max(y0, y1) >= 0.0 && std::min(y0, y1) <= 1.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// points vs lines

inline Report report_point_line_2d(const std::vector<Point2>& P, const std::vector<Line2>& L, double eps,
                                   Mode mode = Mode::filtered) {
  detail::check_eps(eps);
  detail::Stopwatch sw;
  Report rep;
  if (P.empty() || L.empty()) {
    rep.plans.push_back({});
    return rep;
  }
  detail::Collector col;
  std::vector<Block>* blocks = mode == Mode::bipartite ? &rep.cover.blocks : nullptr;
  const auto classes = normalize_slope_classes_2d(L);
  std::vector<std::uint32_t> all_points(P.size());
  for (std::uint32_t i = 0; i < P.size(); ++i) all_points[i] = i;

  for (std::uint32_t k = 0; k < classes.size(); ++k) {
    const auto& cls = classes[k];
    if (cls.lines.empty()) continue;
    std::vector<Point2> pts(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) pts[i] = rotate(P[i], cls.angle);
    const auto sim = unit_square_map(pts, 2.0 * eps);
    const double e = sim.scale * eps;
    for (auto& p : pts) p = sim.apply(p);
    std::vector<Line2> lines;
    lines.reserve(cls.lines.size());
    for (const auto& l : cls.lines) lines.push_back(sim.apply(l));
    std::vector<std::uint32_t> line_ids(cls.indices.begin(), cls.indices.end());

    DeltaPlan plan = plan_deltas(pts.size(), lines.size(), e);
    if (plan.strategy != Strategy::roles_swapped) {
      rep.plans.push_back(plan);
      detail::PairSink sink{&col, blocks, &all_points, &line_ids, false, k};
      detail::vertical_core_2d(pts, lines, e, plan, sink, rep.metrics);
      continue;
    }
    // Dual plane: line y = a x + b becomes the point (a, -b), point (x, y)
    // becomes the line y = x X - y. Vertical distances are preserved.
    std::vector<Point2> dpts;
    std::vector<std::uint32_t> dpt_ids;
    for (std::size_t j = 0; j < lines.size(); ++j) {
      if (!detail::line_meets_unit_square(lines[j])) continue;
      dpts.push_back({lines[j].a, -lines[j].b});
      dpt_ids.push_back(line_ids[j]);
    }
    if (dpts.empty()) continue;
    const auto dsim = unit_square_map(dpts, 2.0 * e);
    const double e2 = dsim.scale * e;
    for (auto& p : dpts) p = dsim.apply(p);
    std::vector<Line2> dlines;
    dlines.reserve(pts.size());
    for (const auto& p : pts) dlines.push_back(dsim.apply(Line2::slope_intercept(p.x, -p.y)));
    DeltaPlan inner = plan_deltas(dpts.size(), dlines.size(), e2);
    DeltaPlan shown = inner;
    shown.strategy = Strategy::roles_swapped;
    shown.swapped = true;
    rep.plans.push_back(shown);
    detail::PairSink sink{&col, blocks, &dpt_ids, &all_points, true, k + 3};
    detail::vertical_core_2d(dpts, dlines, e2, inner, sink, rep.metrics);
  }
  detail::finalize(col, mode, eps, [&](std::uint32_t p, std::uint32_t o) { return dist_point_line_2d(P[p], L[o]); },
                   rep);
  rep.metrics.elapsed_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// congruent pairs, sector method

struct SectorGeometry {
  std::int64_t arcs = 0;
  double theta = 0.0;       // central angle of one arc
  double long_side = 0.0;   // rectangle side along the chord
  double short_side = 0.0;  // rectangle side along the arc midpoint direction
  double near = 0.0;        // rectangle offset from q along that direction
};

inline SectorGeometry sector_geometry(double r, double eps) {
  SectorGeometry s;
  s.arcs = static_cast<std::int64_t>(std::ceil(2.0 * std::numbers::pi / std::sqrt(eps)));
  s.theta = 2.0 * std::numbers::pi / static_cast<double>(s.arcs);
  s.long_side = 2.0 * (r + eps) * std::sin(0.5 * s.theta);
  s.near = (r - eps) * std::cos(0.5 * s.theta);
  s.short_side = (r + eps) - s.near;
  return s;
}

namespace detail {
inline void check_congruent(double r, double eps) {
  check_eps(eps);
  if (!(r > 0.0 && r <= 0.5)) throw ParameterError("r must lie in (0, 1/2]");
  if (!(eps < r)) throw ParameterError("eps must be smaller than r");
}
}  // namespace detail

inline Report report_congruent_pairs_2d_sector(const std::vector<Point2>& P, const std::vector<Point2>& Q, double r,
                                               double eps, Mode mode = Mode::filtered) {
  detail::check_congruent(r, eps);
  detail::Stopwatch sw;
  Report rep;
  if (P.empty() || Q.empty()) {
    rep.plans.push_back({});
    return rep;
  }
  const auto geo = sector_geometry(r, eps);
  rep.plans.push_back({geo.long_side, geo.short_side, Strategy::primal_only, false});
  detail::Collector col;
  PackedBuckets pb;
  const double wx = geo.long_side, wy = geo.short_side;
  auto fl = [](double v) { return static_cast<std::int64_t>(std::floor(v)); };
  for (std::int64_t k = 0; k < geo.arcs; ++k) {
    // turn the midpoint direction of arc k onto +y
    const double ang = 0.5 * std::numbers::pi - (static_cast<double>(k) + 0.5) * geo.theta;
    pb.clear();
    for (std::uint32_t i = 0; i < P.size(); ++i) {
      const Point2 p = rotate(P[i], ang);
      pb.add(pack_key(fl(p.x / wx), fl(p.y / wy)), i);
    }
    pb.finalize();
    for (std::uint32_t j = 0; j < Q.size(); ++j) {
      const Point2 q = rotate(Q[j], ang);
      const auto x0 = fl((q.x - 0.5 * wx) / wx), x1 = fl((q.x + 0.5 * wx) / wx);
      const auto y0 = fl((q.y + geo.near) / wy), y1 = fl((q.y + geo.near + wy) / wy);
      for (auto ix = x0; ix <= x1; ++ix)
        for (auto iy = y0; iy <= y1; ++iy) {
          ++rep.metrics.cells_visited;
          pb.for_each_in(pack_key(ix, iy), [&](std::uint32_t i) { col.emit(i, j, static_cast<std::uint32_t>(k)); });
        }
    }
  }
  detail::finalize(col, mode, eps,
                   [&](std::uint32_t p, std::uint32_t q) { return dist_point_circle_2d(P[p], Circle2{Q[q], r}); }, rep);
  rep.metrics.elapsed_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// congruent pairs, duality method

inline Report report_congruent_pairs_2d_dual(const std::vector<Point2>& P, const std::vector<Point2>& Q, double r,
                                             double eps, Mode mode = Mode::filtered, double skip_factor = 100.0) {
  detail::check_congruent(r, eps);
  if (!(eps <= r / 10.0)) throw ParameterError("duality method needs eps <= r/10");
  detail::Stopwatch sw;
  Report rep;
  if (P.empty() || Q.empty()) {
    rep.plans.push_back({});
    return rep;
  }
  const bool flip = P.size() > Q.size();
  const auto& A0 = flip ? Q : P;  // dualized side, the smaller one
  const auto& B0 = flip ? P : Q;
  std::vector<Point2> all(A0);
  all.insert(all.end(), B0.begin(), B0.end());
  const auto sim = unit_square_map(all, 2.0 * eps);
  const double e = sim.scale * eps, rr = sim.scale * r;
  std::vector<Point2> A, B;
  for (const auto& p : A0) A.push_back(sim.apply(p));
  for (const auto& p : B0) B.push_back(sim.apply(p));

  DeltaPlan plan = detail::plan_congruent_dual_2d(static_cast<double>(A.size()), static_cast<double>(B.size()), e, rr,
                                                  skip_factor);
  plan.swapped = flip;
  rep.plans.push_back(plan);
  detail::Collector col;
  auto emit = [&](std::uint32_t a, std::uint32_t b, std::uint32_t tag) {
    if (flip) col.emit(b, a, tag);
    else col.emit(a, b, tag);
  };
  auto& m = rep.metrics;

  if (plan.strategy == Strategy::dual_only) {
    const auto g = build_grid<2>({{0.0, 0.0}, {1.0, 1.0}}, {e, e});
    PackedBuckets pb;
    for (std::uint32_t j = 0; j < B.size(); ++j) {
      const auto k = g.locate({B[j].x, B[j].y}, 1e-6);
      pb.add(pack_key(k[0], k[1]), j);
    }
    pb.finalize();
    std::vector<std::uint64_t> cells;
    for (std::uint32_t i = 0; i < A.size(); ++i) {
      cells.clear();
      for_each_cell_crossed_by_circle_2d(Circle2{A[i], rr}, g, [&](const CellKey<2>& k) {
        for (std::int64_t dx = -1; dx <= 1; ++dx)
          for (std::int64_t dy = -1; dy <= 1; ++dy)
            if (g.valid({k[0] + dx, k[1] + dy})) cells.push_back(pack_key(k[0] + dx, k[1] + dy));
      });
      std::sort(cells.begin(), cells.end());
      cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
      m.cells_visited += cells.size();
      for (auto c : cells) pb.for_each_in(c, [&](std::uint32_t j) { emit(i, j, 0); });
    }
  } else {
    const double d1 = plan.delta1, d2 = plan.delta2;
    const auto g = build_grid<2>({{0.0, 0.0}, {1.0, 1.0}}, {d1, d1});
    PackedBuckets pa;
    for (std::uint32_t i = 0; i < A.size(); ++i) {
      const auto k = g.locate({A[i].x, A[i].y}, 1e-6);
      pa.add(pack_key(k[0], k[1]), i);
    }
    pa.finalize();
    std::vector<std::pair<std::uint64_t, std::uint32_t>> crossings;
    for (std::uint32_t j = 0; j < B.size(); ++j)
      for_each_cell_crossed_by_circle_2d(Circle2{B[j], rr}, g, [&](const CellKey<2>& k) {
        crossings.emplace_back(pack_key(k[0], k[1]), j);
      });
    m.cells_visited += crossings.size();
    std::sort(crossings.begin(), crossings.end());

    const double band = d1 / std::sqrt(2.0);
    const auto pgrid = build_grid<2>({{rr - band, 0.0}, {rr + band, 2.0 * std::numbers::pi}},
                                     {std::sqrt(2.0) * d1 * d2, 2.0 * std::numbers::pi * d2});
    PackedBuckets db;
    std::vector<std::uint32_t> ps;
    for (std::size_t s = 0; s < crossings.size();) {
      std::size_t t = s;
      const std::uint64_t key = crossings[s].first;
      while (t < crossings.size() && crossings[t].first == key) ++t;
      const std::int64_t ci = detail::unpack_index(key, 0), cj = detail::unpack_index(key, 1);
      ps.clear();
      for (std::int64_t dx = -1; dx <= 1; ++dx)
        for (std::int64_t dy = -1; dy <= 1; ++dy)
          if (g.valid({ci + dx, cj + dy})) pa.for_each_in(pack_key(ci + dx, cj + dy), [&](std::uint32_t i) { ps.push_back(i); });
      if (ps.empty()) {
        s = t;
        continue;
      }
      const auto oc = g.center({ci, cj});
      const Point2 o{oc[0], oc[1]};
      db.clear();
      for (std::size_t u = s; u < t; ++u) {
        const std::uint32_t j = crossings[u].second;
        const Point2 d = B[j] - o;
        double th = std::atan2(d.y, d.x);
        if (th < 0.0) th += 2.0 * std::numbers::pi;
        db.add(pack_key(pgrid.axis_index(1, th), pgrid.axis_index(0, norm(d))), j);
      }
      db.finalize();
      s = t;
      for (auto i : ps) {
        const Point2 q = A[i] - o;
        for (std::int64_t c = 0; c < pgrid.counts[1]; ++c) {
          auto [lo, hi] = polar_radius_range(q, rr, pgrid.lo(1, c), pgrid.hi(1, c));
          auto [r0, r1] = pgrid.closed_range_expanded(0, lo, hi, 1);
          if (r0 > r1) continue;
          m.cells_visited += static_cast<std::uint64_t>(r1 - r0 + 1);
          db.for_each_in_range(pack_key(c, r0), pack_key(c, r1), [&](std::uint32_t j) { emit(i, j, 1); });
        }
      }
    }
  }
  detail::finalize(col, mode, eps,
                   [&](std::uint32_t p, std::uint32_t q) { return dist_point_circle_2d(P[p], Circle2{Q[q], r}); }, rep);
  m.elapsed_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// points vs circles with radii in [r1, r2], through the power of a point and
// the lifting map

inline Report report_point_circle_2d(const std::vector<Point2>& P, const std::vector<Circle2>& C, double eps, double r1,
                                     double r2, Mode mode = Mode::filtered) {
  detail::check_eps(eps);
  if (!(r1 > 0.0 && r1 <= r2)) throw ParameterError("need 0 < r1 <= r2");
  if (!(eps <= r1)) throw ParameterError("need eps <= r1");
  for (const auto& c : C)
    if (c.radius < r1 * (1.0 - 1e-12) || c.radius > r2 * (1.0 + 1e-12))
      throw ParameterError("circle radius outside [r1, r2]");
  detail::Stopwatch sw;
  Report rep;
  if (P.empty() || C.empty()) {
    rep.plans.push_back({});
    return rep;
  }
  const auto sim = unit_square_map(P, 2.0 * eps);
  const double e = sim.scale * eps, s1 = sim.scale * r1, s2 = sim.scale * r2;
  std::vector<Point2> pts;
  for (const auto& p : P) pts.push_back(sim.apply(p));
  std::vector<Circle2> cs;
  for (const auto& c : C) cs.push_back(sim.apply(c));

  const DeltaPlan plan = detail::plan_point_circle_2d(static_cast<double>(pts.size()), static_cast<double>(cs.size()), e, s1);
  rep.plans.push_back(plan);
  const double d1 = plan.delta1, d2 = plan.delta2;
  detail::Collector col;
  auto& m = rep.metrics;

  const auto g = build_grid<2>({{0.0, 0.0}, {1.0, 1.0}}, {d1, d1});
  PackedBuckets pb;
  for (std::uint32_t i = 0; i < pts.size(); ++i) {
    const auto k = g.locate({pts[i].x, pts[i].y}, 1e-6);
    pb.add(pack_key(k[0], k[1]), i);
  }
  pb.finalize();
  std::vector<std::pair<std::uint64_t, std::uint32_t>> crossings;
  for (std::uint32_t j = 0; j < cs.size(); ++j)
    for_each_cell_crossed_by_circle_2d(cs[j], g, [&](const CellKey<2>& k) { crossings.emplace_back(pack_key(k[0], k[1]), j); });
  m.cells_visited += crossings.size();
  std::sort(crossings.begin(), crossings.end());

  // dual box about the lifted cell centre
  const double half_diag = d1 / std::sqrt(2.0);
  const double L = 2.0 * (s2 + d1);
  const double H = std::max(3.0 * s2 * d1, half_diag * (2.0 * s2 + half_diag));
  const auto dg = build_grid<3>({{-L, -L, -H}, {L, L, H}}, {2.0 * L * d2, 2.0 * L * d2, 3.0 * s2 * d1 * d2});
  PackedBuckets db;
  std::vector<std::uint32_t> ps, ls;
  for (std::size_t s = 0; s < crossings.size();) {
    std::size_t t = s;
    const std::uint64_t key = crossings[s].first;
    ls.clear();
    while (t < crossings.size() && crossings[t].first == key) ls.push_back(crossings[t++].second);
    s = t;
    const std::int64_t ci = detail::unpack_index(key, 0), cj = detail::unpack_index(key, 1);
    ps.clear();
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        if (g.valid({ci + dx, cj + dy})) pb.for_each_in(pack_key(ci + dx, cj + dy), [&](std::uint32_t i) { ps.push_back(i); });
    if (ps.empty()) continue;
    if (plan.strategy == Strategy::primal_only) {
      for (auto i : ps)
        for (auto j : ls) col.emit(i, j, 0);
      continue;
    }
    const auto oc = g.center({ci, cj});
    const Point2 o{oc[0], oc[1]};
    // circle -> dual point of its lifted plane, in coordinates centred at o
    db.clear();
    for (auto j : ls) {
      const Point2 q = cs[j].center - o;
      const double z = dot(q, q) - cs[j].radius * cs[j].radius;
      db.add(pack_key(dg.axis_index(0, 2.0 * q.x), dg.axis_index(1, 2.0 * q.y), dg.axis_index(2, z)), j);
    }
    db.finalize();
    for (auto i : ps) {
      // lifted point -> dual plane z = u.x X + u.y Y - |u|^2
      const Point2 u = pts[i] - o;
      const double c0 = -dot(u, u);
      for (std::int64_t ix = 0; ix < dg.counts[0]; ++ix) {
        const double ax0 = u.x * dg.lo(0, ix), ax1 = u.x * dg.hi(0, ix);
        for (std::int64_t iy = 0; iy < dg.counts[1]; ++iy) {
          const double by0 = u.y * dg.lo(1, iy), by1 = u.y * dg.hi(1, iy);
          const double zlo = c0 + std::min(ax0, ax1) + std::min(by0, by1);
          const double zhi = c0 + std::max(ax0, ax1) + std::max(by0, by1);
          auto [k0, k1] = dg.closed_range_expanded(2, zlo, zhi, 1);
          if (k0 > k1) continue;
          m.cells_visited += static_cast<std::uint64_t>(k1 - k0 + 1);
          db.for_each_in_range(pack_key(ix, iy, k0), pack_key(ix, iy, k1), [&](std::uint32_t j) { col.emit(i, j, 1); });
        }
      }
    }
  }
  detail::finalize(col, mode, eps, [&](std::uint32_t p, std::uint32_t c) { return dist_point_circle_2d(P[p], C[c]); }, rep);
  m.elapsed_ms = sw.ms();
  return rep;
}

}  // namespace incidence
