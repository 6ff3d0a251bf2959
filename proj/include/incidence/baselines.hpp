// SPDX-License-Identifier: Apache-2.0
//
// Naive eps-grid and naive-duality baselines, and the exhaustive oracles used
// as ground truth.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geom.hpp"
#include "grid.hpp"
#include "incidence2d.hpp"
#include "report.hpp"
#include "triangles.hpp"

namespace incidence {

class OracleBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // sorted
  std::size_t count = 0;
  double elapsed_ms = 0.0;
};

inline double object_distance(Point2 p, const Line2& l) { return dist_point_line_2d(p, l); }
inline double object_distance(Point2 p, const Circle2& c) { return dist_point_circle_2d(p, c); }
inline double object_distance(Point3 p, const Plane3& pl) { return dist_point_plane_3d(p, pl); }
inline double object_distance(Point3 p, const Line3& l) { return dist_point_line_3d(p, l); }
inline double object_distance(Point3 p, const Circle3& c) { return dist_point_circle_3d(p, c); }
inline double object_distance(Point3 p, const Sphere3& s) { return dist_point_sphere_3d(p, s); }

inline constexpr double kPairBudget = 1e7;

template <class Pt, class Obj>
OracleResult brute_force_pairs(const std::vector<Pt>& P, const std::vector<Obj>& objects, double threshold) {
  if (static_cast<double>(P.size()) * static_cast<double>(objects.size()) > kPairBudget)
    throw OracleBudgetExceeded("brute force pair budget exceeded (mn > 1e7)");
  detail::Stopwatch sw;
  OracleResult res;
  for (std::uint32_t i = 0; i < P.size(); ++i)
    for (std::uint32_t j = 0; j < objects.size(); ++j)
      if (object_distance(P[i], objects[j]) <= threshold) res.pairs.emplace_back(i, j);
  res.count = res.pairs.size();
  res.elapsed_ms = sw.ms();
  return res;
}

struct TripleOracleResult {
  std::vector<std::array<std::uint32_t, 3>> triples;  // ordered (p, q, o), sorted
  std::size_t count = 0;
  double elapsed_ms = 0.0;
};

inline constexpr double kTripleBudget = 3e7;

// Every ordered triple with | |pq| - u |, | |po| - v |, | |qo| - w | <= eps.
inline TripleOracleResult brute_force_triples(const std::vector<Point3>& B, const TriangleQuery& query) {
  const double n = static_cast<double>(B.size());
  if (n * n * n > kTripleBudget) throw OracleBudgetExceeded("brute force triple budget exceeded (n^3 > 3e7)");
  detail::Stopwatch sw;
  TripleOracleResult res;
  const auto& t = query.triangle;
  const double eps = query.eps;
  for (std::uint32_t p = 0; p < B.size(); ++p)
    for (std::uint32_t q = 0; q < B.size(); ++q) {
      if (p == q || std::abs(norm(B[q] - B[p]) - t.u) > eps) continue;
      for (std::uint32_t o = 0; o < B.size(); ++o) {
        if (o == p || o == q) continue;
        if (std::abs(norm(B[o] - B[p]) - t.v) <= eps && std::abs(norm(B[o] - B[q]) - t.w) <= eps)
          res.triples.push_back({p, q, o});
      }
    }
  res.count = res.triples.size();
  res.elapsed_ms = sw.ms();
  return res;
}

inline std::vector<Circle2> circles_around(const std::vector<Point2>& centers, double r) {
  std::vector<Circle2> out;
  out.reserve(centers.size());
  for (const auto& c : centers) out.push_back({c, r});
  return out;
}

inline std::vector<Sphere3> spheres_around(const std::vector<Point3>& centers, double r) {
  std::vector<Sphere3> out;
  out.reserve(centers.size());
  for (const auto& c : centers) out.push_back({c, r});
  return out;
}

namespace detail {

inline UniformGrid<2> padded_grid(const std::vector<Point2>& P, double cell) {
  Point2 lo = P[0], hi = P[0];
  for (const auto& p : P) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  return build_grid<2>({{lo.x - cell, lo.y - cell}, {hi.x + cell, hi.y + cell}}, {cell, cell});
}

inline UniformGrid<3> padded_grid(const std::vector<Point3>& P, double cell) {
  Point3 lo = P[0], hi = P[0];
  for (const auto& p : P) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  return build_grid<3>({{lo.x - cell, lo.y - cell, lo.z - cell}, {hi.x + cell, hi.y + cell, hi.z + cell}},
                       {cell, cell, cell});
}

inline PackedBuckets bucket_points(const std::vector<Point2>& P, const UniformGrid<2>& g) {
  PackedBuckets pb;
  for (std::uint32_t i = 0; i < P.size(); ++i) {
    const auto k = g.locate({P[i].x, P[i].y}, 1e-6);
    pb.add(pack_key(k[0], k[1]), i);
  }
  pb.finalize();
  return pb;
}

inline PackedBuckets bucket_points(const std::vector<Point3>& P, const UniformGrid<3>& g) {
  PackedBuckets pb;
  for (std::uint32_t i = 0; i < P.size(); ++i) {
    const auto k = g.locate({P[i].x, P[i].y, P[i].z}, 1e-6);
    pb.add(pack_key(k[0], k[1], k[2]), i);
  }
  pb.finalize();
  return pb;
}

// Probes, for a line, every cell it crosses together with all 8 neighbours.
template <class Probe>
void naive_probe_line_2d(const Line2& l, const UniformGrid<2>& g, Probe&& probe) {
  if (l.vertical) {
    auto [c0, c1] = g.closed_range_expanded(0, l.x0, l.x0, 1);
    for (auto i = c0; i <= c1; ++i)
      for (std::int64_t j = 0; j < g.counts[1]; ++j) probe(i, j);
    return;
  }
  const auto nx = g.counts[0];
  std::vector<std::pair<std::int64_t, std::int64_t>> rows(static_cast<std::size_t>(nx));
  for (std::int64_t i = 0; i < nx; ++i) rows[i] = line_rows_in_column(l, g, i);
  for (std::int64_t i = 0; i < nx; ++i) {
    std::int64_t lo = g.counts[1], hi = -1;
    for (auto k = std::max<std::int64_t>(0, i - 1); k <= std::min(nx - 1, i + 1); ++k)
      if (rows[k].first <= rows[k].second) {
        lo = std::min(lo, rows[k].first);
        hi = std::max(hi, rows[k].second);
      }
    if (lo > hi) continue;
    lo = std::max<std::int64_t>(0, lo - 1);
    hi = std::min(g.counts[1] - 1, hi + 1);
    for (auto j = lo; j <= hi; ++j) probe(i, j);
  }
}

template <class Probe>
void naive_probe_plane_3d(const Plane3& pl, const UniformGrid<3>& g, Probe&& probe) {
  const auto nx = g.counts[0], ny = g.counts[1];
  std::vector<std::pair<std::int64_t, std::int64_t>> cols(static_cast<std::size_t>(nx * ny));
  for (std::int64_t i = 0; i < nx; ++i)
    for (std::int64_t j = 0; j < ny; ++j) cols[i * ny + j] = plane_rows_in_column(pl, g, i, j);
  for (std::int64_t i = 0; i < nx; ++i)
    for (std::int64_t j = 0; j < ny; ++j) {
      std::int64_t lo = g.counts[2], hi = -1;
      for (auto a = std::max<std::int64_t>(0, i - 1); a <= std::min(nx - 1, i + 1); ++a)
        for (auto b = std::max<std::int64_t>(0, j - 1); b <= std::min(ny - 1, j + 1); ++b) {
          const auto& r = cols[a * ny + b];
          if (r.first <= r.second) {
            lo = std::min(lo, r.first);
            hi = std::max(hi, r.second);
          }
        }
      if (lo > hi) continue;
      lo = std::max<std::int64_t>(0, lo - 1);
      hi = std::min(g.counts[2] - 1, hi + 1);
      for (auto k = lo; k <= hi; ++k) probe(i, j, k);
    }
}

// Crossed cells dilated by one in every direction, deduplicated.
template <std::size_t D, class Enumerate>
std::vector<std::uint64_t> dilated_cells(const UniformGrid<D>& g, Enumerate&& enumerate) {
  std::vector<std::uint64_t> cells;
  enumerate([&](const CellKey<D>& k) {
    if constexpr (D == 2) {
      for (std::int64_t a = -1; a <= 1; ++a)
        for (std::int64_t b = -1; b <= 1; ++b)
          if (g.valid({k[0] + a, k[1] + b})) cells.push_back(pack_key(k[0] + a, k[1] + b));
    } else {
      for (std::int64_t a = -1; a <= 1; ++a)
        for (std::int64_t b = -1; b <= 1; ++b)
          for (std::int64_t c = -1; c <= 1; ++c)
            if (g.valid({k[0] + a, k[1] + b, k[2] + c})) cells.push_back(pack_key(k[0] + a, k[1] + b, k[2] + c));
    }
  });
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

template <class Obj>
struct NaiveTraits;

template <>
struct NaiveTraits<Line2> {
  template <class Emit>
  static void probe(const Line2& l, const UniformGrid<2>& g, const PackedBuckets& pb, RunMetrics& m, Emit&& emit) {
    naive_probe_line_2d(l, g, [&](std::int64_t i, std::int64_t j) {
      ++m.cells_visited;
      pb.for_each_in(pack_key(i, j), emit);
    });
  }
};

template <>
struct NaiveTraits<Plane3> {
  template <class Emit>
  static void probe(const Plane3& pl, const UniformGrid<3>& g, const PackedBuckets& pb, RunMetrics& m, Emit&& emit) {
    naive_probe_plane_3d(pl, g, [&](std::int64_t i, std::int64_t j, std::int64_t k) {
      ++m.cells_visited;
      pb.for_each_in(pack_key(i, j, k), emit);
    });
  }
};

template <std::size_t D, class Cells, class Emit>
void probe_cells(const Cells& cells, const PackedBuckets& pb, RunMetrics& m, Emit&& emit) {
  m.cells_visited += cells.size();
  for (auto c : cells) pb.for_each_in(c, emit);
}

template <>
struct NaiveTraits<Circle2> {
  template <class Emit>
  static void probe(const Circle2& c, const UniformGrid<2>& g, const PackedBuckets& pb, RunMetrics& m, Emit&& emit) {
    auto cells = dilated_cells<2>(g, [&](auto f) { for_each_cell_crossed_by_circle_2d(c, g, f); });
    probe_cells<2>(cells, pb, m, emit);
  }
};

template <>
struct NaiveTraits<Sphere3> {
  template <class Emit>
  static void probe(const Sphere3& s, const UniformGrid<3>& g, const PackedBuckets& pb, RunMetrics& m, Emit&& emit) {
    auto cells = dilated_cells<3>(g, [&](auto f) { for_each_cell_crossed_by_sphere_3d(s, g, f); });
    probe_cells<3>(cells, pb, m, emit);
  }
};

template <>
struct NaiveTraits<Line3> {
  template <class Emit>
  static void probe(const Line3& l, const UniformGrid<3>& g, const PackedBuckets& pb, RunMetrics& m, Emit&& emit) {
    auto cells = dilated_cells<3>(g, [&](auto f) { for_each_cell_crossed_by_line_3d(l, g, f); });
    probe_cells<3>(cells, pb, m, emit);
  }
};

template <>
struct NaiveTraits<Circle3> {
  template <class Emit>
  static void probe(const Circle3& c, const UniformGrid<3>& g, const PackedBuckets& pb, RunMetrics& m, Emit&& emit) {
    auto cells = dilated_cells<3>(g, [&](auto f) { for_each_cell_crossed_by_circle_3d(c, g, f); });
    probe_cells<3>(cells, pb, m, emit);
  }
};

// Naive grid with cell side `cell`; emissions go through `emit(point, object)`.
template <class Pt, class Obj, class Emit>
void naive_core(const std::vector<Pt>& P, const std::vector<Obj>& objects, double cell, RunMetrics& m, Emit&& emit) {
  if (P.empty() || objects.empty()) return;
  const auto g = padded_grid(P, cell);
  const auto pb = bucket_points(P, g);
  for (std::uint32_t j = 0; j < objects.size(); ++j)
    NaiveTraits<Obj>::probe(objects[j], g, pb, m, [&](std::uint32_t i) { emit(i, j); });
}

}  // namespace detail

// eps-cell grid over the points; every object probes the cells it crosses and
// their neighbours.
template <class Pt, class Obj>
Report naive_grid_report(const std::vector<Pt>& P, const std::vector<Obj>& objects, double eps,
                         Mode mode = Mode::filtered) {
  detail::check_eps(eps);
  detail::Stopwatch sw;
  Report rep;
  rep.plans.push_back({eps, 1.0, P.empty() || objects.empty() ? Strategy::empty : Strategy::primal_only, false});
  detail::Collector col;
  detail::naive_core(P, objects, eps, rep.metrics, [&](std::uint32_t i, std::uint32_t j) { col.emit(i, j, 0); });
  detail::finalize(col, mode, eps, [&](std::uint32_t p, std::uint32_t o) { return object_distance(P[p], objects[o]); },
                   rep);
  rep.metrics.elapsed_ms = sw.ms();
  return rep;
}

// Lines: the naive grid in the dual plane when m <= n, on the primal side
// otherwise.
inline Report naive_duality_report(const std::vector<Point2>& P, const std::vector<Line2>& L, double eps,
                                   Mode mode = Mode::filtered) {
  detail::check_eps(eps);
  if (P.size() > L.size()) return naive_grid_report(P, L, eps, mode);
  detail::Stopwatch sw;
  Report rep;
  detail::Collector col;
  if (!P.empty() && !L.empty()) {
    const auto classes = normalize_slope_classes_2d(L);
    for (std::uint32_t k = 0; k < classes.size(); ++k) {
      const auto& cls = classes[k];
      if (cls.lines.empty()) continue;
      std::vector<Point2> pts(P.size());
      for (std::size_t i = 0; i < P.size(); ++i) pts[i] = rotate(P[i], cls.angle);
      const auto sim = unit_square_map(pts, 2.0 * eps);
      const double e = sim.scale * eps;
      std::vector<Point2> dpts;
      std::vector<std::uint32_t> ids;
      for (std::size_t j = 0; j < cls.lines.size(); ++j) {
        const Line2 l = sim.apply(cls.lines[j]);
        if (!detail::line_meets_unit_square(l)) continue;
        dpts.push_back({l.a, -l.b});
        ids.push_back(static_cast<std::uint32_t>(cls.indices[j]));
      }
      if (dpts.empty()) continue;
      std::vector<Line2> dlines;
      for (const auto& p : pts) {
        const Point2 q = sim.apply(p);
        dlines.push_back(Line2::slope_intercept(q.x, -q.y));
      }
      // vertical distance sqrt(2) e in the dual is within one cell of this side
      detail::naive_core(dpts, dlines, std::sqrt(2.0) * e, rep.metrics,
                         [&](std::uint32_t dl, std::uint32_t dp) { col.emit(dp, ids[dl], k); });
    }
  }
  rep.plans.push_back({1.0, eps, P.empty() || L.empty() ? Strategy::empty : Strategy::dual_only, true});
  detail::finalize(col, mode, eps, [&](std::uint32_t p, std::uint32_t o) { return dist_point_line_2d(P[p], L[o]); }, rep);
  rep.metrics.elapsed_ms = sw.ms();
  return rep;
}

inline Report naive_duality_report(const std::vector<Point3>& P, const std::vector<Plane3>& PL, double eps,
                                   Mode mode = Mode::filtered) {
  detail::check_eps(eps);
  if (P.size() > PL.size()) return naive_grid_report(P, PL, eps, mode);
  detail::Stopwatch sw;
  Report rep;
  detail::Collector col;
  if (!P.empty() && !PL.empty()) {
    std::vector<Point3> normals;
    for (const auto& pl : PL) normals.push_back(pl.normal());
    const auto classes = normalize_direction_classes_3d(normals, axis_diagonal_net(), Point3{0, 0, 1});
    for (std::uint32_t k = 0; k < classes.size(); ++k) {
      const auto& cls = classes[k];
      if (cls.indices.empty()) continue;
      std::vector<Point3> pts(P.size());
      for (std::size_t i = 0; i < P.size(); ++i) pts[i] = apply(cls.rotation, P[i]);
      const auto sim = unit_cube_map(pts, 2.0 * eps);
      const double e = sim.scale * eps;
      std::vector<Point3> dpts;
      std::vector<std::uint32_t> ids;
      for (auto j : cls.indices) {
        const Plane3 pl = sim.apply(transform(PL[j], cls.rotation));
        // plane must meet the unit cube
        const double lo = pl.c + std::min(0.0, pl.a) + std::min(0.0, pl.b);
        const double hi = pl.c + std::max(0.0, pl.a) + std::max(0.0, pl.b);
        if (hi < 0.0 || lo > 1.0) continue;
        dpts.push_back({pl.a, pl.b, -pl.c});
        ids.push_back(static_cast<std::uint32_t>(j));
      }
      if (dpts.empty()) continue;
      std::vector<Plane3> dplanes;
      for (const auto& p : pts) {
        const Point3 q = sim.apply(p);
        dplanes.push_back({q.x, q.y, -q.z});
      }
      detail::naive_core(dpts, dplanes, std::sqrt(2.0) * e, rep.metrics,
                         [&](std::uint32_t dl, std::uint32_t dp) { col.emit(dp, ids[dl], k); });
    }
  }
  rep.plans.push_back({1.0, eps, P.empty() || PL.empty() ? Strategy::empty : Strategy::dual_only, true});
  detail::finalize(col, mode, eps, [&](std::uint32_t p, std::uint32_t o) { return dist_point_plane_3d(P[p], PL[o]); },
                   rep);
  rep.metrics.elapsed_ms = sw.ms();
  return rep;
}

// Congruent pairs: circles go around whichever side is smaller.
inline Report naive_duality_congruent_2d(const std::vector<Point2>& P, const std::vector<Point2>& Q, double r,
                                         double eps, Mode mode = Mode::filtered) {
  detail::check_eps(eps);
  detail::Stopwatch sw;
  Report rep;
  detail::Collector col;
  const bool flip = P.size() < Q.size();
  if (flip) {
    detail::naive_core(Q, circles_around(P, r), eps, rep.metrics, [&](std::uint32_t q, std::uint32_t p) { col.emit(p, q, 0); });
  } else {
    detail::naive_core(P, circles_around(Q, r), eps, rep.metrics, [&](std::uint32_t p, std::uint32_t q) { col.emit(p, q, 0); });
  }
  rep.plans.push_back({eps, 1.0, P.empty() || Q.empty() ? Strategy::empty : Strategy::primal_only, flip});
  detail::finalize(col, mode, eps,
                   [&](std::uint32_t p, std::uint32_t q) { return dist_point_circle_2d(P[p], Circle2{Q[q], r}); }, rep);
  rep.metrics.elapsed_ms = sw.ms();
  return rep;
}

inline Report naive_duality_congruent_3d(const std::vector<Point3>& P, const std::vector<Point3>& Q, double r,
                                         double eps, Mode mode = Mode::filtered) {
  detail::check_eps(eps);
  detail::Stopwatch sw;
  Report rep;
  detail::Collector col;
  const bool flip = P.size() < Q.size();
  if (flip) {
    detail::naive_core(Q, spheres_around(P, r), eps, rep.metrics, [&](std::uint32_t q, std::uint32_t p) { col.emit(p, q, 0); });
  } else {
    detail::naive_core(P, spheres_around(Q, r), eps, rep.metrics, [&](std::uint32_t p, std::uint32_t q) { col.emit(p, q, 0); });
  }
  rep.plans.push_back({eps, 1.0, P.empty() || Q.empty() ? Strategy::empty : Strategy::primal_only, flip});
  detail::finalize(col, mode, eps,
                   [&](std::uint32_t p, std::uint32_t q) { return dist_point_sphere_3d(P[p], Sphere3{Q[q], r}); }, rep);
  rep.metrics.elapsed_ms = sw.ms();
  return rep;
}

}  // namespace incidence
