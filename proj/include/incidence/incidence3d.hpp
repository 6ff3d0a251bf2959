// SPDX-License-Identifier: Apache-2.0
//
// Spatial algorithms: points vs planes, congruent pairs through a net of cap
// directions, points vs lines through 4D duality, and points vs congruent
// circles through torus sectors and slabs.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "geom.hpp"
#include "grid.hpp"
#include "incidence2d.hpp"
#include "plan.hpp"
#include "report.hpp"

namespace incidence {

namespace detail {

inline Box<3> padded_box(const std::vector<Point3>& pts, double pad) {
  Point3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  return {{lo.x - pad, lo.y - pad, lo.z - pad}, {hi.x + pad, hi.y + pad, hi.z + pad}};
}

inline std::int64_t reach_for(double e, double d1) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::sqrt(2.0) * e / d1 - 1e-12)));
}

inline void reject_bipartite(Mode mode) {
  if (mode == Mode::bipartite) throw ParameterError("bipartite mode is only offered for planar points vs lines");
}

inline PackedBuckets bucket_cells(const std::vector<Point3>& pts, const UniformGrid<3>& g) {
  PackedBuckets pb;
  for (std::uint32_t i = 0; i < pts.size(); ++i) {
    const auto k = g.locate({pts[i].x, pts[i].y, pts[i].z}, 1e-6);
    pb.add(pack_key(k[0], k[1], k[2]), i);
  }
  pb.finalize();
  return pb;
}

// Points vs planes z = a x + b y + c with |a|, |b| <= 1, by vertical
// distance. Every pair within sqrt(2) e is reported; no pair beyond
// (2 + sqrt(2) + 3) e is.
inline void vertical_core_3d(const std::vector<Point3>& pts, const std::vector<Plane3>& planes, double e,
                             const DeltaPlan& plan, PairSink& sink, RunMetrics& m) {
  if (pts.empty() || planes.empty()) return;
  const double d1 = plan.delta1, d2 = plan.delta2;
  const double slack = std::sqrt(2.0) * e;
  const auto reach = reach_for(e, d1);
  const auto g = build_grid<3>(padded_box(pts, 2.0 * e), {d1, d1, d1});
  const auto pb = bucket_cells(pts, g);

  std::vector<std::pair<std::uint64_t, std::uint32_t>> crossings;
  for (std::uint32_t j = 0; j < planes.size(); ++j)
    for_each_cell_crossed_by_plane_3d(planes[j], g, [&](const CellKey<3>& k) {
      crossings.emplace_back(pack_key(k[0], k[1], k[2]), j);
    });
  m.cells_visited += crossings.size();
  std::sort(crossings.begin(), crossings.end());

  const auto dg = build_grid<3>({{-1.0, -1.0, -1.5 * d1}, {1.0, 1.0, 1.5 * d1}}, {2.0 * d2, 2.0 * d2, 3.0 * d1 * d2});
  PackedBuckets db;
  std::vector<std::uint32_t> ps, ls;
  for (std::size_t s = 0; s < crossings.size();) {
    std::size_t t = s;
    const std::uint64_t key = crossings[s].first;
    ls.clear();
    while (t < crossings.size() && crossings[t].first == key) ls.push_back(crossings[t++].second);
    s = t;
    const auto ci = unpack_index(key, 0), cj = unpack_index(key, 1), ck = unpack_index(key, 2);
    ps.clear();
    for (auto dk = -reach; dk <= reach; ++dk)
      if (ck + dk >= 0 && ck + dk < g.counts[2])
        pb.for_each_in(pack_key(ci, cj, ck + dk), [&](std::uint32_t p) { ps.push_back(p); });
    if (ps.empty()) continue;
    if (plan.strategy == Strategy::primal_only) {
      for (auto p : ps)
        for (auto l : ls) sink.emit(p, l);
      continue;
    }
    const auto o = g.center({ci, cj, ck});
    db.clear();
    for (auto l : ls) {
      const Plane3& pl = planes[l];
      const double cloc = pl.c + pl.a * o[0] + pl.b * o[1] - o[2];
      db.add(pack_key(dg.axis_index(0, pl.a), dg.axis_index(1, pl.b), dg.axis_index(2, -cloc)), l);
    }
    db.finalize();
    for (auto p : ps) {
      // dual plane Z = xi X + eta Y - zeta
      const double xi = pts[p].x - o[0], eta = pts[p].y - o[1], zeta = pts[p].z - o[2];
      for (std::int64_t ix = 0; ix < dg.counts[0]; ++ix) {
        const double ax0 = xi * dg.lo(0, ix), ax1 = xi * dg.hi(0, ix);
        for (std::int64_t iy = 0; iy < dg.counts[1]; ++iy) {
          const double by0 = eta * dg.lo(1, iy), by1 = eta * dg.hi(1, iy);
          const double zlo = std::min(ax0, ax1) + std::min(by0, by1) - zeta;
          const double zhi = std::max(ax0, ax1) + std::max(by0, by1) - zeta;
          auto [k0, k1] = dg.closed_range(2, zlo - slack, zhi + slack);
          if (k0 > k1) continue;
          m.cells_visited += static_cast<std::uint64_t>(k1 - k0 + 1);
          db.for_each_in_range(pack_key(ix, iy, k0), pack_key(ix, iy, k1), [&](std::uint32_t l) { sink.emit(p, l); });
        }
      }
    }
  }
}

inline bool plane_meets_unit_cube(const Plane3& pl) {
  const double lo = pl.c + std::min(0.0, pl.a) + std::min(0.0, pl.b);
  const double hi = pl.c + std::max(0.0, pl.a) + std::max(0.0, pl.b);
  return hi >= 0.0 && lo <= 1.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// points vs planes

inline Report report_point_plane_3d(const std::vector<Point3>& P, const std::vector<Plane3>& PL, double eps,
                                    Mode mode = Mode::filtered) {
  detail::check_eps(eps);
  detail::reject_bipartite(mode);
  detail::Stopwatch sw;
  Report rep;
  if (P.empty() || PL.empty()) {
    rep.plans.push_back({});
    return rep;
  }
  detail::Collector col;
  std::vector<Point3> normals;
  normals.reserve(PL.size());
  for (const auto& pl : PL) normals.push_back(pl.normal());
  const auto classes = normalize_direction_classes_3d(normals, axis_diagonal_net(), Point3{0, 0, 1});
  std::vector<std::uint32_t> all_points(P.size());
  for (std::uint32_t i = 0; i < P.size(); ++i) all_points[i] = i;

  for (std::uint32_t k = 0; k < classes.size(); ++k) {
    const auto& cls = classes[k];
    if (cls.indices.empty()) continue;
    std::vector<Point3> pts(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) pts[i] = incidence::apply(cls.rotation, P[i]);
    const auto sim = unit_cube_map(pts, 2.0 * eps);
    const double e = sim.scale * eps;
    for (auto& p : pts) p = sim.apply(p);
    std::vector<Plane3> planes;
    std::vector<std::uint32_t> ids;
    for (auto j : cls.indices) {
      planes.push_back(sim.apply(transform(PL[j], cls.rotation)));
      ids.push_back(static_cast<std::uint32_t>(j));
    }
    const DeltaPlan plan = plan_deltas(pts.size(), planes.size(), e, {ProblemKind::point_plane_3d});
    if (plan.strategy != Strategy::roles_swapped) {
      rep.plans.push_back(plan);
      detail::PairSink sink{&col, nullptr, &all_points, &ids, false, k};
      detail::vertical_core_3d(pts, planes, e, plan, sink, rep.metrics);
      continue;
    }
    // plane z = a x + b y + c becomes the point (a, b, -c); point (x, y, z)
    // becomes the plane Z = x X + y Y - z
    std::vector<Point3> dpts;
    std::vector<std::uint32_t> dids;
    for (std::size_t j = 0; j < planes.size(); ++j) {
      if (!detail::plane_meets_unit_cube(planes[j])) continue;
      dpts.push_back({planes[j].a, planes[j].b, -planes[j].c});
      dids.push_back(ids[j]);
    }
    if (dpts.empty()) continue;
    const auto dsim = unit_cube_map(dpts, 2.0 * e);
    const double e2 = dsim.scale * e;
    for (auto& p : dpts) p = dsim.apply(p);
    std::vector<Plane3> dplanes;
    dplanes.reserve(pts.size());
    for (const auto& p : pts) dplanes.push_back(dsim.apply(Plane3{p.x, p.y, -p.z}));
    const DeltaPlan inner = plan_deltas(dpts.size(), dplanes.size(), e2, {ProblemKind::point_plane_3d});
    DeltaPlan shown = inner;
    shown.strategy = Strategy::roles_swapped;
    shown.swapped = true;
    rep.plans.push_back(shown);
    detail::PairSink sink{&col, nullptr, &dids, &all_points, true, k + 13};
    detail::vertical_core_3d(dpts, dplanes, e2, inner, sink, rep.metrics);
  }
  detail::finalize(col, mode, eps, [&](std::uint32_t p, std::uint32_t o) { return dist_point_plane_3d(P[p], PL[o]); },
                   rep);
  rep.metrics.elapsed_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// latitude-band direction nets

struct BandCell {
  double phi0 = 0.0, phi1 = 0.0;  // polar angle from +z
  double lam0 = 0.0, lam1 = 0.0;  // azimuth
  int polar = 0;                  // +1 north cap, -1 south cap
};

struct CapDirectionNet {
  std::vector<Point3> directions;
  double opening_half_angle = 0.0;
  std::vector<BandCell> cells;
  std::vector<double> band_edges;       // polar-angle edges, one more than bands
  std::vector<std::size_t> band_first;  // first cell of each band
  std::vector<std::size_t> band_cells;  // cells per band
  bool hemisphere = false;              // unoriented: v and -v share a cell

  std::size_t size() const { return directions.size(); }

  std::size_t locate(Point3 v) const {
    v = normalized(v);
    if (hemisphere && v.z < 0.0) v = -1.0 * v;
    const double phi = std::acos(std::clamp(v.z, -1.0, 1.0));
    auto it = std::upper_bound(band_edges.begin(), band_edges.end(), phi);
    auto b = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - band_edges.begin()) - 1));
    b = std::min(b, band_first.size() - 1);
    const std::size_t n = band_cells[b];
    if (n == 1) return band_first[b];
    double lam = std::atan2(v.y, v.x);
    if (lam < 0.0) lam += 2.0 * std::numbers::pi;
    auto j = static_cast<std::size_t>(std::floor(lam / (2.0 * std::numbers::pi / static_cast<double>(n))));
    return band_first[b] + std::min(j, n - 1);
  }
};

namespace detail {

inline Point3 spherical(double phi, double lam) {
  return {std::sin(phi) * std::cos(lam), std::sin(phi) * std::sin(lam), std::cos(phi)};
}

// Polar cap of radius h/2, bands of height about h, azimuth steps of about w
// at the widest latitude of each band.
inline CapDirectionNet build_band_net(double h, double w, bool hemisphere) {
  const double pi = std::numbers::pi;
  CapDirectionNet net;
  net.hemisphere = hemisphere;
  const double hc = 0.5 * h;
  const double end = hemisphere ? 0.5 * pi : pi - hc;
  const auto nb = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((end - hc) / h - 1e-9)));
  const double hb = (end - hc) / static_cast<double>(nb);
  auto add_band = [&](double p0, double p1, std::size_t n, int polar) {
    net.band_first.push_back(net.cells.size());
    net.band_cells.push_back(n);
    for (std::size_t j = 0; j < n; ++j) {
      BandCell c{p0, p1, 2.0 * pi * static_cast<double>(j) / static_cast<double>(n),
                 2.0 * pi * static_cast<double>(j + 1) / static_cast<double>(n), polar};
      net.cells.push_back(c);
      if (polar != 0) net.directions.push_back({0.0, 0.0, static_cast<double>(polar)});
      else net.directions.push_back(spherical(0.5 * (p0 + p1), 0.5 * (c.lam0 + c.lam1)));
    }
  };
  net.band_edges.push_back(0.0);
  add_band(0.0, hc, 1, 1);
  net.opening_half_angle = hc;
  for (std::int64_t b = 0; b < nb; ++b) {
    const double p0 = hc + hb * static_cast<double>(b), p1 = b + 1 == nb ? end : p0 + hb;
    net.band_edges.push_back(p0);
    const double smax = (p0 <= 0.5 * pi && p1 >= 0.5 * pi) ? 1.0 : std::max(std::sin(p0), std::sin(p1));
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 * pi * smax / w - 1e-9)));
    add_band(p0, p1, n, 0);
    // farthest point of a cell from its centre is a corner
    const double pc = 0.5 * (p0 + p1), dl = pi / static_cast<double>(n);
    const Point3 u = spherical(pc, 0.0);
    for (double p : {p0, p1})
      net.opening_half_angle =
          std::max(net.opening_half_angle, std::acos(std::clamp(dot(u, spherical(p, dl)), -1.0, 1.0)));
  }
  net.band_edges.push_back(end);
  if (!hemisphere) {
    add_band(end, pi, 1, -1);
    net.band_edges.push_back(pi);
  }
  return net;
}

}  // namespace detail

inline CapDirectionNet build_cap_directions(double eps) {
  if (!(eps > 0.0 && eps <= 0.25)) throw ParameterError("eps must lie in (0, 1/4]");
  // cell corners sit about h/sqrt(2) from the centre direction
  const double h = std::sqrt(1.9 * eps);
  return detail::build_band_net(h, h, false);
}

// Unoriented axis classes of half-angle at most pi/12; smallest band net
// found over a sweep of band height and azimuth step.
inline const CapDirectionNet& axis_class_net() {
  static const CapDirectionNet net = [] {
    const double theta0 = std::numbers::pi / 12.0;
    CapDirectionNet best;
    for (int a = 10; a <= 50; ++a)
      for (int b = 10; b <= 60; ++b) {
        auto n = detail::build_band_net(0.05 * a * theta0, 0.05 * b * theta0, true);
        if (n.opening_half_angle <= theta0 && (best.size() == 0 || n.size() < best.size())) best = std::move(n);
      }
    return best;
  }();
  return net;
}

// Box enclosing {rho v : v in the cell, rho in [r - eps, r + eps]} in the
// frame whose rows are returned in `frame` (last row is the cell direction).
struct CapBox {
  Mat3 frame = identity3();
  Point3 lo, hi;
};

inline CapBox cap_box(const BandCell& c, double r, double eps) {
  const double rmin = r - eps, rmax = r + eps;
  CapBox b;
  if (c.polar != 0) {
    const double s = static_cast<double>(c.polar);
    b.frame = {{{1, 0, 0}, {0, s, 0}, {0, 0, s}}};
    const double cap = c.polar > 0 ? c.phi1 : std::numbers::pi - c.phi0;
    const double lat = rmax * std::sin(cap);
    b.lo = {-lat, -lat, rmin * std::cos(cap)};
    b.hi = {lat, lat, rmax};
    return b;
  }
  const double pc = 0.5 * (c.phi0 + c.phi1), lc = 0.5 * (c.lam0 + c.lam1), dl = 0.5 * (c.lam1 - c.lam0);
  const Point3 el{-std::sin(lc), std::cos(lc), 0.0};
  const Point3 ep{std::cos(pc) * std::cos(lc), std::cos(pc) * std::sin(lc), -std::sin(pc)};
  const Point3 u = detail::spherical(pc, lc);
  b.frame = {{{el.x, el.y, el.z}, {ep.x, ep.y, ep.z}, {u.x, u.y, u.z}}};
  // f = A(t) sin(phi) + B cos(phi), t the azimuth offset; extremes sit at the
  // listed t and at phi in {phi0, phi1} or a critical angle
  const double pi = std::numbers::pi;
  std::vector<double> ts{-dl, dl, 0.0};
  for (double t : {0.5 * pi, -0.5 * pi, pi, -pi})
    if (std::abs(t) <= dl) ts.push_back(t);
  auto extent = [&](auto A, double B, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (double t : ts) {
      const double a = A(t);
      std::vector<double> phis{c.phi0, c.phi1};
      const double crit = std::atan2(a, B);
      for (int k = -2; k <= 2; ++k) {
        const double p = crit + k * pi;
        if (p > c.phi0 && p < c.phi1) phis.push_back(p);
      }
      for (double p : phis) {
        const double f = a * std::sin(p) + B * std::cos(p);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
    }
    const double l = lo, h = hi;
    lo = std::min(l * rmin, l * rmax);
    hi = std::max(h * rmin, h * rmax);
    const double pad = 1e-12 * rmax;
    lo -= pad;
    hi += pad;
  };
  extent([](double t) { return std::sin(t); }, 0.0, b.lo.x, b.hi.x);
  extent([&](double t) { return std::cos(pc) * std::cos(t); }, -std::sin(pc), b.lo.y, b.hi.y);
  extent([&](double t) { return std::sin(pc) * std::cos(t); }, std::cos(pc), b.lo.z, b.hi.z);
  return b;
}

// ---------------------------------------------------------------------------
// congruent pairs in space

inline Report report_congruent_pairs_3d(const std::vector<Point3>& P, const std::vector<Point3>& Q, double r,
                                        double eps, Mode mode = Mode::filtered) {
  if (!(eps > 0.0 && eps <= 0.25)) throw ParameterError("eps must lie in (0, 1/4]");
  if (!(r > 0.0 && r <= 0.5)) throw ParameterError("r must lie in (0, 1/2]");
  if (!(eps < r)) throw ParameterError("eps must be smaller than r");
  detail::reject_bipartite(mode);
  detail::Stopwatch sw;
  Report rep;
  const auto net = build_cap_directions(eps);
  rep.extras["directions"] = static_cast<double>(net.size());
  rep.extras["opening_half_angle"] = net.opening_half_angle;
  if (P.empty() || Q.empty()) {
    rep.plans.push_back({});
    return rep;
  }
  detail::Collector col;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keys(P.size());
  auto fl = [](double v) { return static_cast<std::int64_t>(std::floor(v)); };
  double max_long = 0.0, max_short = 0.0;
  for (std::uint32_t k = 0; k < net.size(); ++k) {
    const CapBox box = cap_box(net.cells[k], r, eps);
    const Point3 L = box.hi - box.lo;
    max_long = std::max({max_long, L.x, L.y});
    max_short = std::max(max_short, L.z);
    for (std::uint32_t i = 0; i < P.size(); ++i) {
      const Point3 p = incidence::apply(box.frame, P[i]);
      keys[i] = {pack_key(fl(p.x / L.x), fl(p.y / L.y), fl(p.z / L.z)), i};
    }
    std::sort(keys.begin(), keys.end());
    for (std::uint32_t j = 0; j < Q.size(); ++j) {
      const Point3 q = incidence::apply(box.frame, Q[j]);
      const auto x0 = fl((q.x + box.lo.x) / L.x), x1 = fl((q.x + box.hi.x) / L.x);
      const auto y0 = fl((q.y + box.lo.y) / L.y), y1 = fl((q.y + box.hi.y) / L.y);
      const auto z0 = fl((q.z + box.lo.z) / L.z), z1 = fl((q.z + box.hi.z) / L.z);
      for (auto x = x0; x <= x1; ++x)
        for (auto y = y0; y <= y1; ++y)
          for (auto z = z0; z <= z1; ++z) {
            ++rep.metrics.cells_visited;
            const auto key = pack_key(x, y, z);
            auto it = std::lower_bound(keys.begin(), keys.end(), std::pair{key, std::uint32_t{0}});
            for (; it != keys.end() && it->first == key; ++it) col.emit(it->second, j, k);
          }
    }
  }
  rep.plans.push_back({max_long, max_short, Strategy::primal_only, false});
  rep.extras["box_long_side"] = max_long;
  rep.extras["box_short_side"] = max_short;
  detail::finalize(col, mode, eps,
                   [&](std::uint32_t p, std::uint32_t q) { return dist_point_sphere_3d(P[p], Sphere3{Q[q], r}); }, rep);
  rep.metrics.elapsed_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// points vs lines in space

namespace detail {

inline std::uint64_t pack4(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return (static_cast<std::uint64_t>(a) << 48) | (static_cast<std::uint64_t>(b) << 32) |
         (static_cast<std::uint64_t>(c) << 16) | static_cast<std::uint64_t>(d);
}

// Points vs lines y = a x + b, z = c x + d with |a|, |c| <= 1, by distance in
// the plane x = const. Every pair within sqrt(2) e is reported; none beyond
// sqrt(2) (5 + sqrt(2)) e. emit(point, line) takes core indices.
template <class Emit>
void line_core_3d(const std::vector<Point3>& pts, const std::vector<Line3>& lines, double e, const DeltaPlan& plan,
                  Emit&& emit, RunMetrics& m) {
  if (pts.empty() || lines.empty()) return;
  const double d1 = plan.delta1, d2 = plan.delta2;
  const double slack = std::sqrt(2.0) * e;
  const auto reach = reach_for(e, d1);
  const auto g = build_grid<3>(padded_box(pts, 2.0 * e), {d1, d1, d1});
  const auto pb = bucket_cells(pts, g);

  std::vector<std::pair<std::uint64_t, std::uint32_t>> crossings;
  for (std::uint32_t j = 0; j < lines.size(); ++j)
    for_each_cell_crossed_by_line_3d(lines[j], g, [&](const CellKey<3>& k) {
      crossings.emplace_back(pack_key(k[0], k[1], k[2]), j);
    });
  m.cells_visited += crossings.size();
  std::sort(crossings.begin(), crossings.end());

  // axis order (a, b, c, d); intercepts relative to the cube's low corner
  const auto dg = build_grid<4>({{-1.0, -d1, -1.0, -d1}, {1.0, 2.0 * d1, 1.0, 2.0 * d1}},
                                {2.0 * d2, 3.0 * d1 * d2, 2.0 * d2, 3.0 * d1 * d2});
  for (auto c : dg.counts)
    if (c > 65535) throw ParameterError("dual grid too fine");
  PackedBuckets db;
  std::vector<std::uint32_t> ps, ls;
  std::vector<std::pair<std::int64_t, std::int64_t>> brange(static_cast<std::size_t>(dg.counts[0])),
      drange(static_cast<std::size_t>(dg.counts[2]));
  for (std::size_t s = 0; s < crossings.size();) {
    std::size_t t = s;
    const std::uint64_t key = crossings[s].first;
    ls.clear();
    while (t < crossings.size() && crossings[t].first == key) ls.push_back(crossings[t++].second);
    s = t;
    const auto ci = unpack_index(key, 0), cj = unpack_index(key, 1), ck = unpack_index(key, 2);
    ps.clear();
    for (auto dy = -reach; dy <= reach; ++dy)
      for (auto dz = -reach; dz <= reach; ++dz)
        if (g.valid({ci, cj + dy, ck + dz}))
          pb.for_each_in(pack_key(ci, cj + dy, ck + dz), [&](std::uint32_t p) { ps.push_back(p); });
    if (ps.empty()) continue;
    if (plan.strategy == Strategy::primal_only) {
      for (auto p : ps)
        for (auto l : ls) emit(p, l);
      continue;
    }
    const Point3 o{g.lo(0, ci), g.lo(1, cj), g.lo(2, ck)};
    db.clear();
    for (auto l : ls) {
      const Line3& L = lines[l];
      const double b = L.b + L.a * o.x - o.y, d = L.d + L.c * o.x - o.z;
      db.add(pack4(dg.axis_index(0, L.a), dg.axis_index(2, L.c), dg.axis_index(1, b), dg.axis_index(3, d)), l);
    }
    db.finalize();
    for (auto p : ps) {
      // dual 2-plane {a xi + b = eta, c xi + d = zeta}
      const double xi = pts[p].x - o.x, eta = pts[p].y - o.y, zeta = pts[p].z - o.z;
      for (std::int64_t ia = 0; ia < dg.counts[0]; ++ia) {
        auto [b0, b1] = dual_intercept_range(xi, eta, dg.lo(0, ia), dg.hi(0, ia));
        brange[ia] = dg.closed_range(1, b0 - slack, b1 + slack);
      }
      for (std::int64_t ic = 0; ic < dg.counts[2]; ++ic) {
        auto [e0, e1] = dual_intercept_range(xi, zeta, dg.lo(2, ic), dg.hi(2, ic));
        drange[ic] = dg.closed_range(3, e0 - slack, e1 + slack);
      }
      for (std::int64_t ia = 0; ia < dg.counts[0]; ++ia) {
        const auto [ib0, ib1] = brange[ia];
        if (ib0 > ib1) continue;
        for (std::int64_t ic = 0; ic < dg.counts[2]; ++ic) {
          const auto [id0, id1] = drange[ic];
          if (id0 > id1) continue;
          m.cells_visited += static_cast<std::uint64_t>((ib1 - ib0 + 1) * (id1 - id0 + 1));
          for (auto ib = ib0; ib <= ib1; ++ib)
            db.for_each_in_range(pack4(ia, ic, ib, id0), pack4(ia, ic, ib, id1), [&](std::uint32_t l) { emit(p, l); });
        }
      }
    }
  }
}

}  // namespace detail

inline Report report_point_line_3d(const std::vector<Point3>& P, const std::vector<Line3>& L, double eps,
                                   Mode mode = Mode::filtered) {
  detail::check_eps(eps);
  detail::reject_bipartite(mode);
  detail::Stopwatch sw;
  Report rep;
  if (P.empty() || L.empty()) {
    rep.plans.push_back({});
    return rep;
  }
  detail::Collector col;
  std::vector<Point3> dirs;
  dirs.reserve(L.size());
  for (const auto& l : L) dirs.push_back(l.direction());
  const auto classes = normalize_direction_classes_3d(dirs, axis_diagonal_net(), Point3{1, 0, 0});
  for (std::uint32_t k = 0; k < classes.size(); ++k) {
    const auto& cls = classes[k];
    if (cls.indices.empty()) continue;
    std::vector<Point3> pts(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) pts[i] = incidence::apply(cls.rotation, P[i]);
    const auto sim = unit_cube_map(pts, 2.0 * eps);
    const double e = sim.scale * eps;
    for (auto& p : pts) p = sim.apply(p);
    std::vector<Line3> lines;
    for (auto j : cls.indices) lines.push_back(sim.apply(transform(L[j], cls.rotation)));
    const DeltaPlan plan = plan_deltas(pts.size(), lines.size(), e, {ProblemKind::point_line_3d});
    rep.plans.push_back(plan);
    detail::line_core_3d(
        pts, lines, e, plan,
        [&](std::uint32_t p, std::uint32_t l) { col.emit(p, static_cast<std::uint32_t>(cls.indices[l]), k); },
        rep.metrics);
  }
  detail::finalize(col, mode, eps, [&](std::uint32_t p, std::uint32_t o) { return dist_point_line_3d(P[p], L[o]); },
                   rep);
  rep.metrics.elapsed_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// points vs congruent circles in space

struct TorusSector {
  Circle3 circle;
  std::int64_t sector_index = 0;
  Point3 chord_direction;
  Point3 axis_a, axis_b;  // enclosing cylinder axis segment
  double radius = 0.0;
};

struct SectorLayout {
  std::int64_t sectors = 0;
  double theta = 0.0;       // angle of one sector
  double slab_width = 0.0;  // chord of one sector
  double half_length = 0.0;
  double axis_offset = 0.0;  // cylinder axis at y = -axis_offset in the sector frame
  double cyl_radius = 0.0;
};

inline SectorLayout sector_layout(double r, double eps) {
  SectorLayout s;
  s.sectors = static_cast<std::int64_t>(std::ceil(std::numbers::pi / std::sqrt(eps)));
  s.theta = 2.0 * std::numbers::pi / static_cast<double>(s.sectors);
  s.slab_width = 2.0 * r * std::sin(0.5 * s.theta);
  s.half_length = (r + eps) * std::sin(0.5 * s.theta);
  s.axis_offset = 0.5 * r * (1.0 + std::cos(0.5 * s.theta));
  s.cyl_radius = 1.5 * eps;
  return s;
}

// Frame of sector j of a circle: its midpoint direction goes to -y and the
// chord to +x. `to_circle` maps the reference circle (z axis) onto the
// circle's orientation.
inline Mat3 sector_frame(const SectorLayout& s, std::int64_t j) {
  const double mid = (static_cast<double>(j) + 0.5) * s.theta;
  return rotation_about({0, 0, 1}, -(mid + 0.5 * std::numbers::pi));
}

inline TorusSector torus_sector(const Circle3& c, const SectorLayout& s, std::int64_t j) {
  const Point3 n = normalized(c.axis);
  const Mat3 to_circle = rotation_between({0, 0, 1}, n);
  const Mat3 back = transpose(sector_frame(s, j));
  TorusSector t;
  t.circle = c;
  t.sector_index = j;
  t.axis_a = c.center + incidence::apply(to_circle, incidence::apply(back, Point3{-s.half_length, -s.axis_offset, 0.0}));
  t.axis_b = c.center + incidence::apply(to_circle, incidence::apply(back, Point3{s.half_length, -s.axis_offset, 0.0}));
  t.chord_direction = normalized(t.axis_b - t.axis_a);
  t.radius = s.cyl_radius;
  return t;
}

namespace detail {

inline double dist_point_segment(Point3 p, Point3 a, Point3 b) {
  const Point3 ab = b - a;
  const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
  return norm(p - (a + t * ab));
}

}  // namespace detail

inline Report report_point_circle_3d(const std::vector<Point3>& P, const std::vector<Circle3>& C, double r, double eps,
                                     Mode mode = Mode::filtered) {
  detail::check_eps(eps);
  detail::reject_bipartite(mode);
  if (!(r > 0.0 && r <= 0.5)) throw ParameterError("r must lie in (0, 1/2]");
  if (!(eps < r / 10.0)) throw ParameterError("need eps < r/10");
  for (const auto& c : C) {
    if (std::abs(c.radius - r) > 1e-9 * r) throw ParameterError("circles must share radius r");
    if (!(norm(c.axis) > 0.0)) throw ParameterError("circle axis must be nonzero");
  }
  detail::Stopwatch sw;
  Report rep;
  if (P.empty() || C.empty()) {
    rep.plans.push_back({});
    return rep;
  }
  const auto& net = axis_class_net();
  const auto lay = sector_layout(r, eps);
  const double ep = lay.cyl_radius;
  const double qstar_r = 8.0 * std::sqrt(2.0) * eps;
  std::vector<std::vector<std::uint32_t>> members(net.size());
  for (std::uint32_t j = 0; j < C.size(); ++j) members[net.locate(C[j].axis)].push_back(j);

  detail::Collector col;
  auto& m = rep.metrics;
  double core_calls = 0.0, core_candidates = 0.0, qstar_violations = 0.0, classes_used = 0.0;
  std::vector<Point3> cls_pts(P.size()), sec_pts(P.size());
  std::vector<std::pair<std::int64_t, std::uint32_t>> pslab, cslab;
  std::vector<Point3> spts;
  std::vector<std::uint32_t> sids, cids;
  std::vector<Line3> slines;
  std::vector<std::array<Point3, 2>> segs;
  std::vector<Line3> axes;
  auto fl = [](double v) { return static_cast<std::int64_t>(std::floor(v)); };

  for (std::size_t k = 0; k < net.size(); ++k) {
    if (members[k].empty()) continue;
    ++classes_used;
    const Mat3 rk = rotation_between(net.directions[k], {0, 0, 1});
    for (std::size_t i = 0; i < P.size(); ++i) cls_pts[i] = incidence::apply(rk, P[i]);
    struct Local {
      Point3 center;
      Mat3 to_circle;
    };
    std::vector<Local> loc;
    for (auto j : members[k]) {
      Point3 n = normalized(incidence::apply(rk, C[j].axis));
      if (n.z < 0.0) n = -1.0 * n;
      loc.push_back({incidence::apply(rk, C[j].center), rotation_between({0, 0, 1}, n)});
    }
    for (std::int64_t s = 0; s < lay.sectors; ++s) {
      const Mat3 F = sector_frame(lay, s), Fi = transpose(F);
      const Point3 A0 = incidence::apply(Fi, Point3{-lay.half_length, -lay.axis_offset, 0.0});
      const Point3 B0 = incidence::apply(Fi, Point3{lay.half_length, -lay.axis_offset, 0.0});
      pslab.clear();
      for (std::uint32_t i = 0; i < P.size(); ++i) {
        sec_pts[i] = incidence::apply(F, cls_pts[i]);
        pslab.emplace_back(fl(sec_pts[i].x / lay.slab_width), i);
      }
      std::sort(pslab.begin(), pslab.end());
      cslab.clear();
      segs.resize(loc.size());
      axes.resize(loc.size());
      for (std::uint32_t c = 0; c < loc.size(); ++c) {
        const Point3 a = incidence::apply(F, loc[c].center + incidence::apply(loc[c].to_circle, A0));
        const Point3 b = incidence::apply(F, loc[c].center + incidence::apply(loc[c].to_circle, B0));
        segs[c] = {a, b};
        const Point3 d = b - a;
        axes[c] = Line3::from_point_direction(a, d);
        const double dx = std::abs(d.x) / norm(d);
        const double xe = ep * std::sqrt(std::max(0.0, 1.0 - dx * dx));
        const auto s0 = fl((std::min(a.x, b.x) - xe) / lay.slab_width);
        const auto s1 = fl((std::max(a.x, b.x) + xe) / lay.slab_width);
        for (auto t = s0; t <= s1; ++t) cslab.emplace_back(t, c);
      }
      std::sort(cslab.begin(), cslab.end());
      std::size_t pi = 0;
      for (std::size_t ci = 0; ci < cslab.size();) {
        const auto slab = cslab[ci].first;
        std::size_t cj = ci;
        while (cj < cslab.size() && cslab[cj].first == slab) ++cj;
        while (pi < pslab.size() && pslab[pi].first < slab) ++pi;
        std::size_t pj = pi;
        while (pj < pslab.size() && pslab[pj].first == slab) ++pj;
        if (pj > pi) {
          spts.clear();
          sids.clear();
          for (auto u = pi; u < pj; ++u) {
            spts.push_back(sec_pts[pslab[u].second]);
            sids.push_back(pslab[u].second);
          }
          const auto sim = unit_cube_map(spts, 2.0 * ep);
          const double e = sim.scale * ep;
          for (auto& p : spts) p = sim.apply(p);
          slines.clear();
          cids.clear();
          for (auto u = ci; u < cj; ++u) {
            slines.push_back(sim.apply(axes[cslab[u].second]));
            cids.push_back(cslab[u].second);
          }
          const DeltaPlan plan = plan_deltas(spts.size(), slines.size(), e, {ProblemKind::point_line_3d});
          ++core_calls;
          detail::line_core_3d(
              spts, slines, e, plan,
              [&](std::uint32_t p, std::uint32_t l) {
                const std::uint32_t c = cids[l];
                const Point3 x = sec_pts[sids[p]];
                ++core_candidates;
                // the slab run keeps only its own filtered output
                if (dist_point_line_3d(x, axes[c]) > ep) return;
                const auto& sg = segs[c];
                // stretched cylinder: axis tripled about its midpoint
                const Point3 mid = 0.5 * (sg[0] + sg[1]), half = 1.5 * (sg[1] - sg[0]);
                if (detail::dist_point_segment(x, mid - half, mid + half) > qstar_r) ++qstar_violations;
                col.emit(sids[p], members[k][c], static_cast<std::uint32_t>(s));
              },
              m);
        }
        ci = cj;
        pi = pj;
      }
    }
  }
  rep.plans.push_back({lay.slab_width, ep, Strategy::primal_dual, false});
  rep.extras["sectors"] = static_cast<double>(lay.sectors);
  rep.extras["axis_classes"] = classes_used;
  rep.extras["core_calls"] = core_calls;
  rep.extras["core_candidates"] = core_candidates;
  rep.extras["qstar_violations"] = qstar_violations;
  detail::finalize(col, mode, eps, [&](std::uint32_t p, std::uint32_t c) { return dist_point_circle_3d(P[p], C[c]); },
                   rep);
  m.elapsed_ms = sw.ms();
  return rep;
}

}  // namespace incidence
