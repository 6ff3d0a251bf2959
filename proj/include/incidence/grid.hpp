// SPDX-License-Identifier: Apache-2.0
//
// Uniform grids in 2/3/4 dimensions, sparse buckets, and closed-cell crossing
// enumeration for the curves and surfaces used by the primal and dual stages.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "geom.hpp"

namespace incidence {

template <std::size_t D>
using CellKey = std::array<std::int64_t, D>;

template <std::size_t D>
struct CellKeyHash {
  std::size_t operator()(const CellKey<D>& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto v : k) {
      std::uint64_t x = static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      x ^= x >> 30;
      x *= 0xbf58476d1ce4e5b9ULL;
      x ^= x >> 27;
      h ^= x;
    }
    return static_cast<std::size_t>(h);
  }
};

template <std::size_t D>
struct Box {
  std::array<double, D> lo{};
  std::array<double, D> hi{};
};

class OutOfDomain : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

template <std::size_t D>
struct UniformGrid {
  std::array<double, D> origin{};
  std::array<double, D> cell{};
  std::array<std::int64_t, D> counts{};

  double lo(std::size_t axis, std::int64_t i) const { return origin[axis] + static_cast<double>(i) * cell[axis]; }
  double hi(std::size_t axis, std::int64_t i) const { return lo(axis, i + 1); }
  double upper(std::size_t axis) const { return lo(axis, counts[axis]); }

  std::int64_t size() const {
    std::int64_t s = 1;
    for (auto c : counts) s *= c;
    return s;
  }

  bool valid(const CellKey<D>& k) const {
    for (std::size_t a = 0; a < D; ++a)
      if (k[a] < 0 || k[a] >= counts[a]) return false;
    return true;
  }

  // Half-open index along one axis, clamped into range.
  std::int64_t axis_index(std::size_t axis, double x) const {
    const auto i = static_cast<std::int64_t>(std::floor((x - origin[axis]) / cell[axis]));
    return std::clamp<std::int64_t>(i, 0, counts[axis] - 1);
  }

  // Half-open cells [lo, hi); the domain max clamps to the last cell.
  CellKey<D> locate(const std::array<double, D>& p, double tol = 1e-9) const {
    CellKey<D> k{};
    for (std::size_t a = 0; a < D; ++a) {
      const double slack = tol * std::max(1.0, upper(a) - origin[a]);
      if (!(p[a] >= origin[a] - slack && p[a] <= upper(a) + slack))
        throw OutOfDomain("point outside grid domain");
      k[a] = axis_index(a, p[a]);
    }
    return k;
  }

  std::array<double, D> center(const CellKey<D>& k) const {
    std::array<double, D> c{};
    for (std::size_t a = 0; a < D; ++a) c[a] = lo(a, k[a]) + 0.5 * cell[a];
    return c;
  }

  // Indices whose closed cells meet [x0, x1], widened by `pad` cells on each
  // side, clamped; empty (first > second) when none.
  std::pair<std::int64_t, std::int64_t> closed_range_expanded(std::size_t axis, double x0, double x1,
                                                              std::int64_t pad) const {
    if (!(x0 <= x1)) return {1, 0};
    const double lim = static_cast<double>(counts[axis] + pad + 2);
    const double t0 = std::clamp((x0 - origin[axis]) / cell[axis], -lim, lim);
    const double t1 = std::clamp((x1 - origin[axis]) / cell[axis], -lim, lim);
    auto i0 = static_cast<std::int64_t>(std::ceil(t0)) - 1 - pad;
    auto i1 = static_cast<std::int64_t>(std::floor(t1)) + pad;
    i0 = std::max<std::int64_t>(i0, 0);
    i1 = std::min<std::int64_t>(i1, counts[axis] - 1);
    return {i0, i1};
  }

  std::pair<std::int64_t, std::int64_t> closed_range(std::size_t axis, double x0, double x1) const {
    return closed_range_expanded(axis, x0, x1, 0);
  }
};

template <std::size_t D>
UniformGrid<D> build_grid(const Box<D>& box, const std::array<double, D>& cell) {
  UniformGrid<D> g;
  for (std::size_t a = 0; a < D; ++a) {
    if (!(cell[a] > 0.0)) throw ParameterError("cell extent must be positive");
    const double ext = box.hi[a] - box.lo[a];
    if (ext < 0.0) throw ParameterError("inverted box");
    g.origin[a] = box.lo[a];
    g.cell[a] = cell[a];
    const double ratio = ext / cell[a];
    auto c = static_cast<std::int64_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
    g.counts[a] = std::max<std::int64_t>(c, 1);
  }
  return g;
}

template <std::size_t D>
class BucketMap {
 public:
  void insert(const CellKey<D>& k, std::uint32_t idx) { map_[k].push_back(idx); }

  const std::vector<std::uint32_t>* find(const CellKey<D>& k) const {
    auto it = map_.find(k);
    return it == map_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return map_.size(); }
  std::size_t total_multiplicity() const {
    std::size_t s = 0;
    for (const auto& [k, v] : map_) s += v.size();
    return s;
  }
  void reserve(std::size_t n) { map_.reserve(n); }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

 private:
  std::unordered_map<CellKey<D>, std::vector<std::uint32_t>, CellKeyHash<D>> map_;
};

// Sorted (key, item) pairs with binary-search lookup. Used in the hot loops
// where the number of occupied cells is small.
class PackedBuckets {
 public:
  void add(std::uint64_t key, std::uint32_t item) { entries_.emplace_back(key, item); }
  void clear() { entries_.clear(); }
  void finalize() { std::sort(entries_.begin(), entries_.end()); }
  bool empty() const { return entries_.empty(); }

  template <class F>
  void for_each_in(std::uint64_t key, F&& f) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<std::uint64_t, std::uint32_t>{key, 0});
    for (; it != entries_.end() && it->first == key; ++it) f(it->second);
  }

  // Items with keys in [k0, k1].
  template <class F>
  void for_each_in_range(std::uint64_t k0, std::uint64_t k1, F&& f) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<std::uint64_t, std::uint32_t>{k0, 0});
    for (; it != entries_.end() && it->first <= k1; ++it) f(it->second);
  }

  template <class F>
  void for_each_entry_in_range(std::uint64_t k0, std::uint64_t k1, F&& f) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<std::uint64_t, std::uint32_t>{k0, 0});
    for (; it != entries_.end() && it->first <= k1; ++it) f(it->first, it->second);
  }

  const std::vector<std::pair<std::uint64_t, std::uint32_t>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::uint64_t, std::uint32_t>> entries_;
};

// 21 bits per axis, signed indices shifted into range.
inline std::uint64_t pack_key(std::int64_t i, std::int64_t j, std::int64_t k = 0) {
  constexpr std::int64_t off = std::int64_t{1} << 20;
  constexpr std::uint64_t mask = (std::uint64_t{1} << 21) - 1;
  return ((static_cast<std::uint64_t>(i + off) & mask) << 42) |
         ((static_cast<std::uint64_t>(j + off) & mask) << 21) | (static_cast<std::uint64_t>(k + off) & mask);
}

// ---------------------------------------------------------------------------
// neighbors

// Cells offset by -1/0/+1 on the masked axes (0 elsewhere), excluding `cell`
// itself and anything outside the grid.
template <std::size_t D>
std::vector<CellKey<D>> neighbors(const CellKey<D>& cell, const std::array<bool, D>& mask, const UniformGrid<D>& g) {
  std::vector<CellKey<D>> out;
  std::array<int, D> off{};
  for (std::size_t a = 0; a < D; ++a) off[a] = mask[a] ? -1 : 0;
  while (true) {
    CellKey<D> k = cell;
    bool self = true;
    for (std::size_t a = 0; a < D; ++a) {
      k[a] += off[a];
      if (off[a] != 0) self = false;
    }
    if (!self && g.valid(k)) out.push_back(k);
    std::size_t a = 0;
    for (; a < D; ++a) {
      if (!mask[a]) continue;
      if (off[a] < 1) {
        ++off[a];
        break;
      }
      off[a] = -1;
    }
    if (a == D) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2D crossings

// Row interval touched by a non-vertical line over closed column `i`.
inline std::pair<std::int64_t, std::int64_t> line_rows_in_column(const Line2& l, const UniformGrid<2>& g, std::int64_t i) {
  const double x0 = g.lo(0, i), x1 = g.hi(0, i);
  const double y0 = l.a * x0 + l.b, y1 = l.a * x1 + l.b;
  return g.closed_range(1, std::min(y0, y1), std::max(y0, y1));
}

template <class F>
void for_each_cell_crossed_by_line_2d(const Line2& l, const UniformGrid<2>& g, F&& f) {
  if (l.vertical) {
    auto [c0, c1] = g.closed_range(0, l.x0, l.x0);
    for (auto i = c0; i <= c1; ++i)
      for (std::int64_t j = 0; j < g.counts[1]; ++j) f(CellKey<2>{i, j});
    return;
  }
  for (std::int64_t i = 0; i < g.counts[0]; ++i) {
    auto [r0, r1] = line_rows_in_column(l, g, i);
    for (auto j = r0; j <= r1; ++j) f(CellKey<2>{i, j});
  }
}

inline std::vector<CellKey<2>> cells_crossed_by_line_2d(const Line2& l, const UniformGrid<2>& g) {
  std::vector<CellKey<2>> out;
  for_each_cell_crossed_by_line_2d(l, g, [&](const CellKey<2>& k) { out.push_back(k); });
  return out;
}

// Range of y on one arc (upper when sign = +1) of a circle over x in [x0, x1].
inline bool circle_arc_y_range(const Circle2& c, double x0, double x1, double sign, double& ylo, double& yhi) {
  const double cx = c.center.x, r = c.radius;
  const double a = std::max(x0, cx - r), b = std::min(x1, cx + r);
  if (a > b) return false;
  auto h = [&](double x) { return std::sqrt(std::max(0.0, r * r - (x - cx) * (x - cx))); };
  const double near = (a <= cx && cx <= b) ? r : std::max(h(a), h(b));
  const double far = std::min(h(a), h(b));
  if (sign > 0) {
    ylo = c.center.y + far;
    yhi = c.center.y + near;
  } else {
    ylo = c.center.y - near;
    yhi = c.center.y - far;
  }
  return true;
}

template <class F>
void for_each_cell_crossed_by_circle_2d(const Circle2& c, const UniformGrid<2>& g, F&& f) {
  auto [c0, c1] = g.closed_range(0, c.center.x - c.radius, c.center.x + c.radius);
  for (auto i = c0; i <= c1; ++i) {
    double lo_u, hi_u, lo_l, hi_l;
    if (!circle_arc_y_range(c, g.lo(0, i), g.hi(0, i), 1.0, lo_u, hi_u)) continue;
    circle_arc_y_range(c, g.lo(0, i), g.hi(0, i), -1.0, lo_l, hi_l);
    auto [u0, u1] = g.closed_range(1, lo_u, hi_u);
    auto [l0, l1] = g.closed_range(1, lo_l, hi_l);
    if (u0 <= u1 && l0 <= l1 && l1 + 1 >= u0) {  // arcs meet inside this column
      for (auto j = std::min(l0, u0); j <= std::max(l1, u1); ++j) f(CellKey<2>{i, j});
      continue;
    }
    for (auto j = l0; j <= l1; ++j) f(CellKey<2>{i, j});
    for (auto j = u0; j <= u1; ++j) f(CellKey<2>{i, j});
  }
}

inline std::vector<CellKey<2>> cells_crossed_by_circle_2d(const Circle2& c, const UniformGrid<2>& g) {
  std::vector<CellKey<2>> out;
  for_each_cell_crossed_by_circle_2d(c, g, [&](const CellKey<2>& k) { out.push_back(k); });
  return out;
}

// Polar grid over (rho, theta) about `center`: axis 0 is rho, axis 1 is theta
// in [0, 2 pi).
struct PolarGrid {
  Point2 center;
  UniformGrid<2> grid;

  CellKey<2> locate(Point2 p, double tol = 1e-9) const {
    const Point2 d = p - center;
    double th = std::atan2(d.y, d.x);
    if (th < 0.0) th += 2.0 * std::numbers::pi;
    const double rho = norm(d);
    return grid.locate({rho, th}, tol);
  }
};

// rho = f(theta) for the circle centred at `q` (relative to the polar centre)
// with radius r, valid while |q| < r.
inline double polar_radius(Point2 q, double r, double theta) {
  const double cs = std::cos(theta), sn = std::sin(theta);
  const double along = q.x * cs + q.y * sn;
  const double across = -q.x * sn + q.y * cs;
  return along + std::sqrt(std::max(0.0, r * r - across * across));
}

// Exact rho range of f over [t0, t1]; extremes sit at the endpoints or at the
// directions of q and -q.
inline std::pair<double, double> polar_radius_range(Point2 q, double r, double t0, double t1) {
  double lo = std::min(polar_radius(q, r, t0), polar_radius(q, r, t1));
  double hi = std::max(polar_radius(q, r, t0), polar_radius(q, r, t1));
  const double dq = norm(q);
  if (dq > 0.0) {
    const double phi = std::atan2(q.y, q.x);
    for (double crit : {phi, phi + std::numbers::pi}) {
      for (int k = -2; k <= 2; ++k) {
        const double t = crit + 2.0 * std::numbers::pi * k;
        if (t >= t0 && t <= t1) {
          const double v = polar_radius(q, r, t);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
  }
  return {lo, hi};
}

template <class F>
void for_each_cell_crossed_by_dual_circle_polar(const Circle2& cp, const PolarGrid& pg, F&& f) {
  const Point2 q = cp.center - pg.center;
  if (!(norm(q) < cp.radius)) throw ParameterError("polar centre must lie inside the dual circle");
  const auto& g = pg.grid;
  for (std::int64_t t = 0; t < g.counts[1]; ++t) {
    auto [lo, hi] = polar_radius_range(q, cp.radius, g.lo(1, t), g.hi(1, t));
    auto [r0, r1] = g.closed_range(0, lo, hi);
    for (auto i = r0; i <= r1; ++i) f(CellKey<2>{i, t});
  }
}

inline std::vector<CellKey<2>> cells_crossed_by_dual_circle_polar(const Circle2& cp, const PolarGrid& pg) {
  std::vector<CellKey<2>> out;
  for_each_cell_crossed_by_dual_circle_polar(cp, pg, [&](const CellKey<2>& k) { out.push_back(k); });
  return out;
}

// ---------------------------------------------------------------------------
// 3D crossings

// z range of the plane over closed column (i, j).
inline std::pair<std::int64_t, std::int64_t> plane_rows_in_column(const Plane3& pl, const UniformGrid<3>& g,
                                                                  std::int64_t i, std::int64_t j) {
  const double x0 = g.lo(0, i), x1 = g.hi(0, i), y0 = g.lo(1, j), y1 = g.hi(1, j);
  const double base = pl.c;
  const double ax0 = pl.a * x0, ax1 = pl.a * x1, by0 = pl.b * y0, by1 = pl.b * y1;
  const double zlo = base + std::min(ax0, ax1) + std::min(by0, by1);
  const double zhi = base + std::max(ax0, ax1) + std::max(by0, by1);
  return g.closed_range(2, zlo, zhi);
}

template <class F>
void for_each_cell_crossed_by_plane_3d(const Plane3& pl, const UniformGrid<3>& g, F&& f) {
  for (std::int64_t i = 0; i < g.counts[0]; ++i)
    for (std::int64_t j = 0; j < g.counts[1]; ++j) {
      auto [k0, k1] = plane_rows_in_column(pl, g, i, j);
      for (auto k = k0; k <= k1; ++k) f(CellKey<3>{i, j, k});
    }
}

inline std::vector<CellKey<3>> cells_crossed_by_plane_3d(const Plane3& pl, const UniformGrid<3>& g) {
  std::vector<CellKey<3>> out;
  for_each_cell_crossed_by_plane_3d(pl, g, [&](const CellKey<3>& k) { out.push_back(k); });
  return out;
}

inline double coord(Point3 p, std::size_t a) { return a == 0 ? p.x : (a == 1 ? p.y : p.z); }

// Clips the line p + t d to the closed grid box; false when it misses.
inline bool clip_line_to_grid(Point3 p, Point3 d, const UniformGrid<3>& g, double& t0, double& t1) {
  t0 = -std::numeric_limits<double>::infinity();
  t1 = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < 3; ++a) {
    const double pa = coord(p, a), da = coord(d, a);
    const double lo = g.origin[a], hi = g.upper(a);
    if (da == 0.0) {
      if (pa < lo || pa > hi) return false;
      continue;
    }
    double s0 = (lo - pa) / da, s1 = (hi - pa) / da;
    if (s0 > s1) std::swap(s0, s1);
    t0 = std::max(t0, s0);
    t1 = std::min(t1, s1);
  }
  return t0 <= t1;
}

// Closed-cell traversal of the segment p + t d, t in [t0, t1].
template <class F>
void for_each_cell_crossed_by_segment_3d(Point3 p, Point3 d, double t0, double t1, const UniformGrid<3>& g, F&& f) {
  std::array<std::size_t, 3> ax{0, 1, 2};
  std::sort(ax.begin(), ax.end(), [&](std::size_t a, std::size_t b) { return std::abs(coord(d, a)) > std::abs(coord(d, b)); });
  const std::size_t A = ax[0], B = ax[1], C = ax[2];
  auto at = [&](double t, std::size_t a) { return coord(p, a) + t * coord(d, a); };
  // parameter sub-interval of [s0, s1] inside slab [lo, hi] along axis a
  auto sub = [&](std::size_t a, double lo, double hi, double s0, double s1, double& u0, double& u1) {
    const double da = coord(d, a);
    if (da == 0.0) {
      u0 = s0;
      u1 = s1;
      const double v = coord(p, a);
      return v >= lo && v <= hi;
    }
    double a0 = (lo - coord(p, a)) / da, a1 = (hi - coord(p, a)) / da;
    if (a0 > a1) std::swap(a0, a1);
    u0 = std::max(s0, a0);
    u1 = std::min(s1, a1);
    return u0 <= u1;
  };
  auto mm = [](double a, double b) { return std::pair{std::min(a, b), std::max(a, b)}; };
  auto [ra0, ra1] = mm(at(t0, A), at(t1, A));
  auto [ia0, ia1] = g.closed_range(A, ra0, ra1);
  for (auto i = ia0; i <= ia1; ++i) {
    double u0, u1;
    if (!sub(A, g.lo(A, i), g.hi(A, i), t0, t1, u0, u1)) continue;
    auto [rb0, rb1] = mm(at(u0, B), at(u1, B));
    auto [jb0, jb1] = g.closed_range(B, rb0, rb1);
    for (auto j = jb0; j <= jb1; ++j) {
      double v0, v1;
      if (!sub(B, g.lo(B, j), g.hi(B, j), u0, u1, v0, v1)) continue;
      auto [rc0, rc1] = mm(at(v0, C), at(v1, C));
      auto [kc0, kc1] = g.closed_range(C, rc0, rc1);
      for (auto k = kc0; k <= kc1; ++k) {
        CellKey<3> key{};
        key[A] = i;
        key[B] = j;
        key[C] = k;
        f(key);
      }
    }
  }
}

template <class F>
void for_each_cell_crossed_by_line_3d(const Line3& l, const UniformGrid<3>& g, F&& f) {
  const Point3 p = l.anchor(), d = l.direction();
  double t0, t1;
  if (!clip_line_to_grid(p, d, g, t0, t1)) return;
  for_each_cell_crossed_by_segment_3d(p, d, t0, t1, g, f);
}

inline std::vector<CellKey<3>> cells_crossed_by_line_3d(const Line3& l, const UniformGrid<3>& g) {
  std::vector<CellKey<3>> out;
  for_each_cell_crossed_by_line_3d(l, g, [&](const CellKey<3>& k) { out.push_back(k); });
  return out;
}

template <class F>
void for_each_cell_crossed_by_sphere_3d(const Sphere3& s, const UniformGrid<3>& g, F&& f) {
  const double r = s.radius;
  auto [i0, i1] = g.closed_range(0, s.center.x - r, s.center.x + r);
  auto [j0, j1] = g.closed_range(1, s.center.y - r, s.center.y + r);
  for (auto i = i0; i <= i1; ++i)
    for (auto j = j0; j <= j1; ++j) {
      const double x0 = g.lo(0, i) - s.center.x, x1 = g.hi(0, i) - s.center.x;
      const double y0 = g.lo(1, j) - s.center.y, y1 = g.hi(1, j) - s.center.y;
      const double nx = std::clamp(0.0, x0, x1), ny = std::clamp(0.0, y0, y1);
      const double fx = std::max(std::abs(x0), std::abs(x1)), fy = std::max(std::abs(y0), std::abs(y1));
      const double rmin = std::hypot(nx, ny);
      if (rmin > r) continue;
      const double rmax = std::min(std::hypot(fx, fy), r);
      const double hmax = std::sqrt(std::max(0.0, r * r - rmin * rmin));
      const double hmin = std::sqrt(std::max(0.0, r * r - rmax * rmax));
      auto [u0, u1] = g.closed_range(2, s.center.z + hmin, s.center.z + hmax);
      auto [l0, l1] = g.closed_range(2, s.center.z - hmax, s.center.z - hmin);
      if (u0 <= u1 && l0 <= l1 && l1 + 1 >= u0) {
        for (auto k = std::min(l0, u0); k <= std::max(l1, u1); ++k) f(CellKey<3>{i, j, k});
        continue;
      }
      for (auto k = l0; k <= l1; ++k) f(CellKey<3>{i, j, k});
      for (auto k = u0; k <= u1; ++k) f(CellKey<3>{i, j, k});
    }
}

inline std::vector<CellKey<3>> cells_crossed_by_sphere_3d(const Sphere3& s, const UniformGrid<3>& g) {
  std::vector<CellKey<3>> out;
  for_each_cell_crossed_by_sphere_3d(s, g, [&](const CellKey<3>& k) { out.push_back(k); });
  return out;
}

// Closed box against a 3D circle: the box slice in the circle's plane is a
// convex polygon, and the circle meets it iff min |x - c| <= r <= max |x - c|
// over that polygon.
inline bool box_meets_circle_3d(Point3 lo, Point3 hi, const Circle3& c, double slack = 1e-12) {
  const Point3 n = c.axis;
  std::array<Point3, 8> v;
  std::array<double, 8> s;
  for (int m = 0; m < 8; ++m) {
    v[m] = {(m & 1) ? hi.x : lo.x, (m & 2) ? hi.y : lo.y, (m & 4) ? hi.z : lo.z};
    s[m] = dot(n, v[m] - c.center);
  }
  const double tol = slack * std::max(1.0, norm(hi - lo));
  std::vector<Point3> pts;
  for (int m = 0; m < 8; ++m)
    if (std::abs(s[m]) <= tol) pts.push_back(v[m]);
  for (int m = 0; m < 8; ++m)
    for (int bit : {1, 2, 4}) {
      const int o = m | bit;
      if (o == m) continue;
      if ((s[m] < -tol && s[o] > tol) || (s[m] > tol && s[o] < -tol)) {
        const double t = s[m] / (s[m] - s[o]);
        pts.push_back(v[m] + t * (v[o] - v[m]));
      }
    }
  if (pts.empty()) return false;
  const Point3 e1 = normalized(std::abs(n.x) < 0.9 ? cross(n, Point3{1, 0, 0}) : cross(n, Point3{0, 1, 0}));
  const Point3 e2 = cross(n, e1);
  std::vector<Point2> q;
  double dmax = 0.0;
  for (const auto& p : pts) {
    const Point3 w = p - c.center;
    q.push_back({dot(w, e1), dot(w, e2)});
    dmax = std::max(dmax, norm(q.back()));
  }
  if (dmax < c.radius - tol) return false;
  // convex hull (monotone chain)
  std::sort(q.begin(), q.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  auto turn = [](Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
  std::vector<Point2> h(2 * q.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], q[i]) <= 0) --k;
    h[k++] = q[i];
  }
  for (std::size_t i = q.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && turn(h[k - 2], h[k - 1], q[i - 1]) <= 0) --k;
    h[k++] = q[i - 1];
  }
  h.resize(k > 1 ? k - 1 : k);
  auto seg_dist = [](Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double l2 = dot(ab, ab);
    const double t = l2 > 0.0 ? std::clamp(-dot(a, ab) / l2, 0.0, 1.0) : 0.0;
    return norm(a + t * ab);
  };
  double dmin;
  if (h.size() < 3) {
    dmin = h.size() == 2 ? seg_dist(h[0], h[1]) : norm(h[0]);
  } else {
    bool inside = true;
    dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < h.size(); ++i) {
      const Point2 a = h[i], b = h[(i + 1) % h.size()];
      if (turn(a, b, Point2{0, 0}) < 0) inside = false;
      dmin = std::min(dmin, seg_dist(a, b));
    }
    if (inside) dmin = 0.0;
  }
  return dmin <= c.radius + tol;
}

template <class F>
void for_each_cell_crossed_by_circle_3d(const Circle3& c, const UniformGrid<3>& g, F&& f) {
  const double minc = std::min({g.cell[0], g.cell[1], g.cell[2]});
  const Point3 n = c.axis;
  const Point3 e1 = normalized(std::abs(n.x) < 0.9 ? cross(n, Point3{1, 0, 0}) : cross(n, Point3{0, 1, 0}));
  const Point3 e2 = cross(n, e1);
  const auto steps = static_cast<int>(std::ceil(2.0 * std::numbers::pi * c.radius / (0.25 * minc))) + 8;
  // chords stay within a quarter cell of the arc, so the dilated chord cells
  // contain every crossed cell
  std::unordered_set<CellKey<3>, CellKeyHash<3>> seed;
  auto at = [&](int s) {
    const double t = 2.0 * std::numbers::pi * s / steps;
    return c.center + c.radius * std::cos(t) * e1 + c.radius * std::sin(t) * e2;
  };
  for (int s = 0; s < steps; ++s) {
    const Point3 a = at(s), b = at(s + 1);
    double t0, t1;
    if (!clip_line_to_grid(a, b - a, g, t0, t1)) continue;
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    if (t0 > t1) continue;
    for_each_cell_crossed_by_segment_3d(a, b - a, t0, t1, g, [&](const CellKey<3>& k) { seed.insert(k); });
  }
  std::unordered_set<CellKey<3>, CellKeyHash<3>> seen;
  for (const auto& k : seed)
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          CellKey<3> q{k[0] + dx, k[1] + dy, k[2] + dz};
          if (!g.valid(q) || !seen.insert(q).second) continue;
          const Point3 lo{g.lo(0, q[0]), g.lo(1, q[1]), g.lo(2, q[2])};
          const Point3 hi{g.hi(0, q[0]), g.hi(1, q[1]), g.hi(2, q[2])};
          if (box_meets_circle_3d(lo, hi, c)) f(q);
        }
}

inline std::vector<CellKey<3>> cells_crossed_by_circle_3d(const Circle3& c, const UniformGrid<3>& g) {
  std::vector<CellKey<3>> out;
  for_each_cell_crossed_by_circle_3d(c, g, [&](const CellKey<3>& k) { out.push_back(k); });
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// 4D dual of a point: {(a,b,c,d) : a xi + b = eta, c xi + d = zeta}.
// Axis order of the grid is (a, b, c, d).

struct DualPoint3 {
  double xi = 0.0, eta = 0.0, zeta = 0.0;
};

// Closed b-range (or d-range) of eta - a xi over a in [a0, a1].
inline std::pair<double, double> dual_intercept_range(double xi, double eta, double a0, double a1) {
  const double u = eta - a0 * xi, v = eta - a1 * xi;
  return {std::min(u, v), std::max(u, v)};
}

template <class F>
void for_each_cell_crossed_by_dual_plane_4d(const DualPoint3& p, const UniformGrid<4>& g, F&& f) {
  for (std::int64_t ia = 0; ia < g.counts[0]; ++ia) {
    auto [b0, b1] = dual_intercept_range(p.xi, p.eta, g.lo(0, ia), g.hi(0, ia));
    auto [ib0, ib1] = g.closed_range(1, b0, b1);
    if (ib0 > ib1) continue;
    for (std::int64_t ic = 0; ic < g.counts[2]; ++ic) {
      auto [d0, d1] = dual_intercept_range(p.xi, p.zeta, g.lo(2, ic), g.hi(2, ic));
      auto [id0, id1] = g.closed_range(3, d0, d1);
      for (auto ib = ib0; ib <= ib1; ++ib)
        for (auto id = id0; id <= id1; ++id) f(CellKey<4>{ia, ib, ic, id});
    }
  }
}

inline std::vector<CellKey<4>> cells_crossed_by_dual_plane_4d(const DualPoint3& p, const UniformGrid<4>& g) {
  std::vector<CellKey<4>> out;
  for_each_cell_crossed_by_dual_plane_4d(p, g, [&](const CellKey<4>& k) { out.push_back(k); });
  return out;
}

}  // namespace incidence
