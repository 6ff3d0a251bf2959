// SPDX-License-Identifier: Apache-2.0
//
// Domain types, exact distances and the frame normalizations shared by all
// incidence algorithms.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace incidence {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

inline Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(double s, Point3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(Point3 a, Point3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Point3 a) { return std::sqrt(dot(a, a)); }
inline Point3 normalized(Point3 a) {
  const double l = norm(a);
  if (!(l > 0.0)) throw ParameterError("zero-length vector");
  return (1.0 / l) * a;
}

// y = a x + b, or x = x0 when vertical.
struct Line2 {
  double a = 0.0;
  double b = 0.0;
  bool vertical = false;
  double x0 = 0.0;

  static Line2 slope_intercept(double a, double b) { return {a, b, false, 0.0}; }
  static Line2 vertical_at(double x0) { return {0.0, 0.0, true, x0}; }

  static Line2 through(Point2 p, Point2 q) {
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    if (dx == 0.0 && dy == 0.0) throw ParameterError("line through coincident points");
    if (std::abs(dx) <= 1e-15 * std::abs(dy)) return vertical_at(0.5 * (p.x + q.x));
    const double a = dy / dx;
    return slope_intercept(a, p.y - a * p.x);
  }

  Point2 anchor() const { return vertical ? Point2{x0, 0.0} : Point2{0.0, b}; }
  Point2 direction() const { return vertical ? Point2{0.0, 1.0} : Point2{1.0, a}; }
};

// z = a x + b y + c
struct Plane3 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  Point3 normal() const { return normalized(Point3{-a, -b, 1.0}); }

  // Plane through `p` with normal `n`; n.z must be nonzero.
  static Plane3 from_normal(Point3 p, Point3 n) {
    if (std::abs(n.z) < 1e-300) throw ParameterError("plane parallel to z axis");
    const double a = -n.x / n.z;
    const double b = -n.y / n.z;
    return {a, b, p.z - a * p.x - b * p.y};
  }
};

// y = a x + b, z = c x + d
struct Line3 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  Point3 anchor() const { return {0.0, b, d}; }
  Point3 direction() const { return {1.0, a, c}; }

  static Line3 from_point_direction(Point3 p, Point3 dir) {
    if (std::abs(dir.x) < 1e-300) throw ParameterError("line orthogonal to the x axis");
    const double a = dir.y / dir.x;
    const double c = dir.z / dir.x;
    return {a, p.y - a * p.x, c, p.z - c * p.x};
  }
};

struct Circle2 {
  Point2 center;
  double radius = 0.0;
};

struct Circle3 {
  Point3 center;
  double radius = 0.0;
  Point3 axis{0.0, 0.0, 1.0};
};

struct Sphere3 {
  Point3 center;
  double radius = 0.0;
};

struct Triangle {
  double u = 0.0;  // |ab|, longest
  double v = 0.0;  // |ac|
  double w = 0.0;  // |bc|
};

// ---------------------------------------------------------------------------
// distances

inline double dist_point_line_2d(Point2 p, const Line2& l) {
  if (l.vertical) return std::abs(p.x - l.x0);
  return std::abs(l.a * p.x - p.y + l.b) / std::sqrt(l.a * l.a + 1.0);
}

// Vertical distance; only meaningful for non-vertical lines.
inline double vertical_dist_point_line_2d(Point2 p, const Line2& l) {
  return std::abs(l.a * p.x + l.b - p.y);
}

inline double dist_point_circle_2d(Point2 p, const Circle2& c) {
  return std::abs(norm(p - c.center) - c.radius);
}

inline double power_of_point(Point2 p, const Circle2& c) {
  const Point2 d = p - c.center;
  return dot(d, d) - c.radius * c.radius;
}

inline double dist_point_plane_3d(Point3 p, const Plane3& pl) {
  return std::abs(pl.a * p.x + pl.b * p.y + pl.c - p.z) /
         std::sqrt(pl.a * pl.a + pl.b * pl.b + 1.0);
}

inline double dist_point_line_3d(Point3 p, const Line3& l) {
  const Point3 d = l.direction();
  const Point3 w = p - l.anchor();
  return norm(cross(w, d)) / norm(d);
}

// Distance from p to the point of l with the same x coordinate.
inline double vertical_dist_point_line_3d(Point3 p, const Line3& l) {
  return norm(l.anchor() + p.x * l.direction() - p);
}

// The same quantity in the dual: l* = (a, b, c, d) against the 2-plane
// p* = {a xi + b = eta, c xi + d = zeta}, measured in the (b, d) directions.
inline double dual_dist_line_point_3d(const Line3& l, Point3 p) {
  return std::hypot(l.a * p.x + l.b - p.y, l.c * p.x + l.d - p.z);
}

inline double dist_point_circle_3d(Point3 p, const Circle3& c) {
  const Point3 w = p - c.center;
  const double h = dot(w, c.axis);
  const Point3 in_plane = w - h * c.axis;
  const double rho = norm(in_plane);
  return std::hypot(rho - c.radius, h);
}

inline double dist_point_sphere_3d(Point3 p, const Sphere3& s) {
  return std::abs(norm(p - s.center) - s.radius);
}

// ---------------------------------------------------------------------------
// lifting onto the paraboloid z = x^2 + y^2

inline Point3 lift(Point2 p) { return {p.x, p.y, p.x * p.x + p.y * p.y}; }

inline Plane3 lifted_plane(const Circle2& c) {
  const Point2 q = c.center;
  return {2.0 * q.x, 2.0 * q.y, c.radius * c.radius - q.x * q.x - q.y * q.y};
}

inline double vertical_dist_point_plane_3d(Point3 p, const Plane3& pl) {
  return std::abs(pl.a * p.x + pl.b * p.y + pl.c - p.z);
}

// ---------------------------------------------------------------------------
// rotations

inline Point2 rotate(Point2 p, double angle) {
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  return {cs * p.x - sn * p.y, sn * p.x + cs * p.y};
}

inline Line2 rotate(const Line2& l, double angle) {
  const Point2 p = rotate(l.anchor(), angle);
  const Point2 d = rotate(l.direction(), angle);
  if (std::abs(d.x) <= 1e-15 * std::abs(d.y)) return Line2::vertical_at(p.x);
  const double a = d.y / d.x;
  return Line2::slope_intercept(a, p.y - a * p.x);
}

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline Point3 apply(const Mat3& m, Point3 p) {
  return {m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
          m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
          m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
}

inline Mat3 transpose(const Mat3& m) {
  Mat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
  return t;
}

inline Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

// Rodrigues; `axis` must be unit length.
inline Mat3 rotation_about(Point3 axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  const double x = axis.x, y = axis.y, z = axis.z;
  return {{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
           {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
           {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
}

// Minimal rotation taking unit `from` onto unit `to`.
inline Mat3 rotation_between(Point3 from, Point3 to) {
  const Point3 ax = cross(from, to);
  const double s = norm(ax);
  const double c = dot(from, to);
  if (s < 1e-15) {
    if (c > 0.0) return identity3();
    // antiparallel: half turn about any perpendicular axis
    Point3 perp = std::abs(from.x) < 0.9 ? cross(from, Point3{1, 0, 0}) : cross(from, Point3{0, 1, 0});
    return rotation_about(normalized(perp), std::numbers::pi);
  }
  return rotation_about((1.0 / s) * ax, std::atan2(s, c));
}

inline Plane3 transform(const Plane3& pl, const Mat3& rot) {
  const Point3 p{0.0, 0.0, pl.c};
  const Point3 n{-pl.a, -pl.b, 1.0};
  return Plane3::from_normal(apply(rot, p), apply(rot, n));
}

inline Line3 transform(const Line3& l, const Mat3& rot) {
  return Line3::from_point_direction(apply(rot, l.anchor()), apply(rot, l.direction()));
}

inline Circle3 transform(const Circle3& c, const Mat3& rot) {
  return {apply(rot, c.center), c.radius, apply(rot, c.axis)};
}

// ---------------------------------------------------------------------------
// similarity maps x' = s (x - origin)

struct Similarity2 {
  Point2 origin;
  double scale = 1.0;

  Point2 apply(Point2 p) const { return scale * (p - origin); }
  Point2 invert(Point2 p) const { return origin + (1.0 / scale) * p; }
  Line2 apply(const Line2& l) const {
    if (l.vertical) return Line2::vertical_at(scale * (l.x0 - origin.x));
    return Line2::slope_intercept(l.a, scale * (l.a * origin.x + l.b - origin.y));
  }
  Circle2 apply(const Circle2& c) const { return {apply(c.center), scale * c.radius}; }
};

struct Similarity3 {
  Point3 origin;
  double scale = 1.0;

  Point3 apply(Point3 p) const { return scale * (p - origin); }
  Point3 invert(Point3 p) const { return origin + (1.0 / scale) * p; }
  Plane3 apply(const Plane3& pl) const {
    return {pl.a, pl.b, scale * (pl.a * origin.x + pl.b * origin.y + pl.c - origin.z)};
  }
  Line3 apply(const Line3& l) const {
    return {l.a, scale * (l.a * origin.x + l.b - origin.y), l.c,
            scale * (l.c * origin.x + l.d - origin.z)};
  }
  Circle3 apply(const Circle3& c) const { return {apply(c.center), scale * c.radius, c.axis}; }
  Sphere3 apply(const Sphere3& s) const { return {apply(s.center), scale * s.radius}; }
};

// Maps the bounding box of `pts`, padded by `pad` on every side, into [0,1]^2
// with one uniform scale.
inline Similarity2 unit_square_map(const std::vector<Point2>& pts, double pad) {
  if (pts.empty()) return {};
  Point2 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const double side = std::max({hi.x - lo.x, hi.y - lo.y, 1e-12}) + 2.0 * pad;
  return {Point2{lo.x - pad, lo.y - pad}, 1.0 / side};
}

inline Similarity3 unit_cube_map(const std::vector<Point3>& pts, double pad) {
  if (pts.empty()) return {};
  Point3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const double side = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z, 1e-12}) + 2.0 * pad;
  return {Point3{lo.x - pad, lo.y - pad, lo.z - pad}, 1.0 / side};
}

// ---------------------------------------------------------------------------
// slope classes (2D)

enum class SlopeClassId { flat = 0, positive = 1, negative = 2 };

struct SlopeClass {
  SlopeClassId id = SlopeClassId::flat;
  double angle = 0.0;                // rotation applied to the whole plane
  std::vector<std::size_t> indices;  // into the input line list
  std::vector<Line2> lines;          // rotated, |a| <= 1
};

// Flat lines (|a| < 1) stay put. Steep positive lines and vertical lines are
// turned by -45 degrees, steep negative lines by +45 degrees.
inline std::array<SlopeClass, 3> normalize_slope_classes_2d(const std::vector<Line2>& lines) {
  constexpr double quarter = std::numbers::pi / 4.0;
  std::array<SlopeClass, 3> out;
  out[0].id = SlopeClassId::flat;
  out[1].id = SlopeClassId::positive;
  out[1].angle = -quarter;
  out[2].id = SlopeClassId::negative;
  out[2].angle = quarter;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line2& l = lines[i];
    int k = 0;
    if (l.vertical || l.a >= 1.0) k = 1;
    else if (l.a <= -1.0) k = 2;
    Line2 r = k == 0 ? l : rotate(l, out[k].angle);
    if (r.vertical) throw ParameterError("slope class rotation produced a vertical line");
    r.a = std::clamp(r.a, -1.0, 1.0);  // absorbs last-bit rounding at |a| = 1
    out[k].indices.push_back(i);
    out[k].lines.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// direction classes (3D)

// Axes, face diagonals and cube diagonals with antipodes collapsed.
inline const std::vector<Point3>& axis_diagonal_net() {
  static const std::vector<Point3> net = [] {
    const double h = 1.0 / std::sqrt(2.0);
    const double t = 1.0 / std::sqrt(3.0);
    return std::vector<Point3>{{1, 0, 0},   {0, 1, 0},   {0, 0, 1},   {h, h, 0},   {h, -h, 0},
                               {h, 0, h},   {h, 0, -h},  {0, h, h},   {0, h, -h},  {t, t, t},
                               {t, t, -t},  {t, -t, t},  {-t, t, t}};
  }();
  return net;
}

inline std::size_t nearest_direction(const std::vector<Point3>& net, Point3 v) {
  std::size_t best = 0;
  double best_dot = -1.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const double d = std::abs(dot(net[i], v));
    if (d > best_dot) {
      best_dot = d;
      best = i;
    }
  }
  return best;
}

struct DirectionClass {
  Point3 direction;
  Mat3 rotation = identity3();  // maps `direction` onto the target axis
  std::vector<std::size_t> indices;
};

// Groups unoriented vectors by nearest net direction. Empty classes are kept
// so that class ids equal net indices.
inline std::vector<DirectionClass> normalize_direction_classes_3d(const std::vector<Point3>& vectors,
                                                                  const std::vector<Point3>& net,
                                                                  Point3 target) {
  std::vector<DirectionClass> out(net.size());
  for (std::size_t k = 0; k < net.size(); ++k) {
    out[k].direction = net[k];
    out[k].rotation = rotation_between(net[k], target);
  }
  for (std::size_t i = 0; i < vectors.size(); ++i)
    out[nearest_direction(net, normalized(vectors[i]))].indices.push_back(i);
  return out;
}

}  // namespace incidence
