#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "incidence/geom.hpp"

using namespace incidence;

namespace {

std::mt19937_64 rng(17);
double U(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
Point3 unit3() {
  std::normal_distribution<double> nd;
  return normalized(Point3{nd(rng), nd(rng), nd(rng)});
}

// dense parametric scan, refined by golden section around the best sample
template <class F>
double scan_min(F f, double t0, double t1, int samples) {
  double best = f(t0), bt = t0;
  const double step = (t1 - t0) / samples;
  for (int i = 1; i <= samples; ++i) {
    const double t = t0 + i * step;
    const double v = f(t);
    if (v < best) best = v, bt = t;
  }
  double a = bt - step, b = bt + step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) < f(d)) b = d;
    else a = c;
  }
  return std::min(best, f(0.5 * (a + b)));
}

}  // namespace

TEST(Distance, LineTrivial) {
  EXPECT_DOUBLE_EQ(dist_point_line_2d({0, 0}, Line2::slope_intercept(0, 0)), 0.0);
  EXPECT_DOUBLE_EQ(dist_point_line_2d({0, 1}, Line2::slope_intercept(0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(dist_point_line_2d({0.7, 0.2}, Line2::vertical_at(0.25)), 0.45);
}

TEST(Distance, LineMatchesScanOracle) {
  // frozen from tests/oracles/frozen_values.py
  EXPECT_NEAR(dist_point_line_2d({0.3, 0.7}, Line2::slope_intercept(0.5, 0.1)), 0.4024922359499621, 1e-9);
}

TEST(Distance, CircleCases) {
  const Circle2 c{{0.5, 0.5}, 0.4};
  EXPECT_NEAR(dist_point_circle_2d({0.9, 0.5}, c), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(dist_point_circle_2d({0.5, 0.5}, c), 0.4);
  EXPECT_NEAR(power_of_point({0.9, 0.5}, c), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(power_of_point({0.5, 0.5}, c), -0.16);
}

TEST(Distance, Circle3MatchesScanOracle) {
  const Circle3 c{{0.05, 0.1, -0.05}, 0.3, normalized(Point3{1, 2, 2})};
  EXPECT_NEAR(dist_point_circle_3d({0.2, -0.1, 0.35}, c), 0.22744648555626015, 1e-9);
  EXPECT_DOUBLE_EQ(dist_point_circle_3d(c.center, c), 0.3);
}

TEST(Distance, SphereTrivial) {
  const Sphere3 s{{0.1, 0.2, 0.3}, 0.25};
  EXPECT_NEAR(dist_point_sphere_3d({0.35, 0.2, 0.3}, s), 0.0, 1e-15);
}

TEST(DistanceProperty, RandomAgreeWithScans) {
  for (int i = 0; i < 200; ++i) {
    const Point2 p{U(0, 1), U(0, 1)};
    const Line2 l = Line2::slope_intercept(U(-3, 3), U(-1, 1));
    const double s = scan_min([&](double t) { return norm(Point2{t, l.a * t + l.b} - p); }, -4, 4, 20000);
    EXPECT_NEAR(dist_point_line_2d(p, l), s, 1e-9);

    const Circle2 c{{U(0, 1), U(0, 1)}, U(0.05, 0.5)};
    const double sc = scan_min(
        [&](double t) { return norm(c.center + c.radius * Point2{std::cos(t), std::sin(t)} - p); }, 0,
        2 * std::numbers::pi, 20000);
    EXPECT_NEAR(dist_point_circle_2d(p, c), sc, 1e-9);

    const Point3 q{U(-1, 1), U(-1, 1), U(-1, 1)};
    const Line3 l3{U(-2, 2), U(-1, 1), U(-2, 2), U(-1, 1)};
    const double s3 = scan_min([&](double t) { return norm(l3.anchor() + t * l3.direction() - q); }, -4, 4, 20000);
    EXPECT_NEAR(dist_point_line_3d(q, l3), s3, 1e-9);

    const Plane3 pl{U(-2, 2), U(-2, 2), U(-1, 1)};
    // closest point lies along the normal: scan that parameter
    const Point3 nrm = pl.normal();
    const double sp = scan_min(
        [&](double t) {
          const Point3 x = q + t * nrm;
          return std::abs(pl.a * x.x + pl.b * x.y + pl.c - x.z) + std::abs(t);
        },
        -4, 4, 20000);
    EXPECT_NEAR(dist_point_plane_3d(q, pl), sp, 1e-9);
  }
}

TEST(Lifting, VerticalDistanceIsPower) {
  for (int i = 0; i < 10000; ++i) {
    const Point2 p{U(0, 1), U(0, 1)};
    const Circle2 c{{U(0, 1), U(0, 1)}, U(0.01, 0.5)};
    EXPECT_NEAR(vertical_dist_point_plane_3d(lift(p), lifted_plane(c)), std::abs(power_of_point(p, c)), 1e-12);
  }
}

TEST(Duality3D, VerticalDistanceEqualsDualDistance) {
  for (int i = 0; i < 10000; ++i) {
    const Point3 p{U(-1, 1), U(-1, 1), U(-1, 1)};
    const Line3 l{U(-1, 1), U(-1, 1), U(-1, 1), U(-1, 1)};
    EXPECT_NEAR(vertical_dist_point_line_3d(p, l), dual_dist_line_point_3d(l, p), 1e-12);
  }
}

TEST(SlopeClasses, Examples) {
  const auto cls = normalize_slope_classes_2d(
      {Line2::slope_intercept(3, 0), Line2::slope_intercept(0, 0.3), Line2::slope_intercept(-1, 0.5)});
  ASSERT_EQ(cls[1].lines.size(), 1u);
  EXPECT_NEAR(cls[1].lines[0].a, 0.5, 1e-12);  // tan(atan 3 - 45 deg)
  ASSERT_EQ(cls[0].lines.size(), 1u);
  EXPECT_DOUBLE_EQ(cls[0].lines[0].a, 0.0);
  ASSERT_EQ(cls[2].lines.size(), 1u);
  EXPECT_NEAR(cls[2].lines[0].a, 0.0, 1e-12);
}

TEST(SlopeClasses, PropertyBoundedAndInvertible) {
  std::vector<Line2> L;
  for (int i = 0; i < 2000; ++i) {
    if (i % 97 == 0) L.push_back(Line2::vertical_at(U(0, 1)));
    else L.push_back(Line2::slope_intercept(std::tan(U(-1.5, 1.5)), U(-1, 1)));
  }
  const auto cls = normalize_slope_classes_2d(L);
  std::size_t total = 0;
  for (const auto& c : cls) {
    total += c.lines.size();
    for (std::size_t k = 0; k < c.lines.size(); ++k) {
      EXPECT_LE(std::abs(c.lines[k].a), 1.0);
      // a point on the original line stays on the rotated one
      const Line2& o = L[c.indices[k]];
      const Point2 on = o.anchor() + 0.3 * o.direction();
      const Point2 back = rotate(rotate(on, c.angle), -c.angle);
      EXPECT_NEAR(back.x, on.x, 1e-12);
      EXPECT_NEAR(back.y, on.y, 1e-12);
      EXPECT_NEAR(dist_point_line_2d(rotate(on, c.angle), c.lines[k]), 0.0, 1e-12);
    }
  }
  EXPECT_EQ(total, L.size());
}

TEST(DirectionClasses, ZAxisIsIdentity) {
  const auto cls = normalize_direction_classes_3d({{0, 0, 1}}, axis_diagonal_net(), {0, 0, 1});
  std::size_t hit = 99;
  for (std::size_t k = 0; k < cls.size(); ++k)
    if (!cls[k].indices.empty()) hit = k;
  ASSERT_EQ(hit, 2u);
  const auto& R = cls[hit].rotation;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(R[i][j], i == j ? 1.0 : 0.0, 1e-15);
}

TEST(DirectionClasses, NetCoversWithinQuarterPi) {
  const auto& net = axis_diagonal_net();
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Point3 v = unit3();
    const double c = std::abs(dot(net[nearest_direction(net, v)], v));
    worst = std::max(worst, std::acos(std::min(1.0, c)));
  }
  EXPECT_LE(worst, std::numbers::pi / 4);
  EXPECT_NEAR(worst * 180 / std::numbers::pi, 27.5, 0.5);  // measured covering radius of this net
}

TEST(DirectionClasses, RotationMapsOntoTarget) {
  std::vector<Point3> vs;
  for (int i = 0; i < 500; ++i) vs.push_back(unit3());
  const auto cls = normalize_direction_classes_3d(vs, axis_diagonal_net(), {0, 0, 1});
  for (const auto& c : cls) {
    const Point3 t = incidence::apply(c.rotation, c.direction);
    EXPECT_NEAR(t.z, 1.0, 1e-12);
    for (auto i : c.indices) {
      Point3 v = incidence::apply(c.rotation, vs[i]);
      if (v.z < 0) v = -1.0 * v;
      EXPECT_GE(v.z, std::cos(std::numbers::pi / 4));
    }
  }
}

TEST(Similarity, MapsAndPreservesIncidence) {
  std::vector<Point2> pts{{-3, 2}, {5, 7}, {1, -1}};
  const auto sim = unit_square_map(pts, 0.0);
  for (const auto& p : pts) {
    const Point2 q = sim.apply(p);
    EXPECT_GE(q.x, -1e-15);
    EXPECT_LE(q.x, 1 + 1e-15);
    EXPECT_GE(q.y, -1e-15);
    EXPECT_LE(q.y, 1 + 1e-15);
    const Point2 b = sim.invert(q);
    EXPECT_NEAR(b.x, p.x, 1e-12);
    EXPECT_NEAR(b.y, p.y, 1e-12);
  }
  const Line2 l = Line2::through(pts[0], pts[1]);
  EXPECT_NEAR(dist_point_line_2d(sim.apply(pts[2]), sim.apply(l)), sim.scale * dist_point_line_2d(pts[2], l), 1e-12);

  const Similarity3 s3{{1, 2, 3}, 0.25};
  const Line3 l3{0.5, 1, -0.2, 2};
  const Point3 p3{4, -1, 2};
  EXPECT_NEAR(dist_point_line_3d(s3.apply(p3), s3.apply(l3)), 0.25 * dist_point_line_3d(p3, l3), 1e-12);
  const Plane3 pl{0.3, -0.7, 1};
  EXPECT_NEAR(dist_point_plane_3d(s3.apply(p3), s3.apply(pl)), 0.25 * dist_point_plane_3d(p3, pl), 1e-12);
}

TEST(Constructors, RejectDegenerate) {
  EXPECT_THROW(Line2::through({0.2, 0.2}, {0.2, 0.2}), ParameterError);
  EXPECT_THROW(Plane3::from_normal({0, 0, 0}, {1, 0, 0}), ParameterError);
  EXPECT_THROW(Line3::from_point_direction({0, 0, 0}, {0, 1, 0}), ParameterError);
  EXPECT_TRUE(Line2::through({0.3, 0}, {0.3, 1}).vertical);
}
