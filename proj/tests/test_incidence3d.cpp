#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <utility>

#include "incidence/incidence3d.hpp"

using namespace incidence;

namespace {

using PairSet = std::set<std::pair<std::uint32_t, std::uint32_t>>;

template <class Obj, class Dist>
PairSet brute(const std::vector<Point3>& P, const std::vector<Obj>& O, Dist dist, double eps) {
  PairSet s;
  for (std::uint32_t i = 0; i < P.size(); ++i)
    for (std::uint32_t j = 0; j < O.size(); ++j)
      if (dist(P[i], O[j]) <= eps) s.insert({i, j});
  return s;
}

PairSet pairs_of(const Report& r) {
  PairSet s;
  for (const auto& p : r.pairs) s.insert({p.point, p.object});
  return s;
}

struct Gen {
  std::mt19937_64 g;
  explicit Gen(std::uint64_t seed) : g(seed) {}
  double u(double a = 0, double b = 1) { return std::uniform_real_distribution<double>(a, b)(g); }
  Point3 ball() {
    while (true) {
      const Point3 p{u(-1, 1), u(-1, 1), u(-1, 1)};
      if (dot(p, p) <= 1) return p;
    }
  }
  Point3 dir() {
    std::normal_distribution<double> nd;
    return normalized(Point3{nd(g), nd(g), nd(g)});
  }
  std::vector<Point3> balls(std::size_t n) {
    std::vector<Point3> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(ball());
    return v;
  }
  std::vector<Plane3> planes(std::size_t n) {
    std::vector<Plane3> v;
    while (v.size() < n) {
      const Point3 d = dir();
      if (std::abs(d.z) > 1e-6) v.push_back(Plane3::from_normal(ball(), d));
    }
    return v;
  }
  std::vector<Line3> lines(std::size_t n) {
    std::vector<Line3> v;
    while (v.size() < n) {
      const Point3 a = ball(), b = ball();
      if (std::abs(b.x - a.x) > 1e-9) v.push_back(Line3::from_point_direction(a, b - a));
    }
    return v;
  }
};

auto plane_dist = [](Point3 p, const Plane3& x) { return dist_point_plane_3d(p, x); };
auto line_dist = [](Point3 p, const Line3& x) { return dist_point_line_3d(p, x); };
auto circle_dist = [](Point3 p, const Circle3& x) { return dist_point_circle_3d(p, x); };

}  // namespace

// ---------------------------------------------------------------------------
// point-plane

TEST(PointPlane3D, Examples) {
  const Plane3 pl{0.2, -0.4, 0.1};
  const Point3 on{0.3, 0.2, 0.2 * 0.3 - 0.4 * 0.2 + 0.1};
  EXPECT_EQ(report_point_plane_3d({on}, {pl}, 0.01).pairs.size(), 1u);
  const Point3 off = on + 8 * 0.01 * pl.normal();
  EXPECT_TRUE(report_point_plane_3d({off}, {pl}, 0.01, Mode::candidates).pairs.empty());
  EXPECT_THROW(report_point_plane_3d({on}, {pl}, 0.01, Mode::bipartite), ParameterError);
}

TEST(PointPlane3D, MatchesBruteForce500) {
  Gen g(1);
  const auto P = g.balls(500);
  const auto PL = g.planes(500);
  EXPECT_EQ(pairs_of(report_point_plane_3d(P, PL, 0.01)), brute(P, PL, plane_dist, 0.01));
}

TEST(PointPlane3DProperty, Regimes) {
  const std::vector<std::pair<std::size_t, std::size_t>> sizes{{300, 300}, {1500, 60}, {3000, 4}, {4, 3000}, {80, 800}};
  std::uint64_t seed = 10;
  for (auto [m, n] : sizes)
    for (double eps : {0.005, 0.02}) {
      Gen g(seed++);
      const auto P = g.balls(m);
      const auto PL = g.planes(n);
      const auto cand = report_point_plane_3d(P, PL, eps, Mode::candidates);
      EXPECT_EQ(pairs_of(report_point_plane_3d(P, PL, eps)), brute(P, PL, plane_dist, eps)) << m << " " << n;
      EXPECT_LE(cand.metrics.distortion(eps), 7.0);
      EXPECT_LE(cand.metrics.max_multiplicity, 16u);
      EXPECT_EQ(report_point_plane_3d(P, PL, eps, Mode::count).count, cand.metrics.filtered);
    }
}

// ---------------------------------------------------------------------------
// cap directions

TEST(CapNet, SizesFrozen) {
  // measured sizes of the band net; all within 10/eps
  const std::vector<std::pair<double, std::size_t>> want{{0.25, 38}, {0.04, 199}, {0.01, 720}, {0.0025, 2780}};
  for (auto [eps, n] : want) {
    const auto net = build_cap_directions(eps);
    EXPECT_EQ(net.size(), n) << eps;
    EXPECT_LE(static_cast<double>(net.size()), 10.0 / eps);
  }
  EXPECT_THROW(build_cap_directions(0.3), ParameterError);
  EXPECT_THROW(build_cap_directions(0.0), ParameterError);
}

TEST(CapNet, CoverageAndOverlap) {
  Gen g(77);
  for (double eps : {0.25, 0.01, 0.002}) {
    const auto net = build_cap_directions(eps);
    EXPECT_LE(net.opening_half_angle, std::sqrt(eps));
    const double cosa = std::cos(net.opening_half_angle);
    std::vector<Point3> probes{{0, 0, 1}, {0, 0, -1}};
    for (int i = 0; i < 100000; ++i) probes.push_back(g.dir());
    std::size_t worst_overlap = 0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const Point3 v = probes[i];
      EXPECT_GE(dot(net.directions[net.locate(v)], v), cosa - 1e-12);
      if (i < 2000) {
        std::size_t c = 0;
        for (const auto& d : net.directions) c += dot(d, v) >= cosa;
        worst_overlap = std::max(worst_overlap, c);
      }
    }
    EXPECT_LE(worst_overlap, 12u) << eps;
  }
}

TEST(AxisNet, SizeAndOpening) {
  const auto& net = axis_class_net();
  EXPECT_EQ(net.size(), 52u);
  EXPECT_LE(net.opening_half_angle, std::numbers::pi / 12 + 1e-12);
  Gen g(5);
  const double cosa = std::cos(net.opening_half_angle);
  for (int i = 0; i < 100000; ++i) {
    const Point3 v = g.dir();
    EXPECT_GE(std::abs(dot(net.directions[net.locate(v)], v)), cosa - 1e-12);
  }
}

// ---------------------------------------------------------------------------
// congruent pairs

TEST(Congruent3D, Examples) {
  const double r = 0.3, eps = 0.001;
  const std::vector<Point3> P{{0.1, 0.1, 0.1}};
  const Point3 d = normalized(Point3{1, 2, -2});
  EXPECT_EQ(report_congruent_pairs_3d(P, {P[0] + r * d}, r, eps).pairs.size(), 1u);
  const auto far = report_congruent_pairs_3d(P, {P[0] + (r + 10 * eps) * d}, r, eps, Mode::candidates);
  EXPECT_TRUE(far.pairs.empty());
  EXPECT_THROW(report_congruent_pairs_3d(P, P, 0.6, eps), ParameterError);
  EXPECT_THROW(report_congruent_pairs_3d(P, P, 0.3, 0.3), ParameterError);
  EXPECT_THROW(report_congruent_pairs_3d(P, P, 0.3, 0.01, Mode::bipartite), ParameterError);
}

TEST(Congruent3D, MatchesBruteForce400) {
  Gen g(8);
  const auto P = g.balls(400), Q = g.balls(400);
  const double r = 0.25, eps = 0.004;
  const auto shell = [&](Point3 p, Point3 q) { return std::abs(norm(p - q) - r); };
  const auto rep = report_congruent_pairs_3d(P, Q, r, eps);
  EXPECT_EQ(pairs_of(rep), brute(P, Q, shell, eps));
  EXPECT_LE(rep.extras.at("box_long_side"), std::sqrt(eps));
  EXPECT_LE(rep.extras.at("box_short_side"), 3 * eps);
  EXPECT_LE(rep.metrics.max_multiplicity, 16u);
}

TEST(Congruent3DProperty, SeedsAndRadii) {
  std::uint64_t seed = 300;
  for (double r : {0.05, 0.2, 0.5})
    for (double eps : {0.002, 0.01}) {
      if (eps >= r) continue;
      Gen g(seed++);
      const auto P = g.balls(250), Q = g.balls(350);
      const auto shell = [&](Point3 p, Point3 q) { return std::abs(norm(p - q) - r); };
      EXPECT_EQ(pairs_of(report_congruent_pairs_3d(P, Q, r, eps)), brute(P, Q, shell, eps)) << r << " " << eps;
    }
}

// ---------------------------------------------------------------------------
// point-line

TEST(PointLine3D, Examples) {
  const Line3 l{0.4, 0.1, -0.3, 0.2};
  const Point3 on = l.anchor() + 0.25 * l.direction();
  EXPECT_EQ(report_point_line_3d({on}, {l}, 0.01).pairs.size(), 1u);
  const Point3 perp = normalized(cross(l.direction(), Point3{0, 0, 1}));
  const Point3 off = on + 20 * 0.01 * perp;
  EXPECT_NEAR(dist_point_line_3d(off, l), 0.2, 1e-12);
  EXPECT_TRUE(report_point_line_3d({off}, {l}, 0.01, Mode::candidates).pairs.empty());
}

TEST(PointLine3D, MatchesBruteForce400) {
  Gen g(12);
  const auto P = g.balls(400);
  const auto L = g.lines(400);
  EXPECT_EQ(pairs_of(report_point_line_3d(P, L, 0.01)), brute(P, L, line_dist, 0.01));
}

TEST(PointLine3DProperty, Regimes) {
  const std::vector<std::pair<std::size_t, std::size_t>> sizes{{400, 400}, {3000, 40}, {20, 3000}, {1200, 300}};
  std::uint64_t seed = 500;
  for (auto [m, n] : sizes)
    for (double eps : {0.004, 0.02}) {
      Gen g(seed++);
      auto P = g.balls(m);
      const auto L = g.lines(n);
      // plant near-incidences so the filter has work to do
      for (std::size_t i = 0; i < std::min<std::size_t>(n, m / 4); ++i) {
        const Point3 q = L[i].anchor() + g.u(-0.5, 0.5) * L[i].direction();
        if (dot(q, q) <= 1) P[i] = q + 0.7 * eps * g.dir();
      }
      const auto cand = report_point_line_3d(P, L, eps, Mode::candidates);
      EXPECT_EQ(pairs_of(report_point_line_3d(P, L, eps)), brute(P, L, line_dist, eps)) << m << " " << n;
      EXPECT_LE(cand.metrics.distortion(eps), 8 * std::numbers::sqrt2);
      EXPECT_LE(cand.metrics.max_multiplicity, 16u);
    }
}

// ---------------------------------------------------------------------------
// point-circle

TEST(PointCircle3D, Examples) {
  const Circle3 c{{0.1, -0.1, 0.2}, 0.3, normalized(Point3{0.3, 1, 0.5})};
  const Point3 e1 = normalized(cross(c.axis, Point3{1, 0, 0}));
  EXPECT_EQ(report_point_circle_3d({c.center + c.radius * e1}, {c}, 0.3, 0.002).pairs.size(), 1u);
  EXPECT_THROW(report_point_circle_3d({c.center}, {c}, 0.3, 0.03), ParameterError);
  Circle3 other = c;
  other.radius = 0.2;
  EXPECT_THROW(report_point_circle_3d({c.center}, {c, other}, 0.3, 0.002), ParameterError);
}

TEST(PointCircle3D, MatchesBruteForce300) {
  Gen g(31);
  const auto P = g.balls(300);
  std::vector<Circle3> C;
  for (int i = 0; i < 300; ++i) C.push_back({g.ball(), 0.3, g.dir()});
  const auto rep = report_point_circle_3d(P, C, 0.3, 0.002);
  EXPECT_EQ(pairs_of(rep), brute(P, C, circle_dist, 0.002));
  EXPECT_EQ(rep.extras.at("qstar_violations"), 0.0);
}

TEST(PointCircle3DProperty, PlantedNearCircles) {
  std::uint64_t seed = 900;
  for (double r : {0.1, 0.3, 0.5})
    for (double eps : {0.002, 0.005}) {
      Gen g(seed++);
      auto P = g.balls(500);
      std::vector<Circle3> C;
      for (int i = 0; i < 200; ++i) C.push_back({g.ball(), r, g.dir()});
      for (int i = 0; i < 200; ++i) {
        const auto& c = C[i];
        const Point3 e1 = normalized(cross(c.axis, g.dir()));
        const Point3 e2 = cross(c.axis, e1);
        const double t = g.u(0, 2 * std::numbers::pi);
        P[i] = c.center + r * (std::cos(t) * e1 + std::sin(t) * e2) + 0.9 * eps * g.dir();
      }
      const auto rep = report_point_circle_3d(P, C, r, eps);
      EXPECT_EQ(pairs_of(rep), brute(P, C, circle_dist, eps)) << r << " " << eps;
      EXPECT_LE(rep.metrics.max_multiplicity, 16u);
    }
}

TEST(TorusSector, CylinderInvariants) {
  for (double r : {0.1, 0.3})
    for (double eps : {0.001, 0.005}) {
      const auto lay = sector_layout(r, eps);
      EXPECT_DOUBLE_EQ(lay.cyl_radius, 1.5 * eps);
      EXPECT_LE(lay.slab_width, std::sqrt(eps));
      const Circle3 c{{0.1, 0.2, -0.1}, r, normalized(Point3{1, -1, 2})};
      for (std::int64_t j = 0; j < lay.sectors; ++j) {
        const auto s = torus_sector(c, lay, j);
        EXPECT_LE(norm(s.axis_b - s.axis_a), std::sqrt(eps));
        // the eps-neighbourhood of the sector's arc sits inside the cylinder
        for (int k = 0; k <= 20; ++k) {
          const double t = (static_cast<double>(j) + k / 20.0) * lay.theta;
          const Mat3 to = rotation_between({0, 0, 1}, c.axis);
          const Point3 on = c.center + incidence::apply(to, Point3{r * std::cos(t), r * std::sin(t), 0});
          EXPECT_LE(detail::dist_point_segment(on, s.axis_a, s.axis_b), lay.cyl_radius - eps + 1e-12);
        }
      }
    }
}
