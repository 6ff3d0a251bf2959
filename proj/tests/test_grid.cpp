#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "incidence/grid.hpp"

using namespace incidence;

namespace {

std::mt19937_64 rng(5);
double U(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

UniformGrid<2> unit4() { return build_grid<2>({{0, 0}, {1, 1}}, {0.25, 0.25}); }

template <std::size_t D>
std::set<CellKey<D>> as_set(const std::vector<CellKey<D>>& v) {
  return {v.begin(), v.end()};
}

// rasterization oracle: cells containing sampled points of the object
template <std::size_t D, class Sample>
std::set<CellKey<D>> sampled_cells(const UniformGrid<D>& g, int samples, Sample sample) {
  std::set<CellKey<D>> s;
  for (int i = 0; i <= samples; ++i) {
    std::array<double, D> p;
    if (!sample(static_cast<double>(i) / samples, p)) continue;
    bool inside = true;
    for (std::size_t a = 0; a < D; ++a) inside = inside && p[a] >= g.origin[a] && p[a] <= g.upper(a);
    if (inside) s.insert(g.locate(p));
  }
  return s;
}

}  // namespace

TEST(BuildGrid, Counts) {
  EXPECT_EQ(unit4().counts, (std::array<std::int64_t, 2>{4, 4}));
  EXPECT_EQ((build_grid<2>({{0, 0}, {1, 1}}, {0.3, 0.3}).counts), (std::array<std::int64_t, 2>{4, 4}));
  const double d1 = 0.1, d2 = 0.1;
  const auto g = build_grid<2>({{-1, -d1}, {1, d1}}, {2 * d2, 2 * d1 * d2});
  EXPECT_EQ(g.counts, (std::array<std::int64_t, 2>{10, 10}));
  EXPECT_THROW(build_grid<2>({{0, 0}, {1, 1}}, {0.0, 0.1}), ParameterError);
}

TEST(Locate, HalfOpenAndClamp) {
  const auto g = unit4();
  EXPECT_EQ(g.locate({0, 0}), (CellKey<2>{0, 0}));
  EXPECT_EQ(g.locate({0.25, 0.5}), (CellKey<2>{1, 2}));
  EXPECT_EQ(g.locate({1, 1}), (CellKey<2>{3, 3}));
  EXPECT_THROW(g.locate({1.5, 0.2}), OutOfDomain);
}

TEST(Locate, CenterRoundTrip) {
  const auto g = build_grid<3>({{-1, -0.2, 0.1}, {1, 0.3, 0.8}}, {0.13, 0.07, 0.05});
  for (std::int64_t i = 0; i < g.counts[0]; ++i)
    for (std::int64_t j = 0; j < g.counts[1]; ++j)
      for (std::int64_t k = 0; k < g.counts[2]; ++k) {
        const CellKey<3> key{i, j, k};
        EXPECT_EQ(g.locate(g.center(key)), key);
      }
}

TEST(PackKey, OrderAndDistinct) {
  std::set<std::uint64_t> seen;
  for (int i = -3; i <= 3; ++i)
    for (int j = -3; j <= 3; ++j) EXPECT_TRUE(seen.insert(pack_key(i, j)).second);
  EXPECT_LT(pack_key(0, 5), pack_key(1, 0));
  EXPECT_LT(pack_key(2, -1), pack_key(2, 0));
}

TEST(Buckets, PackedAndMap) {
  PackedBuckets pb;
  pb.add(pack_key(1, 2), 7);
  pb.add(pack_key(0, 0), 1);
  pb.add(pack_key(1, 2), 3);
  pb.finalize();
  std::vector<std::uint32_t> got;
  pb.for_each_in(pack_key(1, 2), [&](std::uint32_t i) { got.push_back(i); });
  EXPECT_EQ(got, (std::vector<std::uint32_t>{3, 7}));
  got.clear();
  pb.for_each_in(pack_key(5, 5), [&](std::uint32_t i) { got.push_back(i); });
  EXPECT_TRUE(got.empty());

  BucketMap<2> bm;
  bm.insert({1, 1}, 4);
  bm.insert({1, 1}, 5);
  bm.insert({0, 2}, 6);
  EXPECT_EQ(bm.size(), 2u);
  EXPECT_EQ(bm.total_multiplicity(), 3u);
  ASSERT_NE(bm.find({1, 1}), nullptr);
  EXPECT_EQ(bm.find({1, 1})->size(), 2u);
  EXPECT_EQ(bm.find({3, 3}), nullptr);
}

TEST(LineCrossing, BoundaryAndDiagonal) {
  const auto g = unit4();
  // y = 0 lies on the domain edge: only the bottom row exists to include
  EXPECT_EQ(cells_crossed_by_line_2d(Line2::slope_intercept(0, 0), g).size(), 4u);
  // y = 0.5 sits on an interior row boundary: both adjacent rows
  EXPECT_EQ(cells_crossed_by_line_2d(Line2::slope_intercept(0, 0.5), g).size(), 8u);
  const auto diag = cells_crossed_by_line_2d(Line2::slope_intercept(1, 0), g);
  EXPECT_LE(diag.size(), 2u * 4 + 2);
  const auto oracle = sampled_cells<2>(g, 100000, [](double t, std::array<double, 2>& p) {
    p = {t, t};
    return true;
  });
  for (const auto& k : oracle) EXPECT_TRUE(as_set(diag).count(k));
  EXPECT_TRUE(cells_crossed_by_line_2d(Line2::slope_intercept(1, 3), g).empty());
}

TEST(LineCrossingProperty, CompleteAndTight) {
  const auto g = build_grid<2>({{0, 0}, {1, 1}}, {0.07, 0.05});
  for (int it = 0; it < 200; ++it) {
    const Line2 l = it % 25 == 0 ? Line2::vertical_at(U(0, 1)) : Line2::slope_intercept(U(-4, 4), U(-1, 2));
    const auto got = as_set(cells_crossed_by_line_2d(l, g));
    const auto want = sampled_cells<2>(g, 20000, [&](double t, std::array<double, 2>& p) {
      const Point2 q = l.vertical ? Point2{l.x0, t} : Point2{-3 + 6 * t, l.a * (-3 + 6 * t) + l.b};
      p = {q.x, q.y};
      return true;
    });
    for (const auto& k : want) EXPECT_TRUE(got.count(k));
    const double diag = std::hypot(0.07, 0.05);
    for (const auto& k : got) {
      const auto c = g.center(k);
      EXPECT_LE(dist_point_line_2d({c[0], c[1]}, l), 0.5 * diag + 1e-12);
    }
  }
}

TEST(PlaneCrossing, Trio) {
  const auto g = build_grid<3>({{0, 0, 0}, {1, 1, 1}}, {0.25, 0.25, 0.25});
  EXPECT_EQ(cells_crossed_by_plane_3d({0, 0, 0}, g).size(), 16u);
  EXPECT_TRUE(cells_crossed_by_plane_3d({0, 0, 5}, g).empty());
  const Plane3 pl{0.6, -0.3, 0.4};
  const auto got = as_set(cells_crossed_by_plane_3d(pl, g));
  std::set<CellKey<3>> want;
  for (int i = 0; i <= 1000; ++i)
    for (int j = 0; j <= 1000; ++j) {
      const double x = i / 1000.0, y = j / 1000.0, z = pl.a * x + pl.b * y + pl.c;
      if (z >= 0 && z <= 1) want.insert(g.locate({x, y, z}));
    }
  for (const auto& k : want) EXPECT_TRUE(got.count(k));
  for (const auto& k : got) {
    const auto c = g.center(k);
    EXPECT_LE(dist_point_plane_3d({c[0], c[1], c[2]}, pl), 0.5 * std::sqrt(3.0) * 0.25 + 1e-12);
  }
}

TEST(CircleCrossing, RingAndTiny) {
  const auto g = build_grid<2>({{0, 0}, {1, 1}}, {0.1, 0.1});
  const Circle2 c{{0.5, 0.5}, 0.3};
  const auto got = as_set(cells_crossed_by_circle_2d(c, g));
  const auto want = sampled_cells<2>(g, 100000, [&](double t, std::array<double, 2>& p) {
    const double th = 2 * std::numbers::pi * t;
    p = {0.5 + 0.3 * std::cos(th), 0.5 + 0.3 * std::sin(th)};
    return true;
  });
  for (const auto& k : want) EXPECT_TRUE(got.count(k));
  for (const auto& k : got) {
    const auto cc = g.center(k);
    EXPECT_LE(dist_point_circle_2d({cc[0], cc[1]}, c), 0.5 * std::sqrt(2.0) * 0.1 + 1e-12);
  }
  const auto tiny = cells_crossed_by_circle_2d({{0.55, 0.55}, 0.01}, g);
  EXPECT_EQ(tiny.size(), 1u);
  EXPECT_EQ(tiny[0], (CellKey<2>{5, 5}));
  EXPECT_TRUE(cells_crossed_by_circle_2d({{3, 3}, 0.2}, g).empty());
}

TEST(PolarCrossing, MatchesAngularSampling) {
  PolarGrid pg{{0.5, 0.5}, build_grid<2>({{0, 0}, {1.5, 2 * std::numbers::pi}}, {0.05, 2 * std::numbers::pi / 60})};
  const Circle2 cp{{0.6, 0.45}, 0.4};
  const auto got = as_set(cells_crossed_by_dual_circle_polar(cp, pg));
  std::set<CellKey<2>> want;
  for (int i = 0; i < 100000; ++i) {
    const double th = 2 * std::numbers::pi * i / 100000.0;
    want.insert(pg.locate(cp.center + cp.radius * Point2{std::cos(th), std::sin(th)}));
  }
  for (const auto& k : want) EXPECT_TRUE(got.count(k));
  EXPECT_THROW(cells_crossed_by_dual_circle_polar({{2, 2}, 0.1}, pg), ParameterError);
}

TEST(Line3Crossing, MatchesSampling) {
  const auto g = build_grid<3>({{-1, -1, -1}, {1, 1, 1}}, {0.2, 0.15, 0.1});
  for (int it = 0; it < 50; ++it) {
    const Line3 l{U(-2, 2), U(-0.5, 0.5), U(-2, 2), U(-0.5, 0.5)};
    const auto got = as_set(cells_crossed_by_line_3d(l, g));
    std::set<CellKey<3>> want;
    for (int i = 0; i <= 200000; ++i) {
      const double x = -1 + 2.0 * i / 200000;
      const Point3 p = l.anchor() + x * l.direction();
      if (std::abs(p.y) <= 1 && std::abs(p.z) <= 1) want.insert(g.locate({p.x, p.y, p.z}));
    }
    for (const auto& k : want) EXPECT_TRUE(got.count(k));
  }
  EXPECT_TRUE(cells_crossed_by_line_3d({0, 5, 0, 5}, g).empty());
}

TEST(SphereCrossing, MatchesSampling) {
  const auto g = build_grid<3>({{-1, -1, -1}, {1, 1, 1}}, {0.1, 0.1, 0.1});
  const Sphere3 s{{0.1, -0.2, 0.05}, 0.45};
  const auto got = as_set(cells_crossed_by_sphere_3d(s, g));
  std::set<CellKey<3>> want;
  for (int i = 0; i <= 600; ++i)
    for (int j = 0; j <= 600; ++j) {
      const double phi = std::numbers::pi * i / 600, lam = 2 * std::numbers::pi * j / 600;
      const Point3 p = s.center + s.radius * Point3{std::sin(phi) * std::cos(lam), std::sin(phi) * std::sin(lam),
                                                    std::cos(phi)};
      want.insert(g.locate({p.x, p.y, p.z}));
    }
  for (const auto& k : want) EXPECT_TRUE(got.count(k));
}

TEST(Neighbors, Counts) {
  const auto g = unit4();
  EXPECT_EQ(neighbors<2>({1, 1}, {false, true}, g).size(), 2u);
  EXPECT_EQ(neighbors<2>({1, 1}, {true, true}, g).size(), 8u);
  EXPECT_EQ(neighbors<2>({0, 0}, {true, true}, g).size(), 3u);
  const auto g3 = build_grid<3>({{0, 0, 0}, {1, 1, 1}}, {0.25, 0.25, 0.25});
  EXPECT_EQ(neighbors<3>({1, 1, 1}, {false, true, true}, g3).size(), 8u);
}
