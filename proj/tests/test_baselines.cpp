#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "incidence/baselines.hpp"

using namespace incidence;

namespace {

using PairSet = std::set<std::pair<std::uint32_t, std::uint32_t>>;

std::mt19937_64 rng(99);
double U(double a = 0, double b = 1) { return std::uniform_real_distribution<double>(a, b)(rng); }
Point2 sq() { return {U(), U()}; }
Point3 ball() {
  while (true) {
    const Point3 p{U(-1, 1), U(-1, 1), U(-1, 1)};
    if (dot(p, p) <= 1) return p;
  }
}
Point3 dir() {
  std::normal_distribution<double> nd;
  return normalized(Point3{nd(rng), nd(rng), nd(rng)});
}

template <class Pt, class Obj>
PairSet brute(const std::vector<Pt>& P, const std::vector<Obj>& O, double eps) {
  PairSet s;
  for (std::uint32_t i = 0; i < P.size(); ++i)
    for (std::uint32_t j = 0; j < O.size(); ++j)
      if (object_distance(P[i], O[j]) <= eps) s.insert({i, j});
  return s;
}

PairSet pairs_of(const Report& r) {
  PairSet s;
  for (const auto& p : r.pairs) s.insert({p.point, p.object});
  return s;
}

}  // namespace

TEST(Oracle, Trivial) {
  const std::vector<Line2> L{Line2::slope_intercept(0, 0.5)};
  EXPECT_EQ(brute_force_pairs(std::vector<Point2>{}, L, 0.01).count, 0u);
  const auto r = brute_force_pairs(std::vector<Point2>{{0.2, 0.5}, {0.2, 0.9}}, L, 0.01);
  ASSERT_EQ(r.count, 1u);
  EXPECT_EQ(r.pairs[0], (std::pair<std::uint32_t, std::uint32_t>{0, 0}));
}

TEST(Oracle, Budgets) {
  std::vector<Point2> P(5000, Point2{0.5, 0.5});
  std::vector<Line2> L(2001, Line2::slope_intercept(0, 0.5));
  EXPECT_THROW(brute_force_pairs(P, L, 0.01), OracleBudgetExceeded);
  std::vector<Point3> B(311, Point3{0, 0, 0});
  EXPECT_THROW(brute_force_triples(B, {{0.45, 0.4, 0.35}, 0.005, 0.2, 0.2}), OracleBudgetExceeded);
}

TEST(NaiveGrid, LineBoundAndExamples) {
  const double eps = 0.01;
  const Line2 l = Line2::slope_intercept(0.2, 0.3);
  const Point2 nrm = (1.0 / std::hypot(0.2, 1.0)) * Point2{-0.2, 1.0};
  const Point2 on{0.4, 0.38};
  EXPECT_EQ(naive_grid_report(std::vector<Point2>{on}, std::vector<Line2>{l}, eps).pairs.size(), 1u);
  const std::vector<Point2> far{on + 3 * eps * nrm};
  EXPECT_TRUE(naive_grid_report(far, std::vector<Line2>{l}, eps, Mode::candidates).pairs.empty());
}

TEST(NaiveGridProperty, AllObjectKinds) {
  for (double eps : {0.003, 0.01}) {
    std::vector<Point2> P2;
    for (int i = 0; i < 400; ++i) P2.push_back(sq());
    std::vector<Line2> L;
    for (int i = 0; i < 300; ++i) L.push_back(Line2::through(sq(), sq()));
    L.push_back(Line2::vertical_at(0.5));
    const auto rl = naive_grid_report(P2, L, eps, Mode::candidates);
    EXPECT_LE(rl.metrics.distortion(eps), 2 * std::numbers::sqrt2);
    EXPECT_EQ(pairs_of(naive_grid_report(P2, L, eps)), brute(P2, L, eps));

    std::vector<Circle2> C;
    for (int i = 0; i < 300; ++i) C.push_back({sq(), U(0.05, 0.4)});
    EXPECT_EQ(pairs_of(naive_grid_report(P2, C, eps)), brute(P2, C, eps));

    std::vector<Point3> P3;
    for (int i = 0; i < 400; ++i) P3.push_back(ball());
    std::vector<Plane3> PL;
    for (int i = 0; i < 60; ++i) PL.push_back(Plane3::from_normal(ball(), Point3{U(-1, 1), U(-1, 1), 1}));
    EXPECT_EQ(pairs_of(naive_grid_report(P3, PL, eps)), brute(P3, PL, eps));
    std::vector<Sphere3> S;
    for (int i = 0; i < 60; ++i) S.push_back({ball(), U(0.1, 0.4)});
    EXPECT_EQ(pairs_of(naive_grid_report(P3, S, eps)), brute(P3, S, eps));
    std::vector<Line3> L3;
    for (int i = 0; i < 100; ++i) L3.push_back(Line3::from_point_direction(ball(), Point3{1, U(-2, 2), U(-2, 2)}));
    EXPECT_EQ(pairs_of(naive_grid_report(P3, L3, eps)), brute(P3, L3, eps));
    std::vector<Circle3> C3;
    for (int i = 0; i < 60; ++i) C3.push_back({ball(), U(0.1, 0.4), dir()});
    EXPECT_EQ(pairs_of(naive_grid_report(P3, C3, eps)), brute(P3, C3, eps));
  }
}

TEST(NaiveDuality, LinesAndPlanes) {
  for (auto [m, n] : {std::pair{300, 300}, std::pair{2000, 60}, std::pair{40, 1500}}) {
    std::vector<Point2> P;
    for (int i = 0; i < m; ++i) P.push_back(sq());
    std::vector<Line2> L;
    for (int i = 0; i < n; ++i) L.push_back(Line2::through(sq(), sq()));
    EXPECT_EQ(pairs_of(naive_duality_report(P, L, 0.01)), brute(P, L, 0.01)) << m << " " << n;
  }
  for (auto [m, n] : {std::pair{200, 200}, std::pair{1000, 30}, std::pair{30, 600}}) {
    std::vector<Point3> P;
    for (int i = 0; i < m; ++i) P.push_back(ball());
    std::vector<Plane3> PL;
    for (int i = 0; i < n; ++i) PL.push_back(Plane3::from_normal(ball(), Point3{U(-2, 2), U(-2, 2), 1}));
    EXPECT_EQ(pairs_of(naive_duality_report(P, PL, 0.02)), brute(P, PL, 0.02)) << m << " " << n;
  }
}

TEST(NaiveDuality, CongruentPairs) {
  std::vector<Point2> P, Q;
  for (int i = 0; i < 400; ++i) P.push_back(sq());
  for (int i = 0; i < 250; ++i) Q.push_back(sq());
  EXPECT_EQ(pairs_of(naive_duality_congruent_2d(P, Q, 0.2, 0.005)), brute(P, circles_around(Q, 0.2), 0.005));
  EXPECT_EQ(pairs_of(naive_duality_congruent_2d(Q, P, 0.2, 0.005)), brute(Q, circles_around(P, 0.2), 0.005));
  std::vector<Point3> A, B;
  for (int i = 0; i < 300; ++i) A.push_back(ball());
  for (int i = 0; i < 200; ++i) B.push_back(ball());
  EXPECT_EQ(pairs_of(naive_duality_congruent_3d(A, B, 0.3, 0.01)), brute(A, spheres_around(B, 0.3), 0.01));
}
