// SPDX-License-Identifier: Apache-2.0
//
// Choice of primal and dual cell sizes for each algorithm.
#pragma once

#include <cmath>
#include <cstddef>

#include "report.hpp"

namespace incidence {

enum class ProblemKind { point_line_2d, congruent_dual_2d, point_circle_2d, point_plane_3d, point_line_3d };

struct ConstraintProfile {
  ProblemKind kind = ProblemKind::point_line_2d;
  double r = 0.0;               // common radius (congruent_dual_2d)
  double r1 = 0.0;              // smallest radius (point_circle_2d)
  double skip_factor = 100.0;   // congruent_dual_2d: skip the primal stage when m/n <= skip_factor * eps / r^2
};

namespace detail {

inline DeltaPlan plan_point_line_2d(double m, double n, double eps) {
  const double d1 = std::sqrt(n * eps / m);
  const double d2 = std::sqrt(m * eps / n);
  if (d2 > 1.0) return {eps, 1.0, Strategy::primal_only, false};
  if (d1 > 1.0) return {1.0, eps, Strategy::dual_only, false};
  if (m > n) return {d2, d1, Strategy::roles_swapped, true};
  return {d1, d2, Strategy::primal_dual, false};
}

// Expects m <= n (the caller flips roles first).
inline DeltaPlan plan_congruent_dual_2d(double m, double n, double eps, double r, double skip_factor) {
  if (m / n <= skip_factor * eps / (r * r)) return {1.0, eps, Strategy::dual_only, false};
  double d1 = std::sqrt(2.0 * n * eps / m);
  double d2 = std::sqrt(m * eps / n);
  if (d1 > r / 10.0) {
    d1 = r / 10.0;
    d2 = std::sqrt(2.0) * eps / d1;
  }
  return {d1, d2, Strategy::primal_dual, false};
}

inline DeltaPlan plan_point_circle_2d(double m, double n, double eps, double r1) {
  const double d1 = std::cbrt(eps * eps * n / m);
  const double d2 = std::cbrt(eps * m / n);
  if (d2 > 1.0) return {eps, 1.0, Strategy::primal_only, false};
  if (d1 > r1) return {1.0, eps, Strategy::dual_only, false};
  return {d1, d2, Strategy::primal_dual, false};
}

inline DeltaPlan plan_point_plane_3d(double m, double n, double eps) {
  const double d1 = std::pow(n * eps * eps / m, 0.25);
  const double d2 = std::pow(m * eps * eps / n, 0.25);
  if (d2 > 1.0) return {eps, 1.0, Strategy::primal_only, false};
  if (d1 > 1.0) return {1.0, eps, Strategy::dual_only, false};
  if (m > n) return {d2, d1, Strategy::roles_swapped, true};
  return {d1, d2, Strategy::primal_dual, false};
}

inline DeltaPlan plan_point_line_3d(double m, double n, double eps) {
  const double d1 = std::cbrt(eps * eps * n / m);
  const double d2 = std::cbrt(eps * m / n);
  if (d2 > 1.0 / std::sqrt(2.0)) return {eps, 1.0, Strategy::primal_only, false};
  if (d1 > 1.0) return {1.0, eps, Strategy::dual_only, false};
  return {d1, d2, Strategy::primal_dual, false};
}

}  // namespace detail

// m points, n objects.
inline DeltaPlan plan_deltas(std::size_t m, std::size_t n, double eps, const ConstraintProfile& profile = {}) {
  detail::check_eps(eps);
  if (m == 0 || n == 0) return {};
  const auto dm = static_cast<double>(m), dn = static_cast<double>(n);
  switch (profile.kind) {
    case ProblemKind::point_line_2d: return detail::plan_point_line_2d(dm, dn, eps);
    case ProblemKind::congruent_dual_2d: {
      if (dm > dn) {
        DeltaPlan p = detail::plan_congruent_dual_2d(dn, dm, eps, profile.r, profile.skip_factor);
        p.swapped = true;
        return p;
      }
      return detail::plan_congruent_dual_2d(dm, dn, eps, profile.r, profile.skip_factor);
    }
    case ProblemKind::point_circle_2d: return detail::plan_point_circle_2d(dm, dn, eps, profile.r1);
    case ProblemKind::point_plane_3d: return detail::plan_point_plane_3d(dm, dn, eps);
    case ProblemKind::point_line_3d: return detail::plan_point_line_3d(dm, dn, eps);
  }
  return {};
}

}  // namespace incidence
