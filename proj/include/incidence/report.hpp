// SPDX-License-Identifier: Apache-2.0
//
// Result types, run counters and the dedup/filter step shared by every
// reporting algorithm.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geom.hpp"

namespace incidence {

enum class Mode { candidates, filtered, count, bipartite };

enum class Strategy { empty, primal_dual, primal_only, dual_only, roles_swapped };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::empty: return "empty";
    case Strategy::primal_dual: return "primal-dual";
    case Strategy::primal_only: return "primal-only";
    case Strategy::dual_only: return "dual-only";
    case Strategy::roles_swapped: return "roles-swapped";
  }
  return "?";
}

struct DeltaPlan {
  double delta1 = 0.0;
  double delta2 = 0.0;
  Strategy strategy = Strategy::empty;
  bool swapped = false;  // set together with Strategy::roles_swapped
};

struct IncidencePair {
  std::uint32_t point = 0;
  std::uint32_t object = 0;
  double distance = 0.0;
  std::uint32_t subproblem = 0;

  friend bool operator==(const IncidencePair& a, const IncidencePair& b) {
    return a.point == b.point && a.object == b.object;
  }
};

struct Block {
  std::vector<std::uint32_t> points;
  std::vector<std::uint32_t> objects;
};

struct BipartiteCover {
  std::vector<Block> blocks;

  std::vector<std::uint64_t> expand() const {
    std::vector<std::uint64_t> out;
    for (const auto& b : blocks)
      for (auto p : b.points)
        for (auto o : b.objects) out.push_back((std::uint64_t{p} << 32) | o);
    return out;
  }
};

struct RunMetrics {
  std::uint64_t cells_visited = 0;
  std::uint64_t candidates = 0;  // raw emissions before dedup
  std::uint64_t unique_candidates = 0;
  std::uint64_t filtered = 0;
  std::uint64_t duplicates = 0;
  std::uint32_t max_multiplicity = 0;
  double max_distance = 0.0;
  double elapsed_ms = 0.0;

  // max distance over candidates in units of eps, never below 1
  double distortion(double eps) const { return std::max(1.0, max_distance / eps); }
};

struct Report {
  std::vector<IncidencePair> pairs;
  std::uint64_t count = 0;
  BipartiteCover cover;
  RunMetrics metrics;
  std::vector<DeltaPlan> plans;
  std::vector<std::uint64_t> raw;  // sorted raw emissions, candidates mode only
  std::map<std::string, double> extras;
};

inline std::uint64_t pair_key(std::uint32_t p, std::uint32_t o) { return (std::uint64_t{p} << 32) | o; }

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

struct Emission {
  std::uint64_t key;
  std::uint32_t tag;
  bool operator<(const Emission& o) const { return key < o.key || (key == o.key && tag < o.tag); }
};

class Collector {
 public:
  void emit(std::uint32_t p, std::uint32_t o, std::uint32_t tag) { raw_.push_back({pair_key(p, o), tag}); }
  std::vector<Emission>& raw() { return raw_; }
  std::size_t size() const { return raw_.size(); }

 private:
  std::vector<Emission> raw_;
};

// Sorts, dedups, recomputes exact distances and fills the report for `mode`.
// Bipartite mode only fills counters here; the caller owns the cover.
template <class DistFn>
void finalize(Collector& col, Mode mode, double eps, DistFn&& dist, Report& rep) {
  auto& raw = col.raw();
  std::sort(raw.begin(), raw.end());
  auto& m = rep.metrics;
  m.candidates = raw.size();
  if (mode == Mode::candidates) {
    rep.raw.reserve(raw.size());
    for (const auto& e : raw) rep.raw.push_back(e.key);
  }
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t j = i;
    while (j < raw.size() && raw[j].key == raw[i].key) ++j;
    const auto mult = static_cast<std::uint32_t>(j - i);
    m.max_multiplicity = std::max(m.max_multiplicity, mult);
    const auto p = static_cast<std::uint32_t>(raw[i].key >> 32);
    const auto o = static_cast<std::uint32_t>(raw[i].key & 0xffffffffu);
    const double d = dist(p, o);
    ++m.unique_candidates;
    m.max_distance = std::max(m.max_distance, d);
    const bool ok = d <= eps;
    if (ok) ++m.filtered;
    if (mode == Mode::candidates || (mode == Mode::filtered && ok)) rep.pairs.push_back({p, o, d, raw[i].tag});
    i = j;
  }
  m.duplicates = m.candidates - m.unique_candidates;
  rep.count = m.filtered;
}

inline void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw ParameterError("eps must lie in (0, 1/2]");
}

}  // namespace detail
}  // namespace incidence
