// Copyright 2026 The xclust Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact optimal explainable clusterings for small instances.
//
// A threshold tree's cost only depends on how its cuts partition the
// finite set of relevant points, and every partition a cut can induce is
// induced by a cut at the midpoint of two consecutive distinct projections.
// The search therefore runs over boxes made of grid slots, memoized on the
// tightest slot range around each box's contents.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xclust/core.hpp"

namespace xclust {

struct OracleCaps {
  std::size_t max_centers = 8;      // fixed mode: k
  std::size_t max_grid = 200;       // total candidate cuts over all dimensions
  std::size_t max_points = 30;      // free mode: n
  std::size_t max_free_k = 5;       // free mode: k
  std::size_t max_dim = 6;          // free mode: d
  std::size_t max_states = 2'000'000;
};

/// Midpoints between consecutive distinct projections, per dimension.
struct CandidateGrid {
  std::vector<std::vector<double>> cuts;

  static CandidateGrid from(const std::vector<const PointSet*>& sets) {
    CandidateGrid g;
    const std::size_t d = sets.front()->dim();
    g.cuts.resize(d);
    std::vector<double> proj;
    for (std::size_t i = 0; i < d; ++i) {
      proj.clear();
      for (const PointSet* s : sets)
        for (std::size_t p = 0; p < s->size(); ++p) proj.push_back(s->at(p, i));
      std::sort(proj.begin(), proj.end());
      proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
      for (std::size_t j = 0; j + 1 < proj.size(); ++j) {
        const double mid = proj[j] + (proj[j + 1] - proj[j]) / 2.0;
        // Rounding can land the midpoint on the upper value; step below it.
        g.cuts[i].push_back(mid < proj[j + 1] ? mid : std::nextafter(proj[j + 1], proj[j]));
      }
    }
    return g;
  }

  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& c : cuts) t += c.size();
    return t;
  }

  /// Slot of coordinate x along dimension i: the number of cuts below x.
  std::uint16_t slot(std::size_t i, double x) const {
    return static_cast<std::uint16_t>(std::lower_bound(cuts[i].begin(), cuts[i].end(), x) - cuts[i].begin());
  }
};

struct ExplainableOptimum {
  ThresholdTree tree;
  PointSet centers;  // leaf centers; the given ones in fixed mode
  double cost = 0.0;
};

namespace detail {

// Per-dimension inclusive slot ranges [lo, hi].
using SlotBox = std::vector<std::pair<std::uint16_t, std::uint16_t>>;

class BoxSearch {
 public:
  BoxSearch(CandidateGrid grid, std::size_t max_states)
      : grid_(std::move(grid)), max_states_(max_states) {}

  const CandidateGrid& grid() const { return grid_; }

  std::vector<std::uint16_t> slots_of(const PointSet& ps) const {
    std::vector<std::uint16_t> out(ps.size() * ps.dim());
    for (std::size_t p = 0; p < ps.size(); ++p)
      for (std::size_t i = 0; i < ps.dim(); ++i) out[p * ps.dim() + i] = grid_.slot(i, ps.at(p, i));
    return out;
  }

  SlotBox whole() const {
    SlotBox b(grid_.cuts.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = {0, static_cast<std::uint16_t>(grid_.cuts[i].size())};
    return b;
  }

  static bool inside(const SlotBox& b, const std::uint16_t* s) {
    for (std::size_t i = 0; i < b.size(); ++i)
      if (s[i] < b[i].first || s[i] > b[i].second) return false;
    return true;
  }

  static std::string key(const SlotBox& b, std::size_t extra) {
    std::string k(reinterpret_cast<const char*>(b.data()), b.size() * sizeof(b[0]));
    k.append(reinterpret_cast<const char*>(&extra), sizeof(extra));
    return k;
  }

  void count_state() {
    if (++states_ > max_states_)
      throw CapsExceeded("oracle: more than " + std::to_string(max_states_) + " search states");
  }

 private:
  CandidateGrid grid_;
  std::size_t max_states_;
  std::size_t states_ = 0;
};

// Shrinks b to the tightest slot range around the listed items.
inline SlotBox tighten(const SlotBox& b, const std::vector<const std::uint16_t*>& items) {
  SlotBox t(b.size(), {std::numeric_limits<std::uint16_t>::max(), 0});
  for (const std::uint16_t* s : items)
    for (std::size_t i = 0; i < b.size(); ++i) {
      t[i].first = std::min(t[i].first, s[i]);
      t[i].second = std::max(t[i].second, s[i]);
    }
  return t;
}

struct Choice {
  double value = std::numeric_limits<double>::infinity();
  std::size_t dim = 0;
  std::uint16_t cut = 0;
  std::size_t left_leaves = 0;
};

}  // namespace detail

/// Cheapest threshold tree separating the given centers, with every point
/// charged ||x - c||_q^q to the center c of its leaf.
inline ExplainableOptimum opt_explainable_fixed(const PointSet& points, const Clustering& clustering,
                                                const OracleCaps& caps = {}) {
  clustering.check_compatible(points);
  const PointSet& centers = clustering.centers();
  const int q = clustering.q();
  const std::size_t d = points.dim();
  if (centers.size() > caps.max_centers)
    throw CapsExceeded("oracle: " + std::to_string(centers.size()) + " centers exceed the cap of " +
                       std::to_string(caps.max_centers));
  detail::BoxSearch search(CandidateGrid::from({&points, &centers}), caps.max_states);
  if (search.grid().total() > caps.max_grid)
    throw CapsExceeded("oracle: " + std::to_string(search.grid().total()) +
                       " candidate cuts exceed the cap of " + std::to_string(caps.max_grid));
  const auto pslots = search.slots_of(points);
  const auto cslots = search.slots_of(centers);
  std::unordered_map<std::string, detail::Choice> memo;

  auto solve = [&](auto&& self, const detail::SlotBox& box) -> detail::Choice {
    std::vector<std::size_t> cs;
    std::vector<const std::uint16_t*> items;
    for (std::size_t c = 0; c < centers.size(); ++c)
      if (detail::BoxSearch::inside(box, &cslots[c * d])) {
        cs.push_back(c);
        items.push_back(&cslots[c * d]);
      }
    std::vector<std::size_t> ps;
    for (std::size_t p = 0; p < points.size(); ++p)
      if (detail::BoxSearch::inside(box, &pslots[p * d])) {
        ps.push_back(p);
        items.push_back(&pslots[p * d]);
      }
    detail::Choice best;
    if (cs.size() == 1) {
      best.value = 0.0;
      for (std::size_t p : ps) best.value += q_distance(points[p], centers[cs[0]], q);
      return best;
    }
    const detail::SlotBox tight = detail::tighten(box, items);
    const std::string key = detail::BoxSearch::key(tight, 0);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    search.count_state();
    for (std::size_t i = 0; i < d; ++i) {
      for (std::uint16_t c = tight[i].first; c < tight[i].second; ++c) {
        std::size_t left = 0;
        for (std::size_t ci : cs) left += cslots[ci * d + i] <= c;
        if (left == 0 || left == cs.size()) continue;
        detail::SlotBox lb = tight;
        detail::SlotBox rb = tight;
        lb[i].second = c;
        rb[i].first = static_cast<std::uint16_t>(c + 1);
        const double v = self(self, lb).value + self(self, rb).value;
        if (v < best.value) best = detail::Choice{v, i, c, 0};
      }
    }
    memo.emplace(key, best);
    return best;
  };

  ThresholdTree tree(d);
  auto build = [&](auto&& self, const detail::SlotBox& box, std::size_t node) -> void {
    std::vector<std::size_t> cs;
    for (std::size_t c = 0; c < centers.size(); ++c)
      if (detail::BoxSearch::inside(box, &cslots[c * d])) cs.push_back(c);
    if (cs.size() == 1) {
      tree.set_center(node, cs[0]);
      return;
    }
    const detail::Choice ch = solve(solve, box);
    const auto [l, r] = tree.split(node, ThresholdCut{ch.dim, search.grid().cuts[ch.dim][ch.cut]});
    detail::SlotBox lb = box;
    detail::SlotBox rb = box;
    lb[ch.dim].second = ch.cut;
    rb[ch.dim].first = static_cast<std::uint16_t>(ch.cut + 1);
    self(self, lb, l);
    self(self, rb, r);
  };

  const double cost = solve(solve, search.whole()).value;
  build(build, search.whole(), 0);
  return ExplainableOptimum{std::move(tree), centers, cost};
}

namespace detail {

// Optimal single center for the listed points: lower median per
// coordinate for q = 1, mean for q = 2.
inline std::vector<double> best_center(const PointSet& points, const std::vector<std::size_t>& idx, int q) {
  std::vector<double> c(points.dim());
  std::vector<double> vals(idx.size());
  for (std::size_t i = 0; i < points.dim(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) vals[j] = points.at(idx[j], i);
    if (q == 1) {
      const auto mid = vals.begin() + static_cast<std::ptrdiff_t>((vals.size() - 1) / 2);
      std::nth_element(vals.begin(), mid, vals.end());
      c[i] = *mid;
    } else {
      double s = 0.0;
      for (double v : vals) s += v;
      c[i] = s / static_cast<double>(vals.size());
    }
  }
  return c;
}

inline std::size_t distinct_count(const PointSet& points, std::vector<std::size_t> idx) {
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(points[a].begin(), points[a].end(), points[b].begin(), points[b].end());
  };
  std::sort(idx.begin(), idx.end(), less);
  std::size_t n = idx.empty() ? 0 : 1;
  for (std::size_t j = 1; j < idx.size(); ++j) n += less(idx[j - 1], idx[j]);
  return n;
}

}  // namespace detail

/// Cheapest explainable k-clustering of `points` with free centers: the
/// best tree with exactly k leaves, each leaf served by its optimal center.
inline ExplainableOptimum opt_explainable_free(const PointSet& points, std::size_t k, int q,
                                               const OracleCaps& caps = {}) {
  if (q != 1 && q != 2) throw InvalidInput("oracle: q must be 1 or 2");
  if (k == 0) throw InvalidInput("oracle: k must be positive");
  if (points.size() > caps.max_points)
    throw CapsExceeded("oracle: " + std::to_string(points.size()) + " points exceed the cap of " +
                       std::to_string(caps.max_points));
  if (k > caps.max_free_k)
    throw CapsExceeded("oracle: k = " + std::to_string(k) + " exceeds the cap of " + std::to_string(caps.max_free_k));
  if (points.dim() > caps.max_dim)
    throw CapsExceeded("oracle: dimension " + std::to_string(points.dim()) + " exceeds the cap of " +
                       std::to_string(caps.max_dim));
  std::vector<std::size_t> all(points.size());
  for (std::size_t p = 0; p < all.size(); ++p) all[p] = p;
  if (k > detail::distinct_count(points, all))
    throw InvalidInput("oracle: k exceeds the number of distinct points");

  const std::size_t d = points.dim();
  detail::BoxSearch search(CandidateGrid::from({&points}), caps.max_states);
  if (search.grid().total() > caps.max_grid)
    throw CapsExceeded("oracle: " + std::to_string(search.grid().total()) +
                       " candidate cuts exceed the cap of " + std::to_string(caps.max_grid));
  const auto pslots = search.slots_of(points);
  std::unordered_map<std::string, detail::Choice> memo;

  auto members = [&](const detail::SlotBox& box) {
    std::vector<std::size_t> ps;
    for (std::size_t p = 0; p < points.size(); ++p)
      if (detail::BoxSearch::inside(box, &pslots[p * d])) ps.push_back(p);
    return ps;
  };

  auto solve = [&](auto&& self, const detail::SlotBox& box, std::size_t leaves) -> detail::Choice {
    const auto ps = members(box);
    detail::Choice best;
    if (leaves == 1) {
      const auto c = detail::best_center(points, ps, q);
      best.value = 0.0;
      for (std::size_t p : ps) best.value += q_distance(points[p], c, q);
      return best;
    }
    if (detail::distinct_count(points, ps) < leaves) return best;
    std::vector<const std::uint16_t*> items;
    for (std::size_t p : ps) items.push_back(&pslots[p * d]);
    const detail::SlotBox tight = detail::tighten(box, items);
    const std::string key = detail::BoxSearch::key(tight, leaves);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    search.count_state();
    for (std::size_t i = 0; i < d; ++i) {
      for (std::uint16_t c = tight[i].first; c < tight[i].second; ++c) {
        detail::SlotBox lb = tight;
        detail::SlotBox rb = tight;
        lb[i].second = c;
        rb[i].first = static_cast<std::uint16_t>(c + 1);
        for (std::size_t m = 1; m < leaves; ++m) {
          const double lv = self(self, lb, m).value;
          if (!(lv < best.value)) continue;
          const double v = lv + self(self, rb, leaves - m).value;
          if (v < best.value) best = detail::Choice{v, i, c, m};
        }
      }
    }
    memo.emplace(key, best);
    return best;
  };

  ThresholdTree tree(d);
  std::vector<double> centers;
  std::size_t next_center = 0;
  auto build = [&](auto&& self, const detail::SlotBox& box, std::size_t leaves, std::size_t node) -> void {
    if (leaves == 1) {
      const auto c = detail::best_center(points, members(box), q);
      centers.insert(centers.end(), c.begin(), c.end());
      tree.set_center(node, next_center++);
      return;
    }
    const detail::Choice ch = solve(solve, box, leaves);
    const auto [l, r] = tree.split(node, ThresholdCut{ch.dim, search.grid().cuts[ch.dim][ch.cut]});
    detail::SlotBox lb = box;
    detail::SlotBox rb = box;
    lb[ch.dim].second = ch.cut;
    rb[ch.dim].first = static_cast<std::uint16_t>(ch.cut + 1);
    self(self, lb, ch.left_leaves, l);
    self(self, rb, leaves - ch.left_leaves, r);
  };

  const double cost = solve(solve, search.whole(), k).value;
  build(build, search.whole(), k, 0);
  return ExplainableOptimum{std::move(tree), PointSet(d, std::move(centers)), cost};
}

/// Optimal explainable cost over the reference cost, both with the
/// clustering's own centers.
inline double price_of_explainability(const PointSet& points, const Clustering& clustering,
                                      const OracleCaps& caps = {}) {
  const double ref = cost_q(points, clustering);
  if (!(ref > 0.0)) throw InvalidInput("price of explainability: reference cost is zero");
  return opt_explainable_fixed(points, clustering, caps).cost / ref;
}

}  // namespace xclust
