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

// Random Thresholds for k-medians.
//
// The textbook loop draws (i, theta) with i uniform over dimensions and
// theta uniform over a bounding interval, and throws the draw away when it
// separates no pair of centers sharing a leaf. A draw is effective iff
// theta lies strictly inside the span of some leaf's centers along i, so
// conditioned on being effective the draw is uniform over the union of
// those open spans. We sample that union directly, which yields the same
// sequence of effective cuts without the rejection loop.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "xclust/core.hpp"
#include "xclust/rng.hpp"
#include "xclust/stats.hpp"

namespace xclust {

struct RtTraceEntry {
  std::size_t step = 0;
  ThresholdCut cut;
  std::vector<std::size_t> leaves_split;  // tree node ids that were split
};

namespace detail {

struct Span {
  double lo;
  double hi;
};

// Union of open intervals, as sorted disjoint spans.
inline std::vector<Span> merge_spans(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
  std::vector<Span> out;
  for (const Span& s : spans) {
    if (!out.empty() && s.lo < out.back().hi)
      out.back().hi = std::max(out.back().hi, s.hi);
    else
      out.push_back(s);
  }
  return out;
}

}  // namespace detail

/// Random Thresholds tree for `centers` (which must be distinct). When
/// `trace` is given, every applied cut is recorded there.
inline ThresholdTree build_tree_rt(const PointSet& centers, Seed seed,
                                   std::vector<RtTraceEntry>* trace = nullptr) {
  if (centers.has_duplicates()) throw InvalidInput("random thresholds: duplicate centers");
  const std::size_t d = centers.dim();
  ThresholdTree tree(d);
  Rng rng(seed);

  struct Leaf {
    std::size_t node;
    std::vector<std::size_t> members;
  };
  std::vector<Leaf> leaves;
  leaves.push_back(Leaf{0, std::vector<std::size_t>(centers.size())});
  for (std::size_t c = 0; c < centers.size(); ++c) leaves[0].members[c] = c;

  struct Candidate {
    std::size_t dim;
    double lo;
    double hi;
  };
  std::vector<Candidate> candidates;
  std::vector<double> weights;

  for (std::size_t step = 0;; ++step) {
    candidates.clear();
    weights.clear();
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<detail::Span> spans;
      for (const Leaf& leaf : leaves) {
        if (leaf.members.size() < 2) continue;
        double lo = centers.at(leaf.members[0], i);
        double hi = lo;
        for (std::size_t c : leaf.members) {
          lo = std::min(lo, centers.at(c, i));
          hi = std::max(hi, centers.at(c, i));
        }
        if (lo < hi) spans.push_back({lo, hi});
      }
      for (const auto& s : detail::merge_spans(std::move(spans))) {
        candidates.push_back({i, s.lo, s.hi});
        weights.push_back(s.hi - s.lo);
      }
    }
    if (candidates.empty()) break;

    ThresholdCut cut;
    for (;;) {
      const Candidate& pick = candidates[rng.weighted_index(weights)];
      cut = ThresholdCut{pick.dim, rng.uniform(pick.lo, pick.hi)};
      if (!(cut.theta > pick.lo && cut.theta < pick.hi)) continue;
      bool on_center = false;
      for (std::size_t c = 0; c < centers.size() && !on_center; ++c)
        on_center = centers.at(c, cut.dim) == cut.theta;
      if (!on_center) break;
    }

    RtTraceEntry entry{step, cut, {}};
    std::vector<Leaf> next;
    next.reserve(leaves.size() + 4);
    for (Leaf& leaf : leaves) {
      std::vector<std::size_t> left;
      std::vector<std::size_t> right;
      for (std::size_t c : leaf.members) (cut.goes_left(centers[c]) ? left : right).push_back(c);
      if (left.empty() || right.empty()) {
        next.push_back(std::move(leaf));
        continue;
      }
      const auto [l, r] = tree.split(leaf.node, cut);
      entry.leaves_split.push_back(leaf.node);
      next.push_back(Leaf{l, std::move(left)});
      next.push_back(Leaf{r, std::move(right)});
    }
    leaves = std::move(next);
    if (trace) trace->push_back(std::move(entry));
  }

  for (const Leaf& leaf : leaves) tree.set_center(leaf.node, leaf.members.front());
  return tree;
}

/// Index of the point of U sharing a leaf with the origin in a Random
/// Thresholds tree for U.
inline std::size_t closest_point_index(const PointSet& U, Seed seed) {
  const ThresholdTree tree = build_tree_rt(U, seed);
  const std::vector<double> origin(U.dim(), 0.0);
  return tree.node(tree.leaf_of(origin)).center;
}

/// One run of the Closest Point Process: ||p_hat||_1.
inline double closest_point_trial(const PointSet& U, Seed seed) {
  return l1_norm(U[closest_point_index(U, seed)]);
}

/// Monte Carlo estimate of f(U) = E ||p_hat||_1 over `trials` runs with
/// seeds derived from (seed, trial).
inline MeanEstimate estimate_alpha(const PointSet& U, std::size_t trials, Seed seed) {
  if (trials == 0) throw InvalidInput("estimate_alpha: trials must be positive");
  if (U.has_duplicates()) throw InvalidInput("random thresholds: duplicate centers");
  const auto values =
      run_trials(trials, [&](std::size_t t) { return closest_point_trial(U, derive_seed(seed, t)); });
  return summarize(values);
}

}  // namespace xclust
