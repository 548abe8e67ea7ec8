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

// Threshold trees for k-means with solo and bulk cuts.
//
// Cuts are drawn from D2(V): pick a gap (i, [a, b]) between consecutive
// projections of V with probability (b - a)^2 / L2(V), then theta from the
// triangular density 4 min(theta - a, b - theta) / (b - a)^2. A node whose
// stretch is at least |U|/ln^2|U| takes a single cut conditioned on
// splitting its max-stretch far pair (solo); otherwise it keeps drawing
// cuts that split no close pair until every far pair is split (bulk).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "xclust/core.hpp"
#include "xclust/rng.hpp"

namespace xclust {

/// Gaps shorter than this fraction of the diameter are dropped from tables.
inline constexpr double kIntervalFloor = 1e-12;

struct IntervalEntry {
  std::size_t dim = 0;
  double a = 0.0;
  double b = 0.0;
  double weight = 0.0;  // (b - a)^2
};

struct IntervalTable {
  std::size_t dim = 0;
  std::vector<IntervalEntry> entries;
  double total = 0.0;  // L2
  /// Sorted distinct projections per dimension.
  std::vector<std::vector<double>> projections;
};

/// Delta(V): largest squared distance between two points of V.
inline double squared_diameter(const PointSet& V) {
  double best = 0.0;
  for (std::size_t x = 0; x < V.size(); ++x)
    for (std::size_t y = x + 1; y < V.size(); ++y) best = std::max(best, sq_distance(V[x], V[y]));
  return best;
}

inline IntervalTable interval_table(const PointSet& V) {
  IntervalTable t;
  t.dim = V.dim();
  t.projections.resize(V.dim());
  const double floor = kIntervalFloor * std::sqrt(squared_diameter(V));
  for (std::size_t i = 0; i < V.dim(); ++i) {
    auto& proj = t.projections[i];
    for (std::size_t p = 0; p < V.size(); ++p) proj.push_back(V.at(p, i));
    std::sort(proj.begin(), proj.end());
    proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
    for (std::size_t g = 0; g + 1 < proj.size(); ++g) {
      const double len = proj[g + 1] - proj[g];
      if (len <= floor) continue;
      t.entries.push_back({i, proj[g], proj[g + 1], len * len});
      t.total += len * len;
    }
  }
  return t;
}

/// d2(x, y): squared lengths of the gaps that x_i, y_i and the projections
/// of V strictly between them cut [min(x_i, y_i), max(x_i, y_i)] into,
/// summed over dimensions.
inline double pseudo_distance(const PointSet& V, Point x, Point y) {
  double total = 0.0;
  std::vector<double> cuts;
  for (std::size_t i = 0; i < V.dim(); ++i) {
    const double lo = std::min(x[i], y[i]);
    const double hi = std::max(x[i], y[i]);
    if (lo == hi) continue;
    cuts.assign({lo, hi});
    for (std::size_t p = 0; p < V.size(); ++p) {
      const double v = V.at(p, i);
      if (v > lo && v < hi) cuts.push_back(v);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t g = 0; g + 1 < cuts.size(); ++g) {
      const double len = cuts[g + 1] - cuts[g];
      total += len * len;
    }
  }
  return total;
}

struct StretchReport {
  double value = 0.0;     // s(V)
  std::size_t p = 0;      // far pair attaining it, p < q
  std::size_t q = 0;
  double diameter = 0.0;  // Delta(V), squared
};

inline bool is_far(double sq_dist, double delta) { return sq_dist >= delta / 2.0; }

inline bool is_close(double sq_dist, double delta, std::size_t k_global) {
  const double k4 = std::pow(static_cast<double>(k_global), 4);
  return sq_dist < delta / k4;
}

/// s(V): the largest ||x - y||^2 / d2(x, y) over far pairs, first pair in
/// lexicographic index order on ties.
inline StretchReport stretch(const PointSet& V) {
  StretchReport r;
  r.diameter = squared_diameter(V);
  if (V.size() < 2 || r.diameter <= 0.0)
    throw InvalidInput("stretch: needs at least two distinct points");
  bool found = false;
  for (std::size_t x = 0; x < V.size(); ++x) {
    for (std::size_t y = x + 1; y < V.size(); ++y) {
      const double sq = sq_distance(V[x], V[y]);
      if (!is_far(sq, r.diameter)) continue;
      const double s = sq / pseudo_distance(V, V[x], V[y]);
      if (!found || s > r.value) {
        r = StretchReport{s, x, y, r.diameter};
        found = true;
      }
    }
  }
  return r;
}

/// Triangular draw on (a, b) with peak at the midpoint, by inverse CDF.
inline double sample_triangular(double a, double b, Rng& rng) {
  for (;;) {
    const double u = rng.uniform();
    const double theta = u < 0.5 ? a + (b - a) * std::sqrt(u / 2.0)
                                 : b - (b - a) * std::sqrt((1.0 - u) / 2.0);
    if (theta > a && theta < b) return theta;
  }
}

/// Density of the in-interval distribution at theta.
inline double triangular_pdf(double a, double b, double theta) {
  if (theta < a || theta > b) return 0.0;
  return 4.0 / ((b - a) * (b - a)) * std::min(theta - a, b - theta);
}

/// Draw from `table` restricted to entries with keep[e] (all if empty).
inline ThresholdCut sample_table(const IntervalTable& table, const std::vector<bool>& keep, Rng& rng) {
  std::vector<double> w(table.entries.size());
  double total = 0.0;
  for (std::size_t e = 0; e < w.size(); ++e) {
    w[e] = (keep.empty() || keep[e]) ? table.entries[e].weight : 0.0;
    total += w[e];
  }
  if (!(total > 0.0)) throw InvalidInput("D2 sampling: no interval carries positive weight");
  const IntervalEntry& pick = table.entries[rng.weighted_index(w)];
  return ThresholdCut{pick.dim, sample_triangular(pick.a, pick.b, rng)};
}

inline ThresholdCut sample_d2(const IntervalTable& table, Rng& rng) { return sample_table(table, {}, rng); }

inline ThresholdCut sample_d2(const IntervalTable& table, Seed seed) {
  Rng rng(seed);
  return sample_d2(table, rng);
}

/// Entries of the table of V not contained in the projection span of any
/// close pair (squared distance < Delta(V)/k_global^4).
inline std::vector<bool> d2_prime_support(const PointSet& V, const IntervalTable& table,
                                          std::size_t k_global) {
  const double delta = squared_diameter(V);
  std::vector<bool> keep(table.entries.size(), true);
  for (std::size_t x = 0; x < V.size(); ++x) {
    for (std::size_t y = x + 1; y < V.size(); ++y) {
      if (!is_close(sq_distance(V[x], V[y]), delta, k_global)) continue;
      for (std::size_t e = 0; e < keep.size(); ++e) {
        const IntervalEntry& en = table.entries[e];
        const double lo = std::min(V.at(x, en.dim), V.at(y, en.dim));
        const double hi = std::max(V.at(x, en.dim), V.at(y, en.dim));
        if (lo <= en.a && en.b <= hi) keep[e] = false;
      }
    }
  }
  return keep;
}

inline double kept_weight(const IntervalTable& table, const std::vector<bool>& keep) {
  double total = 0.0;
  for (std::size_t e = 0; e < table.entries.size(); ++e)
    if (keep[e]) total += table.entries[e].weight;
  return total;
}

/// L2'(V).
inline double l2_prime(const PointSet& V, std::size_t k_global) {
  const IntervalTable t = interval_table(V);
  return kept_weight(t, d2_prime_support(V, t, k_global));
}

inline ThresholdCut sample_d2_prime(const PointSet& V, std::size_t k_global, Rng& rng) {
  const IntervalTable t = interval_table(V);
  const auto keep = d2_prime_support(V, t, k_global);
  if (!(kept_weight(t, keep) > 0.0))
    throw InvalidInput("D2' sampling: every interval lies inside a close pair (L2' = 0)");
  return sample_table(t, keep, rng);
}

inline ThresholdCut sample_d2_prime(const PointSet& V, std::size_t k_global, Seed seed) {
  Rng rng(seed);
  return sample_d2_prime(V, k_global, rng);
}

/// Entries of the table lying between the projections of points p and q.
inline std::vector<bool> pair_support(const PointSet& V, const IntervalTable& table, std::size_t p,
                                      std::size_t q) {
  std::vector<bool> keep(table.entries.size(), false);
  for (std::size_t e = 0; e < keep.size(); ++e) {
    const IntervalEntry& en = table.entries[e];
    const double lo = std::min(V.at(p, en.dim), V.at(q, en.dim));
    const double hi = std::max(V.at(p, en.dim), V.at(q, en.dim));
    keep[e] = lo <= en.a && en.b <= hi;
  }
  return keep;
}

/// D2(V) conditioned on separating V[p] from V[q].
inline ThresholdCut sample_d2_doubleprime(const PointSet& V, std::pair<std::size_t, std::size_t> pair,
                                          Rng& rng) {
  const auto [p, q] = pair;
  if (p >= V.size() || q >= V.size() || p == q)
    throw InvalidInput("D2'' sampling: the pair must be two distinct points of V");
  const IntervalTable t = interval_table(V);
  const auto keep = pair_support(V, t, p, q);
  if (!(kept_weight(t, keep) > 0.0))
    throw InvalidInput("D2'' sampling: conditioning event has probability zero");
  return sample_table(t, keep, rng);
}

inline ThresholdCut sample_d2_doubleprime(const PointSet& V, std::pair<std::size_t, std::size_t> pair,
                                          Seed seed) {
  Rng rng(seed);
  return sample_d2_doubleprime(V, pair, rng);
}

/// A group of centers sharing a region, with a caller-defined handle.
struct Piece {
  std::size_t handle = 0;
  std::vector<std::size_t> members;
};

/// Splits every piece whose members `cut` separates; split(handle, cut)
/// returns the handles of the two halves. Returns whether anything split.
template <class SplitFn>
bool apply_cut(std::vector<Piece>& pieces, const PointSet& pts, ThresholdCut cut, SplitFn&& split) {
  bool any = false;
  std::vector<Piece> next;
  next.reserve(pieces.size() + 2);
  for (Piece& piece : pieces) {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t m : piece.members) (cut.goes_left(pts[m]) ? left : right).push_back(m);
    if (left.empty() || right.empty()) {
      next.push_back(std::move(piece));
      continue;
    }
    any = true;
    const auto [l, r] = split(piece.handle, cut);
    next.push_back(Piece{l, std::move(left)});
    next.push_back(Piece{r, std::move(right)});
  }
  pieces = std::move(next);
  return any;
}

struct BulkOutcome {
  std::size_t sampled = 0;                // draws from D2', effective or not
  std::vector<ThresholdCut> applied;      // draws that split some piece
  std::vector<Piece> pieces;              // final partition of V's indices
};

inline constexpr std::size_t kMaxBulkDraws = 10'000'000;

/// Draws from D2'(V) until all far pairs of V lie in different pieces.
/// Piece members are indices into V.
template <class SplitFn>
BulkOutcome bulk_cuts(const PointSet& V, std::size_t k_global, Rng& rng, std::size_t root_handle,
                      SplitFn&& split) {
  const double delta = squared_diameter(V);
  std::vector<std::pair<std::size_t, std::size_t>> far;
  for (std::size_t x = 0; x < V.size(); ++x)
    for (std::size_t y = x + 1; y < V.size(); ++y)
      if (is_far(sq_distance(V[x], V[y]), delta)) far.emplace_back(x, y);

  const IntervalTable t = interval_table(V);
  const auto keep = d2_prime_support(V, t, k_global);
  if (!(kept_weight(t, keep) > 0.0))
    throw InvalidInput("bulk cuts: every interval lies inside a close pair (L2' = 0)");

  BulkOutcome out;
  out.pieces.push_back(Piece{root_handle, std::vector<std::size_t>(V.size())});
  std::iota(out.pieces[0].members.begin(), out.pieces[0].members.end(), std::size_t{0});
  std::vector<std::size_t> piece_of(V.size(), 0);

  auto all_far_split = [&] {
    for (std::size_t pi = 0; pi < out.pieces.size(); ++pi)
      for (std::size_t m : out.pieces[pi].members) piece_of[m] = pi;
    return std::all_of(far.begin(), far.end(),
                       [&](const auto& pr) { return piece_of[pr.first] != piece_of[pr.second]; });
  };
  while (!all_far_split()) {
    if (out.sampled >= kMaxBulkDraws) throw InvariantViolation("bulk cuts: draw limit reached");
    const ThresholdCut cut = sample_table(t, keep, rng);
    ++out.sampled;
    if (apply_cut(out.pieces, V, cut, split)) out.applied.push_back(cut);
  }
  return out;
}

inline BulkOutcome bulk_cuts(const PointSet& V, std::size_t k_global, Rng& rng) {
  std::size_t next = 1;
  return bulk_cuts(V, k_global, rng, 0, [&](std::size_t, ThresholdCut) {
    next += 2;
    return std::pair<std::size_t, std::size_t>{next - 2, next - 1};
  });
}

/// Node of the compressed tree, with the quantities the analysis refers
/// to recorded at construction time.
struct CompressedNode {
  enum class Kind { kLeaf, kSolo, kBulk };

  Kind kind = Kind::kLeaf;
  std::vector<std::size_t> centers;        // global center indices in this region
  std::vector<ThresholdCut> cuts;          // cuts applied at this node, in order
  std::vector<std::size_t> children;       // compressed node ids
  std::size_t parent = ThresholdTree::npos;
  std::size_t flat_node = 0;               // matching node in the binary tree
  Box box;

  double delta = 0.0;       // Delta(U_v)
  double l2 = 0.0;          // L2(U_v)
  double l2_prime = 0.0;    // L2'(U_v)
  double stretch = 0.0;     // s(U_v)
  std::size_t sampled_cuts = 0;
  std::size_t min_side = 0;  // solo nodes: smaller side of the cut
};

struct CompressedTree {
  std::vector<CompressedNode> nodes;  // node 0 is the root

  std::size_t count(CompressedNode::Kind kind) const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [&](const CompressedNode& n) { return n.kind == kind; }));
  }
};

struct KMeansTrees {
  ThresholdTree tree;
  CompressedTree compressed;
};

/// Solo-cut threshold |U|/ln^2|U|.
inline double solo_threshold(std::size_t m) {
  const double l = std::log(static_cast<double>(m));
  return static_cast<double>(m) / (l * l);
}

inline KMeansTrees build_tree_kmeans(const PointSet& centers, Seed seed) {
  if (centers.has_duplicates()) throw InvalidInput("k-means tree: duplicate centers");
  const std::size_t k = centers.size();
  Rng rng(seed);
  KMeansTrees out{ThresholdTree(centers.dim()), {}};
  ThresholdTree& tree = out.tree;
  auto& nodes = out.compressed.nodes;

  auto split_flat = [&](std::size_t handle, ThresholdCut cut) { return tree.split(handle, cut); };

  std::vector<std::size_t> todo;
  nodes.push_back(CompressedNode{});
  nodes[0].centers.resize(k);
  std::iota(nodes[0].centers.begin(), nodes[0].centers.end(), std::size_t{0});
  nodes[0].flat_node = 0;
  todo.push_back(0);

  while (!todo.empty()) {
    const std::size_t id = todo.back();
    todo.pop_back();
    nodes[id].box = tree.box(nodes[id].flat_node);
    if (nodes[id].centers.size() == 1) {
      nodes[id].kind = CompressedNode::Kind::kLeaf;
      tree.set_center(nodes[id].flat_node, nodes[id].centers.front());
      continue;
    }
    const std::vector<std::size_t> members = nodes[id].centers;
    const PointSet V = centers.subset(members);
    const IntervalTable table = interval_table(V);
    const StretchReport sr = stretch(V);
    nodes[id].delta = sr.diameter;
    nodes[id].l2 = table.total;
    nodes[id].l2_prime = kept_weight(table, d2_prime_support(V, table, k));
    nodes[id].stretch = sr.value;

    std::vector<Piece> pieces;
    if (sr.value >= solo_threshold(members.size())) {
      nodes[id].kind = CompressedNode::Kind::kSolo;
      ThresholdCut cut;
      do {
        cut = sample_d2_doubleprime(V, {sr.p, sr.q}, rng);
      } while (!cut.separates(V[sr.p], V[sr.q]));
      pieces.push_back(Piece{nodes[id].flat_node, std::vector<std::size_t>(members.size())});
      std::iota(pieces[0].members.begin(), pieces[0].members.end(), std::size_t{0});
      apply_cut(pieces, V, cut, split_flat);
      nodes[id].cuts.push_back(cut);
      nodes[id].sampled_cuts = 1;
      nodes[id].min_side = std::min(pieces[0].members.size(), pieces[1].members.size());
    } else {
      nodes[id].kind = CompressedNode::Kind::kBulk;
      BulkOutcome bulk = bulk_cuts(V, k, rng, nodes[id].flat_node, split_flat);
      nodes[id].cuts = std::move(bulk.applied);
      nodes[id].sampled_cuts = bulk.sampled;
      pieces = std::move(bulk.pieces);
    }

    for (const Piece& piece : pieces) {
      CompressedNode child;
      child.parent = id;
      child.flat_node = piece.handle;
      for (std::size_t m : piece.members) child.centers.push_back(members[m]);
      std::sort(child.centers.begin(), child.centers.end());
      nodes[id].children.push_back(nodes.size());
      nodes.push_back(std::move(child));
    }
    for (std::size_t c : nodes[id].children) todo.push_back(c);
  }
  return out;
}

}  // namespace xclust
