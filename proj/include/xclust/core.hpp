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

// Geometric primitives: point sets, reference clusterings, threshold cuts
// and threshold trees, and the q-norm clustering cost.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xclust/errors.hpp"

namespace xclust {

using Point = std::span<const double>;

inline double l1_norm(Point x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

inline double sq_norm(Point x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

inline double l1_distance(Point x, Point y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s;
}

inline double sq_distance(Point x, Point y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i] - y[i];
    s += t * t;
  }
  return s;
}

/// ||x - y||_q^q for q in {1, 2}.
inline double q_distance(Point x, Point y, int q) {
  return q == 1 ? l1_distance(x, y) : sq_distance(x, y);
}

/// An ordered, nonempty collection of points in R^d, stored row-major.
class PointSet {
 public:
  PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) throw InvalidInput("point set: dimension must be at least 1");
    if (coords_.empty()) throw InvalidInput("point set: at least one point is required");
    if (coords_.size() % dim_ != 0)
      throw InvalidInput("point set: coordinate count is not a multiple of the dimension");
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (!std::isfinite(coords_[i]))
        throw InvalidInput("point set: non-finite coordinate in row " + std::to_string(i / dim_));
    }
  }

  static PointSet from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw InvalidInput("point set: at least one point is required");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != d)
        throw InvalidInput("point set: row " + std::to_string(r) + " has " +
                           std::to_string(rows[r].size()) + " coordinates, expected " +
                           std::to_string(d));
      flat.insert(flat.end(), rows[r].begin(), rows[r].end());
    }
    return PointSet(d, std::move(flat));
  }

  std::size_t size() const { return coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }

  Point operator[](std::size_t i) const { return Point(coords_.data() + i * dim_, dim_); }
  double at(std::size_t i, std::size_t j) const { return coords_[i * dim_ + j]; }

  const std::vector<double>& coords() const { return coords_; }

  /// The points with the given indices, in that order.
  PointSet subset(std::span<const std::size_t> idx) const {
    std::vector<double> flat;
    flat.reserve(idx.size() * dim_);
    for (std::size_t i : idx) {
      const Point p = (*this)[i];
      flat.insert(flat.end(), p.begin(), p.end());
    }
    return PointSet(dim_, std::move(flat));
  }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.emplace_back((*this)[i].begin(), (*this)[i].end());
    return out;
  }

  /// True iff two points have bitwise-equal coordinate values.
  bool has_duplicates() const {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare((*this)[a].begin(), (*this)[a].end(), (*this)[b].begin(),
                                          (*this)[b].end());
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (std::equal((*this)[order[i - 1]].begin(), (*this)[order[i - 1]].end(),
                     (*this)[order[i]].begin()))
        return true;
    }
    return false;
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

/// Reference clustering: k distinct centers, a center index per data
/// point, and the cost exponent q (1 for k-medians, 2 for k-means).
class Clustering {
 public:
  Clustering(PointSet centers, std::vector<std::size_t> assignment, int q)
      : centers_(std::move(centers)), assignment_(std::move(assignment)), q_(q) {
    if (q_ != 1 && q_ != 2) throw InvalidInput("clustering: q must be 1 or 2");
    if (centers_.has_duplicates()) throw InvalidInput("clustering: centers must be distinct");
    for (std::size_t r = 0; r < assignment_.size(); ++r) {
      if (assignment_[r] >= centers_.size())
        throw InvalidInput("clustering: assignment row " + std::to_string(r) + " refers to center " +
                           std::to_string(assignment_[r]) + " but only " +
                           std::to_string(centers_.size()) + " centers exist");
    }
  }

  const PointSet& centers() const { return centers_; }
  const std::vector<std::size_t>& assignment() const { return assignment_; }
  int q() const { return q_; }
  std::size_t k() const { return centers_.size(); }

  void check_compatible(const PointSet& points) const {
    if (points.dim() != centers_.dim())
      throw InvalidInput("clustering: points have dimension " + std::to_string(points.dim()) +
                         " but centers have dimension " + std::to_string(centers_.dim()));
    if (points.size() != assignment_.size())
      throw InvalidInput("clustering: " + std::to_string(points.size()) + " points but " +
                         std::to_string(assignment_.size()) + " assignment entries");
  }

 private:
  PointSet centers_;
  std::vector<std::size_t> assignment_;
  int q_;
};

/// Assigns every point to a nearest center (lowest index on ties).
inline std::vector<std::size_t> nearest_assignment(const PointSet& points, const PointSet& centers,
                                                   int q) {
  std::vector<std::size_t> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = q_distance(points[i], centers[c], q);
      if (d < best) {
        best = d;
        out[i] = c;
      }
    }
  }
  return out;
}

/// Sum over points of ||x - center(x)||_q^q.
inline double cost_q(const PointSet& points, const PointSet& centers,
                     std::span<const std::size_t> assignment, int q) {
  if (q != 1 && q != 2) throw InvalidInput("cost: q must be 1 or 2");
  if (points.dim() != centers.dim()) throw InvalidInput("cost: dimension mismatch");
  if (assignment.size() != points.size()) throw InvalidInput("cost: assignment size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (assignment[i] >= centers.size())
      throw InvalidInput("cost: invalid assignment index in row " + std::to_string(i));
    total += q_distance(points[i], centers[assignment[i]], q);
  }
  return total;
}

inline double cost_q(const PointSet& points, const Clustering& clustering) {
  clustering.check_compatible(points);
  return cost_q(points, clustering.centers(), clustering.assignment(), clustering.q());
}

/// Axis-aligned cut (dim, theta). Coordinates equal to theta go left.
struct ThresholdCut {
  std::size_t dim = 0;
  double theta = 0.0;

  bool goes_left(Point x) const { return x[dim] <= theta; }
  bool separates(Point x, Point y) const { return goes_left(x) != goes_left(y); }

  friend bool operator==(const ThresholdCut&, const ThresholdCut&) = default;
};

/// Region {x : lower_i < x_i <= upper_i for all i}.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box whole_space(std::size_t dim) {
    return Box{std::vector<double>(dim, -std::numeric_limits<double>::infinity()),
               std::vector<double>(dim, std::numeric_limits<double>::infinity())};
  }

  bool contains(Point x) const {
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(x[i] > lower[i] && x[i] <= upper[i])) return false;
    }
    return true;
  }
};

/// Binary tree of threshold cuts. Node 0 is the root; every internal node
/// owns a cut, every leaf may carry the index of its center.
class ThresholdTree {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  struct Node {
    ThresholdCut cut;
    std::size_t left = npos;
    std::size_t right = npos;
    std::size_t parent = npos;
    std::size_t center = npos;

    bool is_leaf() const { return left == npos; }
  };

  explicit ThresholdTree(std::size_t dim) : dim_(dim), nodes_(1) {
    if (dim_ == 0) throw InvalidInput("threshold tree: dimension must be at least 1");
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t id) const { return nodes_.at(id); }
  const std::vector<Node>& nodes() const { return nodes_; }

  /// Replaces leaf `id` by an internal node with `cut` and two fresh leaves.
  std::pair<std::size_t, std::size_t> split(std::size_t id, ThresholdCut cut) {
    if (!nodes_.at(id).is_leaf()) throw InvalidInput("threshold tree: can only split a leaf");
    if (cut.dim >= dim_) throw InvalidInput("threshold tree: cut dimension out of range");
    if (!std::isfinite(cut.theta)) throw InvalidInput("threshold tree: non-finite threshold");
    const std::size_t l = nodes_.size();
    const std::size_t r = l + 1;
    Node child;
    child.parent = id;
    nodes_.push_back(child);
    nodes_.push_back(child);
    Node& n = nodes_[id];
    n.cut = cut;
    n.left = l;
    n.right = r;
    n.center = npos;
    return {l, r};
  }

  void set_center(std::size_t leaf, std::size_t center) {
    if (!nodes_.at(leaf).is_leaf()) throw InvalidInput("threshold tree: centers live on leaves");
    nodes_[leaf].center = center;
  }

  /// Leaf whose region contains x.
  std::size_t leaf_of(Point x) const {
    std::size_t id = 0;
    while (!nodes_[id].is_leaf()) id = nodes_[id].cut.goes_left(x) ? nodes_[id].left : nodes_[id].right;
    return id;
  }

  std::vector<std::size_t> leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].is_leaf()) out.push_back(i);
    return out;
  }

  std::size_t leaf_count() const { return (nodes_.size() + 1) / 2; }
  std::size_t cut_count() const { return nodes_.size() / 2; }

  /// Cuts on the path from the root to `id`, root first.
  std::vector<std::pair<ThresholdCut, bool>> path_cuts(std::size_t id) const {
    std::vector<std::pair<ThresholdCut, bool>> out;
    for (std::size_t c = id; nodes_.at(c).parent != npos; c = nodes_[c].parent) {
      const Node& p = nodes_[nodes_[c].parent];
      out.emplace_back(p.cut, p.left == c);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  /// Region of node `id` materialized from its root path.
  Box box(std::size_t id) const {
    Box b = Box::whole_space(dim_);
    for (const auto& [cut, left] : path_cuts(id)) {
      if (left)
        b.upper[cut.dim] = std::min(b.upper[cut.dim], cut.theta);
      else
        b.lower[cut.dim] = std::max(b.lower[cut.dim], cut.theta);
    }
    return b;
  }

 private:
  std::size_t dim_;
  std::vector<Node> nodes_;
};

/// True iff every leaf region holds exactly one of `centers` (and, when a
/// leaf is labeled, the label names that center).
inline bool is_separating(const ThresholdTree& tree, const PointSet& centers) {
  if (tree.dim() != centers.dim()) return false;
  std::vector<std::size_t> owner(tree.size(), ThresholdTree::npos);
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const std::size_t leaf = tree.leaf_of(centers[c]);
    if (owner[leaf] != ThresholdTree::npos) return false;
    owner[leaf] = c;
  }
  for (std::size_t leaf : tree.leaves()) {
    if (owner[leaf] == ThresholdTree::npos) return false;
    const std::size_t label = tree.node(leaf).center;
    if (label != ThresholdTree::npos && label != owner[leaf]) return false;
  }
  return true;
}

/// Labels every leaf with the center routed to it. Requires a separating tree.
inline void label_leaves(ThresholdTree& tree, const PointSet& centers) {
  for (std::size_t c = 0; c < centers.size(); ++c) tree.set_center(tree.leaf_of(centers[c]), c);
  if (!is_separating(tree, centers)) throw InvalidInput("threshold tree: not separating");
}

/// The assignment pi_T: each point goes to the center of its leaf.
inline std::vector<std::size_t> assign_by_tree(const ThresholdTree& tree, const PointSet& points,
                                               const PointSet& centers) {
  if (tree.dim() != points.dim() || points.dim() != centers.dim())
    throw InvalidInput("assign_by_tree: dimension mismatch");
  if (!is_separating(tree, centers))
    throw InvalidInput("assign_by_tree: tree does not separate the centers");
  std::vector<std::size_t> owner(tree.size(), ThresholdTree::npos);
  for (std::size_t c = 0; c < centers.size(); ++c) owner[tree.leaf_of(centers[c])] = c;
  std::vector<std::size_t> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = owner[tree.leaf_of(points[i])];
  return out;
}

inline double tree_cost(const ThresholdTree& tree, const PointSet& points, const PointSet& centers,
                        int q) {
  const auto assignment = assign_by_tree(tree, points, centers);
  return cost_q(points, centers, assignment, q);
}

/// H_n = 1 + 1/2 + ... + 1/n (H_0 = 0).
inline double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t i = n; i >= 1; --i) h += 1.0 / static_cast<double>(i);
  return h;
}

}  // namespace xclust
