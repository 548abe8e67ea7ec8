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

// Cut-metric view of the Closest Point Process.
//
// A finite l1 point set U together with the origin is a nonnegative sum of
// cut metrics: every coordinate gap between consecutive projections of
// U + {0} contributes its length to the subset of U lying on the far side
// of the gap from the origin. Random Thresholds restricted to the origin's
// leaf then becomes the Last Point Process over these weighted subsets,
// which this header evaluates exactly (small U) and by simulation.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xclust/core.hpp"
#include "xclust/rng.hpp"

namespace xclust {

/// Bitmask over the points of U; bit j is point j. The origin has no bit,
/// so no weighted subset can contain it.
using Subset = std::uint64_t;

inline constexpr std::size_t kMaxEmbeddingPoints = 64;
inline constexpr std::size_t kMaxExactPoints = 24;

inline Subset full_subset(std::size_t n) {
  return n >= 64 ? ~Subset{0} : ((Subset{1} << n) - 1);
}

struct CutWeight {
  Subset mask = 0;
  double z = 0.0;
};

/// Nonnegative weights z_S (only z_S > 0 stored, sorted by mask) with
/// ||p - q||_1 = sum_S z_S [|S & {p,q}| == 1] and ||p||_1 = sum_{S : p in S} z_S.
struct CutMetricEmbedding {
  PointSet points;
  std::vector<CutWeight> weights;

  std::size_t size() const { return points.size(); }
  Subset all() const { return full_subset(points.size()); }
  double norm(std::size_t p) const { return l1_norm(points[p]); }
};

inline CutMetricEmbedding embed_cut_metric(const PointSet& U) {
  const std::size_t n = U.size();
  if (n > kMaxEmbeddingPoints)
    throw CapsExceeded("cut-metric embedding supports at most 64 points, got " + std::to_string(n));
  std::map<Subset, double> acc;
  std::vector<double> values;
  for (std::size_t i = 0; i < U.dim(); ++i) {
    values.assign(1, 0.0);
    for (std::size_t p = 0; p < n; ++p) values.push_back(U.at(p, i));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t g = 0; g + 1 < values.size(); ++g) {
      const double lo = values[g];
      const double hi = values[g + 1];
      // Gaps never straddle 0 since 0 is one of the breakpoints.
      Subset far = 0;
      for (std::size_t p = 0; p < n; ++p) {
        const double x = U.at(p, i);
        if ((lo >= 0.0 && x >= hi) || (hi <= 0.0 && x <= lo)) far |= Subset{1} << p;
      }
      if (far != 0) acc[far] += hi - lo;
    }
  }
  CutMetricEmbedding emb{U, {}};
  for (const auto& [mask, z] : acc)
    if (z > 0.0) emb.weights.push_back({mask, z});
  return emb;
}

/// True iff E & S is a nonempty proper subset of S.
inline bool crosses(Subset e, Subset s) {
  const Subset inter = e & s;
  return inter != 0 && inter != s;
}

/// Exact evaluation of f(S) and of the survivor law of the Last Point
/// Process, memoized over subsets. Not thread-safe; use one per thread.
class LastPointEvaluator {
 public:
  explicit LastPointEvaluator(const CutMetricEmbedding& emb) : emb_(emb) {
    if (emb_.size() > kMaxExactPoints)
      throw CapsExceeded("exact evaluation supports at most 24 points, got " +
                         std::to_string(emb_.size()) + "; use Monte Carlo instead");
  }

  /// f(S) = E ||last point||_1 when the process starts from S, with
  /// f({p}) = ||p||_1 and f(S) = 0 when no weighted subset crosses S.
  double f(Subset s) {
    check(s);
    if (std::has_single_bit(s)) return emb_.norm(static_cast<std::size_t>(std::countr_zero(s)));
    if (auto it = f_memo_.find(s); it != f_memo_.end()) return it->second;
    double total = 0.0;
    double acc = 0.0;
    for (const CutWeight& w : emb_.weights) {
      if (!crosses(w.mask, s)) continue;
      total += w.z;
      acc += w.z * f(s & ~w.mask);
    }
    const double value = total > 0.0 ? acc / total : 0.0;
    f_memo_.emplace(s, value);
    return value;
  }

  /// Probability that each point is last when starting from V (zero
  /// outside V). With no crossing weight left, the lowest-index remaining
  /// point is reported as the survivor.
  const std::vector<double>& survival(Subset v) {
    check(v);
    if (auto it = surv_memo_.find(v); it != surv_memo_.end()) return it->second;
    std::vector<double> out(emb_.size(), 0.0);
    if (std::has_single_bit(v)) {
      out[static_cast<std::size_t>(std::countr_zero(v))] = 1.0;
    } else {
      double total = 0.0;
      for (const CutWeight& w : emb_.weights) {
        if (!crosses(w.mask, v)) continue;
        total += w.z;
        const std::vector<double> sub = survival(v & ~w.mask);
        for (std::size_t p = 0; p < out.size(); ++p) out[p] += w.z * sub[p];
      }
      if (total > 0.0) {
        for (double& x : out) x /= total;
      } else {
        out[static_cast<std::size_t>(std::countr_zero(v))] = 1.0;
      }
    }
    return surv_memo_.emplace(v, std::move(out)).first->second;
  }

 private:
  void check(Subset s) const {
    if (s == 0) throw InvalidInput("last point process: empty starting set");
    if ((s & ~emb_.all()) != 0) throw InvalidInput("last point process: subset out of range");
  }

  const CutMetricEmbedding& emb_;
  std::unordered_map<Subset, double> f_memo_;
  std::unordered_map<Subset, std::vector<double>> surv_memo_;
};

inline double f_exact(const CutMetricEmbedding& emb, Subset s) {
  LastPointEvaluator eval(emb);
  return eval.f(s);
}

inline std::vector<double> survival_distribution(const CutMetricEmbedding& emb, Subset v) {
  LastPointEvaluator eval(emb);
  return eval.survival(v);
}

/// Positive-weight subsets sorted by independent X_S ~ Exp(z_S).
struct ClockOrder {
  std::vector<Subset> subsets;
};

inline ClockOrder sample_clock_order(const CutMetricEmbedding& emb, Seed seed) {
  Rng rng(seed);
  std::vector<std::pair<double, Subset>> clocks;
  clocks.reserve(emb.weights.size());
  for (const CutWeight& w : emb.weights) clocks.emplace_back(-std::log(rng.uniform_open0()) / w.z, w.mask);
  std::sort(clocks.begin(), clocks.end());
  ClockOrder order;
  order.subsets.reserve(clocks.size());
  for (const auto& c : clocks) order.subsets.push_back(c.second);
  return order;
}

/// Runs the Last Point Process from V along a fixed clock order: a subset
/// is applied iff it crosses the current set. Returns the survivor index
/// (lowest remaining index if several points are never separated).
inline std::size_t last_point_trial(const CutMetricEmbedding& emb, Subset v, const ClockOrder& order) {
  if (v == 0) throw InvalidInput("last point process: empty starting set");
  if ((v & ~emb.all()) != 0) throw InvalidInput("last point process: subset out of range");
  for (Subset s : order.subsets) {
    if (std::has_single_bit(v)) break;
    if (crosses(s, v)) v &= ~s;
  }
  return static_cast<std::size_t>(std::countr_zero(v));
}

/// Expected cost of the origin on the axis instance with one center at
/// distance 1 and j - 1 centers at distance M:
/// g(1) = 1, g(j) = M/(M(j-1)+1) + M(j-1)/(M(j-1)+1) * g(j-1).
inline double g_recurrence(std::size_t k, double M) {
  if (k < 1) throw InvalidInput("g_recurrence: k must be at least 1");
  if (!(M > 0.0)) throw InvalidInput("g_recurrence: M must be positive");
  double g = 1.0;
  for (std::size_t j = 2; j <= k; ++j) {
    const double far = M * static_cast<double>(j - 1);
    g = M / (far + 1.0) + far / (far + 1.0) * g;
  }
  return g;
}

}  // namespace xclust
