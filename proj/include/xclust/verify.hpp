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

// Deterministic property sweeps run by `xclust verify`.

#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "xclust/core.hpp"
#include "xclust/cut_process.hpp"
#include "xclust/hitting_set.hpp"
#include "xclust/kmeans.hpp"
#include "xclust/rng.hpp"

namespace xclust {

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::string detail;
};

/// n distinct points uniform in [lo, hi]^d.
inline PointSet random_points(Rng& rng, std::size_t n, std::size_t d, double lo, double hi) {
  for (;;) {
    std::vector<double> c(n * d);
    for (double& v : c) v = rng.uniform(lo, hi);
    PointSet ps(d, std::move(c));
    if (!ps.has_duplicates()) return ps;
  }
}

/// Relative error |a - b| / max(1, |b|).
inline double rel_error(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline PropertyResult verify_embedding(Seed seed, std::size_t instances = 100) {
  PropertyResult r{"cut-metric embedding preserves l1 distances", true, 0, ""};
  Rng rng(seed);
  for (std::size_t t = 0; t < instances; ++t) {
    const std::size_t n = 1 + rng.index(10);
    const std::size_t d = 1 + rng.index(5);
    const PointSet U = random_points(rng, n, d, -10.0, 10.0);
    const CutMetricEmbedding emb = embed_cut_metric(U);
    for (std::size_t p = 0; p < n; ++p) {
      double norm = 0.0;
      for (const CutWeight& w : emb.weights) norm += (w.mask >> p & 1) ? w.z : 0.0;
      if (rel_error(norm, l1_norm(U[p])) > 1e-9) r.passed = false;
      for (std::size_t q = p + 1; q < n; ++q) {
        double dist = 0.0;
        for (const CutWeight& w : emb.weights) dist += ((w.mask >> p & 1) != (w.mask >> q & 1)) ? w.z : 0.0;
        if (rel_error(dist, l1_distance(U[p], U[q])) > 1e-9) r.passed = false;
      }
    }
    ++r.checked;
    if (!r.passed) {
      r.detail = "instance " + std::to_string(t);
      break;
    }
  }
  return r;
}

/// f(U) / min ||p||_1 <= 1 + H_{|U|-1}.
inline PropertyResult verify_harmonic_bound(Seed seed, std::size_t instances = 200) {
  PropertyResult r{"exact f(U) within the harmonic bound", true, 0, ""};
  Rng rng(seed);
  for (std::size_t t = 0; t < instances; ++t) {
    const std::size_t n = 1 + rng.index(8);
    const PointSet U = random_points(rng, n, 1 + rng.index(4), -10.0, 10.0);
    const CutMetricEmbedding emb = embed_cut_metric(U);
    double closest = l1_norm(U[0]);
    for (std::size_t p = 1; p < n; ++p) closest = std::min(closest, l1_norm(U[p]));
    const double ratio = f_exact(emb, emb.all()) / closest;
    ++r.checked;
    if (ratio > 1.0 + harmonic(n - 1) + 1e-9) {
      r.passed = false;
      r.detail = "instance " + std::to_string(t) + " ratio " + std::to_string(ratio);
      break;
    }
  }
  return r;
}

/// p last in V and p not in T implies p last in V \ T, for a shared order.
inline PropertyResult verify_monotonicity(Seed seed, std::size_t trials = 2000) {
  PropertyResult r{"last-point monotonicity under coupled clocks", true, 0, ""};
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 2 + rng.index(7);
    const PointSet U = random_points(rng, n, 1 + rng.index(4), -10.0, 10.0);
    const CutMetricEmbedding emb = embed_cut_metric(U);
    const ClockOrder order = sample_clock_order(emb, derive_seed(seed, t));
    Subset v = 0;
    while (v == 0) v = rng.next_u64() & emb.all();
    const Subset tt = rng.next_u64() & v;
    const std::size_t p = last_point_trial(emb, v, order);
    ++r.checked;
    if ((tt >> p & 1) || (v & ~tt) == 0) continue;
    if (last_point_trial(emb, v & ~tt, order) != p) {
      r.passed = false;
      r.detail = "trial " + std::to_string(t);
      break;
    }
  }
  return r;
}

/// L2'(v) >= L2(v)/2 at every node of k-means trees on random centers.
inline PropertyResult verify_rejection_mass(Seed seed, std::size_t instances = 20) {
  PropertyResult r{"L2' >= L2/2 at every k-means node", true, 0, ""};
  Rng rng(seed);
  for (std::size_t t = 0; t < instances; ++t) {
    const PointSet C = random_points(rng, 2 + rng.index(11), 1 + rng.index(6), -10.0, 10.0);
    const KMeansTrees trees = build_tree_kmeans(C, derive_seed(seed, t));
    for (const CompressedNode& n : trees.compressed.nodes) {
      if (n.kind == CompressedNode::Kind::kLeaf) continue;
      ++r.checked;
      if (n.l2_prime < n.l2 / 2.0) {
        r.passed = false;
        r.detail = "instance " + std::to_string(t);
        return r;
      }
    }
  }
  return r;
}

/// Branch and bound agrees with exhaustive search on small systems.
inline PropertyResult verify_hitting_set(Seed seed, std::size_t instances = 30) {
  PropertyResult r{"branch-and-bound hitting set matches exhaustive search", true, 0, ""};
  Rng rng(seed);
  for (std::size_t t = 0; t < instances; ++t) {
    const std::size_t d = 3 + rng.index(10);
    const std::size_t k = 1 + rng.index(12);
    std::vector<std::vector<std::size_t>> sets(k);
    std::vector<std::uint64_t> masks(k, 0);
    for (std::size_t j = 0; j < k; ++j) {
      while (sets[j].empty())
        for (std::size_t e = 0; e < d; ++e)
          if (rng.bernoulli(0.3)) sets[j].push_back(e);
      for (std::size_t e : sets[j]) masks[j] |= std::uint64_t{1} << e;
    }
    const HittingSetResult got = min_hitting_set(HittingSetInstance(d, sets));
    int best = static_cast<int>(d) + 1;
    for (std::uint64_t h = 0; h < (std::uint64_t{1} << d); ++h) {
      bool ok = true;
      for (std::uint64_t m : masks) ok = ok && (m & h) != 0;
      if (ok) best = std::min(best, std::popcount(h));
    }
    ++r.checked;
    if (!got.exact || static_cast<int>(got.elements.size()) != best) {
      r.passed = false;
      r.detail = "instance " + std::to_string(t);
      break;
    }
  }
  return r;
}

inline std::vector<PropertyResult> run_verify_suite(Seed seed) {
  return {verify_embedding(derive_seed(seed, 1)), verify_harmonic_bound(derive_seed(seed, 2)),
          verify_monotonicity(derive_seed(seed, 3)), verify_rejection_mass(derive_seed(seed, 4)),
          verify_hitting_set(derive_seed(seed, 5))};
}

}  // namespace xclust
