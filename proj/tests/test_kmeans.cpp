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


#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "support/kmeans_checks.hpp"
#include "support/oracles.hpp"
#include "xclust/kmeans.hpp"
#include "xclust/verify.hpp"

namespace xclust {
namespace {

const PointSet kLine013 = PointSet::from_rows({{0.0}, {1.0}, {3.0}});

TEST(IntervalTable, HandExample) {
  const IntervalTable t = interval_table(kLine013);
  ASSERT_EQ(t.entries.size(), 2u);
  EXPECT_DOUBLE_EQ(t.entries[0].a, 0.0);
  EXPECT_DOUBLE_EQ(t.entries[0].b, 1.0);
  EXPECT_DOUBLE_EQ(t.entries[0].weight, 1.0);
  EXPECT_DOUBLE_EQ(t.entries[1].weight, 4.0);
  EXPECT_DOUBLE_EQ(t.total, 5.0);
}

TEST(IntervalTable, ConstantDimensionContributesNothing) {
  const IntervalTable t = interval_table(PointSet::from_rows({{0.0, 2.0}, {1.0, 2.0}, {5.0, 2.0}, {1.0, 2.0}}));
  EXPECT_EQ(t.entries.size(), 2u);
  for (const auto& e : t.entries) EXPECT_EQ(e.dim, 0u);
}

TEST(PseudoDistance, HandValuesAndSandwich) {
  EXPECT_DOUBLE_EQ(pseudo_distance(kLine013, kLine013[0], kLine013[2]), 5.0);
  EXPECT_DOUBLE_EQ(pseudo_distance(kLine013, kLine013[1], kLine013[1]), 0.0);
  Rng rng(Seed{3});
  for (int rep = 0; rep < 200; ++rep) {
    const PointSet V = random_points(rng, 2 + rng.index(10), 1 + rng.index(5), -10, 10);
    const std::size_t x = rng.index(V.size());
    const std::size_t y = rng.index(V.size());
    const double sq = sq_distance(V[x], V[y]);
    const double d2 = pseudo_distance(V, V[x], V[y]);
    EXPECT_LE(d2, sq * (1 + 1e-12));
    EXPECT_GE(d2 * (1 + 1e-12), sq / static_cast<double>(V.size() - 1));
  }
}

TEST(Stretch, HandValuesAndCeiling) {
  EXPECT_DOUBLE_EQ(stretch(PointSet::from_rows({{0.0, 1.0}, {2.0, 5.0}})).value, 1.0);
  const StretchReport r = stretch(PointSet::from_rows({{0.0}, {1.0}, {2.0}}));
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_EQ(r.p, 0u);
  EXPECT_EQ(r.q, 2u);
  EXPECT_THROW(stretch(PointSet::from_rows({{1.0}})), InvalidInput);
  Rng rng(Seed{4});
  for (int rep = 0; rep < 200; ++rep) {
    const PointSet V = random_points(rng, 2 + rng.index(10), 1 + rng.index(5), -10, 10);
    EXPECT_LE(stretch(V).value, static_cast<double>(V.size() - 1) + 1e-9);
  }
}

TEST(Triangular, DensityShape) {
  const double a = 2.0;
  const double b = 5.0;
  EXPECT_DOUBLE_EQ(triangular_pdf(a, b, 3.5), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(triangular_pdf(a, b, 1.0), 0.0);
  const int n = 100000;
  double integral = 0.0;
  for (int i = 0; i < n; ++i) integral += triangular_pdf(a, b, a + (b - a) * (i + 0.5) / n) * (b - a) / n;
  EXPECT_NEAR(integral, 1.0, 1e-8);
}

// Exact probability mass of [lo, hi] under the triangular law on [a, b].
double tri_cdf(double a, double b, double t) {
  const double u = (t - a) / (b - a);
  return u <= 0.5 ? 2.0 * u * u : 1.0 - 2.0 * (1.0 - u) * (1.0 - u);
}

TEST(Triangular, SamplerMatchesCdf) {
  Rng rng(Seed{10});
  const int bins = 10;
  std::vector<std::size_t> counts(bins, 0);
  for (int i = 0; i < 50000; ++i) ++counts[static_cast<std::size_t>(sample_triangular(-1.0, 1.0, rng) * 5.0 + 5.0)];
  std::vector<double> p(bins);
  for (int j = 0; j < bins; ++j) p[j] = tri_cdf(-1, 1, -1 + 0.2 * (j + 1)) - tri_cdf(-1, 1, -1 + 0.2 * j);
  EXPECT_GT(testing::chi_square_p_value(p, counts), 1e-3);
}

TEST(SampleD2, IntervalFrequencies) {
  const IntervalTable t = interval_table(kLine013);
  Rng rng(Seed{11});
  std::vector<std::size_t> counts(2, 0);
  for (int i = 0; i < 50000; ++i) ++counts[sample_d2(t, rng).theta > 1.0 ? 1 : 0];
  EXPECT_GT(testing::chi_square_p_value({0.2, 0.8}, counts), 1e-3);
}

TEST(SampleD2Prime, NoClosePairsMeansFullSupport) {
  const IntervalTable t = interval_table(kLine013);
  const auto keep = d2_prime_support(kLine013, t, 3);
  EXPECT_EQ(keep, (std::vector<bool>{true, true}));
  EXPECT_DOUBLE_EQ(l2_prime(kLine013, 3), t.total);
}

TEST(SampleD2Prime, AvoidsClosePairSpan) {
  // (0, 0.001) is close: 1e-6 < 100 / 3^4.
  const PointSet V = PointSet::from_rows({{0.0}, {0.001}, {10.0}});
  const IntervalTable t = interval_table(V);
  EXPECT_EQ(d2_prime_support(V, t, 3), (std::vector<bool>{false, true}));
  Rng rng(Seed{12});
  for (int i = 0; i < 20000; ++i) {
    const double th = sample_d2_prime(V, 3, rng).theta;
    EXPECT_TRUE(th > 0.001 && th < 10.0);
  }
  // A pair is never close relative to its own diameter.
  EXPECT_NO_THROW(sample_d2_prime(PointSet::from_rows({{0.0}, {1e-3}}), 10, Seed{1}));
}

TEST(SampleD2Prime, KeptMassAtLeastHalf) {
  const PropertyResult r = verify_rejection_mass(Seed{21}, 30);
  EXPECT_TRUE(r.passed) << r.detail;
  Rng rng(Seed{22});
  for (int rep = 0; rep < 200; ++rep) {
    // Clustered points create many close pairs.
    std::vector<double> c;
    const std::size_t d = 1 + rng.index(3);
    const std::size_t n = 3 + rng.index(8);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) c.push_back((i % 2 ? 10.0 : 0.0) + rng.uniform(0, 1e-4));
    const PointSet V(d, c);
    if (V.has_duplicates()) continue;
    EXPECT_GE(l2_prime(V, n), interval_table(V).total / 2.0);
  }
}

// Independent conditional sampler: draw from D2 and keep draws that land
// strictly between the pair's projections.
ThresholdCut rejection_doubleprime(const PointSet& V, std::size_t p, std::size_t q, std::mt19937_64& gen) {
  const IntervalTable t = interval_table(V);
  std::vector<double> w;
  for (const auto& e : t.entries) w.push_back(e.weight);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const auto& e = t.entries[pick(gen)];
    const double x = u(gen) + u(gen);  // sum of two uniforms is triangular on [0, 2]
    const double th = e.a + (e.b - e.a) * x / 2.0;
    const double lo = std::min(V.at(p, e.dim), V.at(q, e.dim));
    const double hi = std::max(V.at(p, e.dim), V.at(q, e.dim));
    if (th > lo && th < hi) return {e.dim, th};
  }
}

TEST(SampleD2DoublePrime, MatchesRejectionSampler) {
  const PointSet V = PointSet::from_rows({{0.0, 0.0}, {1.0, 3.0}, {4.0, 1.0}, {2.0, 2.5}});
  const IntervalTable t = interval_table(V);
  const std::size_t p = 0;
  const std::size_t q = 2;
  // Categories: (entry, quarter of the entry).
  const auto keep = pair_support(V, t, p, q);
  std::vector<double> probs;
  const double mass = kept_weight(t, keep);
  EXPECT_DOUBLE_EQ(mass, pseudo_distance(V, V[p], V[q]));
  for (std::size_t e = 0; e < t.entries.size(); ++e)
    for (int j = 0; j < 4; ++j)
      probs.push_back(keep[e] ? t.entries[e].weight / mass * (tri_cdf(0, 1, 0.25 * (j + 1)) - tri_cdf(0, 1, 0.25 * j))
                              : 0.0);
  auto category = [&](ThresholdCut c) {
    for (std::size_t e = 0; e < t.entries.size(); ++e) {
      const auto& en = t.entries[e];
      if (en.dim == c.dim && c.theta > en.a && c.theta < en.b)
        return e * 4 + std::min<std::size_t>(3, static_cast<std::size_t>(4 * (c.theta - en.a) / (en.b - en.a)));
    }
    return std::size_t{0};
  };
  std::vector<std::size_t> fast(probs.size(), 0);
  std::vector<std::size_t> slow(probs.size(), 0);
  Rng rng(Seed{13});
  std::mt19937_64 gen(14);
  for (int i = 0; i < 100000; ++i) {
    ++fast[category(sample_d2_doubleprime(V, {p, q}, rng))];
    ++slow[category(rejection_doubleprime(V, p, q, gen))];
  }
  EXPECT_GT(testing::chi_square_p_value(probs, fast), 1e-3);
  EXPECT_GT(testing::chi_square_p_value(probs, slow), 1e-3);
}

TEST(SampleD2DoublePrime, Errors) {
  EXPECT_THROW(sample_d2_doubleprime(kLine013, {1, 1}, Seed{1}), InvalidInput);
  EXPECT_THROW(sample_d2_doubleprime(kLine013, {0, 5}, Seed{1}), InvalidInput);
}

TEST(BuildTreeKMeans, TwoCentersIsOneBulkCut) {
  const PointSet C = PointSet::from_rows({{0.0, 0.0}, {1.0, 2.0}});
  EXPECT_GT(solo_threshold(2), 4.16);
  const KMeansTrees t = build_tree_kmeans(C, Seed{1});
  EXPECT_EQ(t.tree.leaf_count(), 2u);
  EXPECT_EQ(t.compressed.nodes[0].kind, CompressedNode::Kind::kBulk);
  EXPECT_EQ(t.compressed.count(CompressedNode::Kind::kLeaf), 2u);
  EXPECT_DOUBLE_EQ(t.compressed.nodes[0].stretch, 1.0);
}

TEST(BuildTreeKMeans, SingleCenterAndDuplicates) {
  const KMeansTrees t = build_tree_kmeans(PointSet::from_rows({{4.0}}), Seed{1});
  EXPECT_EQ(t.tree.leaf_count(), 1u);
  EXPECT_EQ(t.compressed.nodes.size(), 1u);
  EXPECT_THROW(build_tree_kmeans(PointSet::from_rows({{4.0}, {4.0}}), Seed{1}), InvalidInput);
}

TEST(BuildTreeKMeans, CollinearCentersUseSoloCuts) {
  std::vector<double> c;
  for (int i = 0; i < 12; ++i) c.push_back(i);
  const KMeansTrees t = build_tree_kmeans(PointSet(1, c), Seed{2});
  EXPECT_EQ(t.compressed.nodes[0].kind, CompressedNode::Kind::kSolo);
  EXPECT_DOUBLE_EQ(t.compressed.nodes[0].stretch, 11.0);
}

TEST(BuildTreeKMeans, SeparatesAndNeverBeatsReference) {
  std::mt19937_64 gen(5);
  for (std::uint64_t rep = 0; rep < 40; ++rep) {
    const std::size_t k = 2 + gen() % 11;
    const std::size_t d = 1 + gen() % 6;
    const auto mix = testing::gaussian_mixture(k, d, 5, 0.5, gen);
    const KMeansTrees t = build_tree_kmeans(mix.centers, Seed{rep});
    ASSERT_TRUE(is_separating(t.tree, mix.centers));
    EXPECT_EQ(t.compressed.count(CompressedNode::Kind::kLeaf), k);
    const auto ref = nearest_assignment(mix.points, mix.centers, 2);
    EXPECT_GE(tree_cost(t.tree, mix.points, mix.centers, 2), cost_q(mix.points, mix.centers, ref, 2) - 1e-9);
    EXPECT_TRUE(testing::delta_halves(t.compressed));
    // Compressed boxes match the flat tree's regions.
    for (const CompressedNode& n : t.compressed.nodes)
      for (std::size_t c : n.centers) EXPECT_TRUE(n.box.contains(mix.centers[c]));
  }
}

TEST(BuildTreeKMeans, Deterministic) {
  Rng rng(Seed{6});
  const PointSet C = random_points(rng, 10, 3, -10, 10);
  const KMeansTrees a = build_tree_kmeans(C, Seed{9});
  const KMeansTrees b = build_tree_kmeans(C, Seed{9});
  ASSERT_EQ(a.tree.size(), b.tree.size());
  for (std::size_t i = 0; i < a.tree.size(); ++i) EXPECT_EQ(a.tree.node(i).cut, b.tree.node(i).cut);
}

TEST(BulkCuts, CountsEveryDraw) {
  const PointSet V = PointSet::from_rows({{0.0}, {1.0}, {3.0}});
  Rng rng(Seed{7});
  for (int rep = 0; rep < 100; ++rep) {
    const BulkOutcome b = bulk_cuts(V, 3, rng);
    EXPECT_GE(b.sampled, b.applied.size());
    EXPECT_GE(b.applied.size(), 1u);
    std::size_t members = 0;
    for (const Piece& piece : b.pieces) members += piece.members.size();
    EXPECT_EQ(members, 3u);
  }
}

TEST(KMeansBounds, BulkCountBound) {
  Rng rng(Seed{30});
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const PointSet V = random_points(rng, 3 + rng.index(8), 1 + rng.index(5), -10, 10);
    const auto c = testing::bulk_count_check(V, V.size(), 100, Seed{rep});
    EXPECT_TRUE(c.ok()) << c.observed << " vs " << c.bound;
  }
}

TEST(KMeansBounds, SeparationProbability) {
  Rng rng(Seed{31});
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const PointSet V = random_points(rng, 2 + rng.index(8), 1 + rng.index(5), -10, 10);
    const auto c = testing::separation_check(V, rng.index(V.size()), 20000, Seed{rep});
    EXPECT_TRUE(c.ok()) << c.observed << " vs " << c.bound;
  }
}

TEST(KMeansBounds, SoloSplitBalance) {
  std::vector<double> c;
  for (int i = 0; i < 10; ++i) c.push_back(i * i);
  const PointSet V(1, c);
  const auto r = testing::solo_split_check(V, 5000, Seed{3});
  EXPECT_TRUE(r.ok()) << r.observed << " vs " << r.bound;
}

}  // namespace
}  // namespace xclust
