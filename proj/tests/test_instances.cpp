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

#include "xclust/instances.hpp"
#include "xclust/random_thresholds.hpp"

namespace xclust {
namespace {

const HittingSetInstance kTwoTriples(4, {{0, 1, 2}, {1, 2, 3}});

TEST(AxisInstance, Construction) {
  const GeneratedInstance g = gen_axis_instance(3, 100.0);
  EXPECT_EQ(g.clustering.centers(), PointSet::from_rows({{1, 0, 0}, {0, 100, 0}, {0, 0, 100}}));
  EXPECT_EQ(g.points, PointSet::from_rows({{0, 0, 0}}));
  EXPECT_DOUBLE_EQ(g.reference_cost, 1.0);
  EXPECT_DOUBLE_EQ(cost_q(g.points, g.clustering), 1.0);
  const GeneratedInstance h = gen_axis_instance(4, 10.0, 3, 2);
  EXPECT_EQ(h.points.size(), 1u + 3u * 4u);
  EXPECT_DOUBLE_EQ(h.reference_cost, 1.0);
}

TEST(AxisInstance, Errors) {
  EXPECT_THROW(gen_axis_instance(1, 10.0), InvalidInput);
  EXPECT_THROW(gen_axis_instance(3, 1.0), InvalidInput);
  EXPECT_THROW(gen_axis_instance(3, std::nan("")), InvalidInput);
}

TEST(HittingInstance, Construction) {
  const GeneratedInstance g = gen_hitting_instance(kTwoTriples, 5);
  EXPECT_EQ(g.points.size(), 19u);
  EXPECT_EQ(g.clustering.k(), 3u);
  EXPECT_DOUBLE_EQ(g.reference_cost, 4.0);
  for (double v : g.points.coords()) EXPECT_TRUE(v == 0.0 || v == 1.0);
  for (double v : g.clustering.centers().coords()) EXPECT_TRUE(v == 0.0 || v == 1.0);
}

TEST(HittingInstance, Errors) {
  EXPECT_THROW(gen_hitting_instance(HittingSetInstance(4, {{0, 1, 2}, {1, 2}}), 5), InvalidInput);
  EXPECT_THROW(gen_hitting_instance(HittingSetInstance(4, {{0, 1}, {1, 2}}), 5), InvalidInput);
  EXPECT_THROW(gen_hitting_instance(HittingSetInstance(4, {{0, 1, 2}, {2, 1, 0}}), 5), InvalidInput);
  EXPECT_THROW(gen_hitting_instance(kTwoTriples, 0), InvalidInput);
  EXPECT_EQ(default_colocated(kTwoTriples), 36u);
}

// Random uniform systems; binary coordinates make cost_1 and cost_2 agree
// for any assignment, and the cuts above mu_0's leaf hit every set.
TEST(HittingInstance, BinaryCostsAndRootPathHittingSet) {
  std::mt19937_64 gen(3);
  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    const std::size_t d = 6 + gen() % 4;
    const std::size_t k = 2 + gen() % 5;
    const std::size_t s = 3 + gen() % (d - 5);
    std::vector<std::vector<std::size_t>> sets;
    while (sets.size() < k) {
      std::vector<std::size_t> all(d);
      for (std::size_t i = 0; i < d; ++i) all[i] = i;
      std::shuffle(all.begin(), all.end(), gen);
      all.resize(s);
      std::sort(all.begin(), all.end());
      if (std::find(sets.begin(), sets.end(), all) == sets.end()) sets.push_back(all);
    }
    const HittingSetInstance hs(d, sets);
    const GeneratedInstance g = gen_hitting_instance(hs, 2);
    const PointSet& C = g.clustering.centers();
    std::vector<std::size_t> assign(g.points.size());
    for (auto& a : assign) a = gen() % C.size();
    EXPECT_DOUBLE_EQ(cost_q(g.points, C, assign, 1), cost_q(g.points, C, assign, 2));

    const ThresholdTree t = build_tree_rt(C, Seed{rep});
    std::vector<std::size_t> dims;
    for (const auto& [cut, left] : t.path_cuts(t.leaf_of(C[0]))) dims.push_back(cut.dim);
    EXPECT_TRUE(hs.is_hitting_set(dims));
  }
}

TEST(SetSystem, Parameters) {
  const SetSystemParams big = set_system_params(1'000'000);
  EXPECT_NEAR(big.p, 0.2902, 5e-5);
  EXPECT_NEAR(big.epsilon, 0.01, 1e-12);
  EXPECT_THROW(set_system_params(64), InvalidInput);
  EXPECT_THROW(set_system_params(20, 0.6), InvalidInput);
  EXPECT_THROW(set_system_params(20, 0.0), InvalidInput);
  EXPECT_NO_THROW(set_system_params(20, 0.5));
}

TEST(SetSystem, GeneratorContract) {
  const RandomSetSystem a = gen_random_set_system(20, 0.3, Seed{4});
  EXPECT_EQ(a.hs.k(), 20u);
  EXPECT_EQ(a.hs.ground_size(), 20u);
  for (std::size_t j = 0; j < 20; ++j) {
    EXPECT_FALSE(a.hs.sets()[j].empty());
    EXPECT_EQ(a.sizes[j], a.hs.sets()[j].size());
  }
  const RandomSetSystem b = gen_random_set_system(20, 0.3, Seed{4});
  EXPECT_EQ(a.hs.sets(), b.hs.sets());
  EXPECT_THROW(gen_random_set_system(64, std::nullopt, Seed{1}), InvalidInput);
}

TEST(SetSystem, InclusionFrequency) {
  const RandomSetSystem a = gen_random_set_system(200, 0.25, Seed{5});
  std::size_t total = 0;
  for (std::size_t s : a.sizes) total += s;
  const double n = 200.0 * 200.0;
  EXPECT_NEAR(total / n, 0.25, 4.0 * std::sqrt(0.25 * 0.75 / n));
}

// Size-floor event at k = 2e5 with the default p. Set sizes are
// Binomial(k, p), so they are drawn directly instead of materializing k^2
// memberships.
TEST(SetSystem, SizeFloorViolationsAreRare) {
  const std::size_t k = 200'000;
  const SetSystemParams sp = set_system_params(k);
  int violating = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 gen(seed);
    std::binomial_distribution<std::size_t> size(k, sp.p);
    bool small = false;
    for (std::size_t j = 0; j < k && !small; ++j) small = static_cast<double>(size(gen)) < sp.size_floor;
    violating += small;
  }
  EXPECT_LT(violating / 20.0, 0.5 + 3.0 * std::sqrt(0.25 / 20.0));
}

}  // namespace
}  // namespace xclust
