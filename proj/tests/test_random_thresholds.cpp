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

#include "support/oracles.hpp"
#include "xclust/cut_process.hpp"
#include "xclust/instances.hpp"
#include "xclust/io.hpp"
#include "xclust/random_thresholds.hpp"
#include "xclust/verify.hpp"

namespace xclust {
namespace {

TEST(BuildTreeRt, TwoCentersOnALine) {
  const PointSet c = PointSet::from_rows({{0.0}, {7.0}});
  for (std::uint64_t s = 0; s < 200; ++s) {
    std::vector<RtTraceEntry> trace;
    const ThresholdTree t = build_tree_rt(c, Seed{s}, &trace);
    ASSERT_EQ(trace.size(), 1u);
    EXPECT_GT(trace[0].cut.theta, 0.0);
    EXPECT_LT(trace[0].cut.theta, 7.0);
    EXPECT_EQ(t.leaf_count(), 2u);
    EXPECT_TRUE(is_separating(t, c));
  }
}

TEST(BuildTreeRt, ThresholdUniformOnSpan) {
  const PointSet c = PointSet::from_rows({{0.0}, {4.0}});
  std::vector<std::size_t> bins(8, 0);
  const std::size_t n = 40000;
  for (std::uint64_t s = 0; s < n; ++s) {
    std::vector<RtTraceEntry> trace;
    build_tree_rt(c, Seed{s}, &trace);
    ++bins[static_cast<std::size_t>(trace[0].cut.theta * 2.0)];
  }
  EXPECT_GT(testing::chi_square_p_value(std::vector<double>(8, 1.0 / 8), bins), 1e-3);
}

TEST(BuildTreeRt, SingleCenterHasNoCuts) {
  const ThresholdTree t = build_tree_rt(PointSet::from_rows({{1.0, 2.0}}), Seed{3});
  EXPECT_EQ(t.leaf_count(), 1u);
  EXPECT_EQ(t.node(0).center, 0u);
}

TEST(BuildTreeRt, Deterministic) {
  Rng rng(Seed{5});
  const PointSet c = random_points(rng, 9, 3, -10, 10);
  EXPECT_EQ(to_json(build_tree_rt(c, Seed{42})), to_json(build_tree_rt(c, Seed{42})));
  EXPECT_NE(to_json(build_tree_rt(c, Seed{42})), to_json(build_tree_rt(c, Seed{43})));
}

TEST(BuildTreeRt, RejectsDuplicates) {
  EXPECT_THROW(build_tree_rt(PointSet::from_rows({{1.0}, {1.0}}), Seed{1}), InvalidInput);
}

// Every traced cut splits at least one leaf holding centers on both sides;
// the final tree separates all centers.
TEST(BuildTreeRt, TraceInvariants) {
  Rng rng(Seed{8});
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.index(12);
    // Snap to a coarse grid so that centers share coordinates.
    std::vector<double> coords(n * 3);
    for (double& v : coords) v = std::round(rng.uniform(-3, 3));
    PointSet c(3, coords);
    if (c.has_duplicates()) continue;
    std::vector<RtTraceEntry> trace;
    const ThresholdTree tree = build_tree_rt(c, Seed{t}, &trace);
    EXPECT_TRUE(is_separating(tree, c));
    EXPECT_EQ(tree.leaf_count(), n);
    std::size_t splits = 0;
    for (const auto& e : trace) {
      EXPECT_FALSE(e.leaves_split.empty());
      splits += e.leaves_split.size();
      for (std::size_t v = 0; v < n; ++v) EXPECT_NE(c.at(v, e.cut.dim), e.cut.theta);
    }
    EXPECT_EQ(splits, n - 1);
  }
}

TEST(ClosestPoint, SinglePoint) {
  const PointSet u = PointSet::from_rows({{1.0, 0.0}});
  EXPECT_DOUBLE_EQ(closest_point_trial(u, Seed{0}), 1.0);
  const MeanEstimate e = estimate_alpha(PointSet::from_rows({{-2.0, 0.5}}), 10, Seed{1});
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_DOUBLE_EQ(e.standard_error, 0.0);
}

TEST(ClosestPoint, TwoPointMean) {
  const PointSet u = PointSet::from_rows({{1.0, 0.0}, {0.0, 10.0}});
  const MeanEstimate e = estimate_alpha(u, 100000, Seed{2024});
  EXPECT_NEAR(e.mean, 20.0 / 11.0, 3.0 * e.standard_error);
  EXPECT_DOUBLE_EQ(testing::naive_f(u), 20.0 / 11.0);
}

TEST(ClosestPoint, AxisInstanceKThree) {
  const GeneratedInstance inst = gen_axis_instance(3, 1e6);
  const MeanEstimate e = estimate_alpha(inst.clustering.centers(), 20000, Seed{9});
  // Rare far outcomes make the estimate heavy tailed; allow the 3 SE band
  // plus the contribution of the unobserved tail.
  EXPECT_LE(e.mean, 1.0 + harmonic(2) + 3.0 * e.standard_error);
  EXPECT_GE(e.mean, 1.0);
}

TEST(ClosestPoint, EmpiricalSurvivorMatchesRejectionLoop) {
  Rng rng(Seed{77});
  for (int rep = 0; rep < 4; ++rep) {
    const PointSet u = random_points(rng, 4, 2, -3, 3);
    std::mt19937_64 gen(rep);
    const std::size_t trials = 20000;
    std::vector<std::size_t> fast(u.size(), 0);
    std::vector<std::size_t> slow(u.size(), 0);
    for (std::size_t t = 0; t < trials; ++t) {
      ++fast[closest_point_index(u, derive_seed(Seed{500u + rep}, t))];
      ++slow[testing::naive_rt_survivor(u, gen)];
    }
    const auto p = testing::naive_survival(u);
    EXPECT_GT(testing::chi_square_p_value(p, fast), 1e-3) << "rep " << rep;
    EXPECT_GT(testing::chi_square_p_value(p, slow), 1e-3) << "rep " << rep;
  }
}

TEST(MergeSpans, OverlapsMergeTouchingDoNot) {
  const auto m = detail::merge_spans({{3, 4}, {0, 1}, {0.5, 2}, {2, 3}});
  ASSERT_EQ(m.size(), 3u);
  EXPECT_DOUBLE_EQ(m[0].lo, 0);
  EXPECT_DOUBLE_EQ(m[0].hi, 2);
  EXPECT_DOUBLE_EQ(m[1].hi, 3);
  EXPECT_DOUBLE_EQ(m[2].hi, 4);
}

}  // namespace
}  // namespace xclust
