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

// Lower-bound instance generators.

#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xclust/core.hpp"
#include "xclust/hitting_set.hpp"
#include "xclust/rng.hpp"

namespace xclust {

/// Data points plus a reference clustering, tagged with how it was made.
struct GeneratedInstance {
  PointSet points;
  Clustering clustering;
  std::string generator;
  std::map<std::string, double> params;
  double reference_cost = 0.0;
};

/// One point at the origin; centers e_1 and M e_i (i = 2..k) in R^k, with
/// `colocated` extra points on every center. Reference cost is 1.
inline GeneratedInstance gen_axis_instance(std::size_t k, double M, std::size_t colocated = 0, int q = 1) {
  if (k < 2) throw InvalidInput("axis instance: k must be at least 2");
  if (!(M > 1.0) || !std::isfinite(M)) throw InvalidInput("axis instance: M must be a finite value above 1");
  std::vector<double> centers(k * k, 0.0);
  centers[0] = 1.0;
  for (std::size_t i = 1; i < k; ++i) centers[i * k + i] = M;
  PointSet C(k, centers);

  std::vector<double> data(k, 0.0);
  std::vector<std::size_t> assignment{0};
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t r = 0; r < colocated; ++r) {
      data.insert(data.end(), C[c].begin(), C[c].end());
      assignment.push_back(c);
    }
  }
  PointSet X(k, std::move(data));
  Clustering ref(std::move(C), std::move(assignment), q);
  const double cost = cost_q(X, ref);
  return GeneratedInstance{std::move(X), std::move(ref), "axis",
                           {{"k", static_cast<double>(k)}, {"M", M}, {"colocated", static_cast<double>(colocated)}},
                           cost};
}

/// Default number of colocated points per center: (d + k)^2.
inline std::size_t default_colocated(const HittingSetInstance& hs) {
  const std::size_t t = hs.ground_size() + hs.k();
  return t * t;
}

/// Binary instance in {0,1}^d from an s-uniform set system: center mu_0 at
/// the origin, mu_i the indicator of S_i, data e_1..e_d plus M points on
/// each center. Reference sends every e_j to mu_0 (cost d).
inline GeneratedInstance gen_hitting_instance(const HittingSetInstance& hs, std::size_t M, int q = 1) {
  const auto s = hs.uniform_size();
  if (!s) throw InvalidInput("hitting instance: the set system must be uniform");
  if (*s < 3) throw InvalidInput("hitting instance: sets must have size at least 3 (got " + std::to_string(*s) + ")");
  if (M < 1) throw InvalidInput("hitting instance: M must be at least 1");
  const std::size_t d = hs.ground_size();
  const std::size_t k = hs.k();

  std::vector<double> centers((k + 1) * d, 0.0);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t e : hs.sets()[j]) centers[(j + 1) * d + e] = 1.0;
  PointSet C(d, std::move(centers));
  if (C.has_duplicates()) throw InvalidInput("hitting instance: repeated sets give duplicate centers");

  std::vector<double> data(d * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) data[j * d + j] = 1.0;
  std::vector<std::size_t> assignment(d, 0);
  for (std::size_t c = 0; c <= k; ++c) {
    for (std::size_t r = 0; r < M; ++r) {
      data.insert(data.end(), C[c].begin(), C[c].end());
      assignment.push_back(c);
    }
  }
  PointSet X(d, std::move(data));
  Clustering ref(std::move(C), std::move(assignment), q);
  const double cost = cost_q(X, ref);
  return GeneratedInstance{std::move(X),
                           std::move(ref),
                           "hitting",
                           {{"d", static_cast<double>(d)},
                            {"k", static_cast<double>(k)},
                            {"s", static_cast<double>(*s)},
                            {"M", static_cast<double>(M)}},
                           cost};
}

struct SetSystemParams {
  std::size_t k = 0;
  double p = 0.0;
  double epsilon = 0.0;     // k^(-1/3)
  double size_floor = 0.0;  // (1 - epsilon) p k
};

/// p = 2 ln(2k) / k^(1/3) unless overridden; p must lie in (0, 1/2].
inline SetSystemParams set_system_params(std::size_t k, std::optional<double> p_override = std::nullopt) {
  if (k < 1) throw InvalidInput("set system: k must be positive");
  const double kd = static_cast<double>(k);
  SetSystemParams sp;
  sp.k = k;
  sp.p = p_override.value_or(2.0 * std::log(2.0 * kd) / std::cbrt(kd));
  if (!(sp.p > 0.0 && sp.p <= 0.5))
    throw InvalidInput("set system: inclusion probability p = " + std::to_string(sp.p) +
                       " is outside (0, 1/2]; the default needs larger k or pass an override");
  sp.epsilon = 1.0 / std::cbrt(kd);
  sp.size_floor = (1.0 - sp.epsilon) * sp.p * kd;
  return sp;
}

struct RandomSetSystem {
  HittingSetInstance hs;
  SetSystemParams params;
  std::vector<std::size_t> sizes;
  bool small_set = false;  // some set is below the size floor
};

/// k random subsets of [k], each element kept independently with
/// probability p; empty draws are redrawn.
inline RandomSetSystem gen_random_set_system(std::size_t k, std::optional<double> p_override, Seed seed) {
  const SetSystemParams sp = set_system_params(k, p_override);
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> sets(k);
  std::vector<std::size_t> sizes(k);
  bool small = false;
  for (std::size_t j = 0; j < k; ++j) {
    do {
      sets[j].clear();
      for (std::size_t e = 0; e < k; ++e)
        if (rng.bernoulli(sp.p)) sets[j].push_back(e);
    } while (sets[j].empty());
    sizes[j] = sets[j].size();
    small = small || static_cast<double>(sizes[j]) < sp.size_floor;
  }
  return RandomSetSystem{HittingSetInstance(k, std::move(sets)), sp, std::move(sizes), small};
}

}  // namespace xclust
