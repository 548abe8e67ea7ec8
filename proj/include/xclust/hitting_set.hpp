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

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xclust/errors.hpp"

namespace xclust {

/// Set system ([d], {S_1, ..., S_k}); elements are 0-based internally.
class HittingSetInstance {
 public:
  HittingSetInstance(std::size_t ground_size, std::vector<std::vector<std::size_t>> sets)
      : ground_size_(ground_size), sets_(std::move(sets)) {
    if (ground_size_ == 0) throw InvalidInput("hitting set: ground set must be nonempty");
    for (std::size_t j = 0; j < sets_.size(); ++j) {
      auto& s = sets_[j];
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      if (s.empty()) throw InvalidInput("hitting set: set " + std::to_string(j) + " is empty");
      if (s.back() >= ground_size_)
        throw InvalidInput("hitting set: set " + std::to_string(j) + " has an element outside the ground set");
    }
    if (!sets_.empty()) {
      const std::size_t s0 = sets_.front().size();
      if (std::all_of(sets_.begin(), sets_.end(), [&](const auto& s) { return s.size() == s0; }))
        uniform_size_ = s0;
    }
  }

  std::size_t ground_size() const { return ground_size_; }
  const std::vector<std::vector<std::size_t>>& sets() const { return sets_; }
  std::size_t k() const { return sets_.size(); }
  std::optional<std::size_t> uniform_size() const { return uniform_size_; }

  bool is_hitting_set(const std::vector<std::size_t>& h) const {
    for (const auto& s : sets_) {
      const bool hit = std::any_of(s.begin(), s.end(), [&](std::size_t e) {
        return std::find(h.begin(), h.end(), e) != h.end();
      });
      if (!hit) return false;
    }
    return true;
  }

 private:
  std::size_t ground_size_;
  std::vector<std::vector<std::size_t>> sets_;
  std::optional<std::size_t> uniform_size_;
};

struct HittingSetResult {
  std::vector<std::size_t> elements;  // best hitting set found, sorted
  bool exact = false;                 // search finished within the node cap
  std::size_t lower_bound = 0;        // pairwise-disjoint packing bound at the root
  std::size_t nodes = 0;
};

namespace detail {

using Mask = std::uint64_t;

// Size of a greedy packing of pairwise disjoint masks: a lower bound on
// any hitting set of them.
inline std::size_t disjoint_packing(std::vector<Mask> sets) {
  std::sort(sets.begin(), sets.end(), [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });
  Mask used = 0;
  std::size_t count = 0;
  for (Mask s : sets) {
    if ((s & used) == 0) {
      used |= s;
      ++count;
    }
  }
  return count;
}

class HittingSetSearch {
 public:
  HittingSetSearch(std::vector<Mask> sets, std::size_t ground, std::size_t node_cap)
      : sets_(std::move(sets)), ground_(ground), node_cap_(node_cap) {}

  HittingSetResult run() {
    best_ = greedy();
    HittingSetResult r;
    r.lower_bound = disjoint_packing(sets_);
    if (std::popcount(best_) > static_cast<int>(r.lower_bound)) search(0, 0);
    r.exact = !aborted_;
    r.nodes = nodes_;
    for (std::size_t e = 0; e < ground_; ++e)
      if (best_ >> e & 1) r.elements.push_back(e);
    return r;
  }

 private:
  Mask greedy() const {
    Mask chosen = 0;
    for (;;) {
      std::vector<std::size_t> freq(ground_, 0);
      bool any = false;
      for (Mask s : sets_) {
        if (s & chosen) continue;
        any = true;
        for (std::size_t e = 0; e < ground_; ++e) freq[e] += s >> e & 1;
      }
      if (!any) return chosen;
      chosen |= Mask{1} << static_cast<std::size_t>(std::max_element(freq.begin(), freq.end()) - freq.begin());
    }
  }

  void search(Mask chosen, Mask forbidden) {
    if (aborted_) return;
    if (++nodes_ > node_cap_) {
      aborted_ = true;
      return;
    }
    std::vector<Mask> open;
    for (Mask s : sets_) {
      if (s & chosen) continue;
      const Mask avail = s & ~forbidden;
      if (avail == 0) return;
      open.push_back(avail);
    }
    if (open.empty()) {
      if (std::popcount(chosen) < std::popcount(best_)) best_ = chosen;
      return;
    }
    if (std::popcount(chosen) + static_cast<int>(disjoint_packing(open)) >= std::popcount(best_)) return;

    const Mask branch = *std::min_element(open.begin(), open.end(), [](Mask a, Mask b) {
      return std::popcount(a) < std::popcount(b);
    });
    std::vector<std::pair<std::size_t, std::size_t>> order;  // (-frequency, element)
    for (std::size_t e = 0; e < ground_; ++e) {
      if (!(branch >> e & 1)) continue;
      std::size_t f = 0;
      for (Mask s : open) f += s >> e & 1;
      order.emplace_back(ground_ * sets_.size() - f, e);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [_, e] : order) {
      search(chosen | Mask{1} << e, forbidden);
      forbidden |= Mask{1} << e;
    }
  }

  std::vector<Mask> sets_;
  std::size_t ground_;
  std::size_t node_cap_;
  Mask best_ = 0;
  std::size_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace detail

inline constexpr std::size_t kDefaultHittingSetNodeCap = 5'000'000;

/// Minimum hitting set by branch and bound: branch on the elements of an
/// unhit set, prune with a disjoint-set packing bound, start from greedy.
/// If the node cap is reached the best set found is returned with
/// exact = false.
inline HittingSetResult min_hitting_set(const HittingSetInstance& hs,
                                        std::optional<std::size_t> node_cap = std::nullopt) {
  if (hs.ground_size() > 64) throw CapsExceeded("hitting set: ground set larger than 64 elements");
  std::vector<detail::Mask> masks;
  for (const auto& s : hs.sets()) {
    detail::Mask m = 0;
    for (std::size_t e : s) m |= detail::Mask{1} << e;
    masks.push_back(m);
  }
  return detail::HittingSetSearch(std::move(masks), hs.ground_size(),
                                  node_cap.value_or(kDefaultHittingSetNodeCap))
      .run();
}

}  // namespace xclust
