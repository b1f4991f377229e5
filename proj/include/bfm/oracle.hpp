// Copyright 2026 The Authors.
//
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

// Exhaustive reference solvers. Nothing here shares code with the
// mechanisms' greedy or matching routines.

#ifndef BFM_ORACLE_HPP_
#define BFM_ORACLE_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bfm/element.hpp"
#include "bfm/intersection.hpp"
#include "bfm/matroid.hpp"
#include "bfm/rational.hpp"

namespace bfm {

inline constexpr std::size_t kBruteForceCap = 22;

// Maximum-value independent set whose total cost is at most `budget`
// (no budget: unconstrained). Ties go to the lexicographically smallest
// id sequence. Depth-first over independent sets only, so the hereditary
// property prunes dependent branches; positive costs prune over-budget ones.
template <class Independence>
ElementSet brute_force_opt(std::span<const Element> ground, const Independence& independent,
                           const WeightVector& w, const PerElement<Rational>& costs,
                           const std::optional<Rational>& budget) {
  if (ground.size() > kBruteForceCap)
    throw CapError("brute-force oracle is capped at " + std::to_string(kBruteForceCap) +
                   " elements (got " + std::to_string(ground.size()) + ")");
  ElementSet best;
  Rational best_value = 0;
  ElementSet current;

  auto visit = [&](auto&& self, std::size_t next, const Rational& value,
                   const Rational& cost) -> void {
    if (value > best_value || (value == best_value && lexicographically_less(current, best))) {
      best = current;
      best_value = value;
    }
    for (std::size_t i = next; i < ground.size(); ++i) {
      Element e = ground[i];
      Rational new_cost = cost + costs[e];
      if (budget && new_cost > *budget) continue;
      current.push_back(e);
      if (independent(current)) self(self, i + 1, value + w[e], new_cost);
      current.pop_back();
    }
  };
  visit(visit, 0, Rational(0), Rational(0));
  return best;
}

inline ElementSet brute_force_opt(const MatroidSpec& m, const WeightVector& w,
                                  const PerElement<Rational>& costs,
                                  const std::optional<Rational>& budget) {
  return brute_force_opt(
      m.ground(), [&](const ElementSet& s) { return m.is_independent(s); }, w, costs, budget);
}

inline ElementSet brute_force_opt(const IntersectionSpec& spec, const WeightVector& w,
                                  const PerElement<Rational>& costs,
                                  const std::optional<Rational>& budget) {
  return brute_force_opt(
      spec.ground(), [&](const ElementSet& s) { return spec.is_independent(s); }, w, costs,
      budget);
}

// Unbudgeted maximum-weight independent set (the MAX role).
template <class Feasibility>
ElementSet brute_force_max(const Feasibility& f, const WeightVector& w) {
  PerElement<Rational> zero(w.size(), Rational(0));
  return brute_force_opt(f, w, zero, std::nullopt);
}

// Every subset of `ground` (as sorted sets), for exhaustive property tests.
inline std::vector<ElementSet> all_subsets(std::span<const Element> ground) {
  if (ground.size() > kBruteForceCap) throw CapError("too many elements to enumerate");
  std::vector<ElementSet> out;
  const std::size_t count = std::size_t{1} << ground.size();
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    ElementSet s;
    for (std::size_t i = 0; i < ground.size(); ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(ground[i]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace bfm

#endif  // BFM_ORACLE_HPP_
