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

// Budget-feasible procurement over matroids and matroid intersections.
//
// Both mechanisms share one descending-price loop. The maximum-weight
// element tau is set aside; the rest are visited in non-increasing
// buck-per-bang order. At step i the price is bb(i) and the selector
// returns the best set it can find with T and tau deleted. If paying that
// set at bb(i) per unit of weight overshoots the budget, element i joins T
// and the loop continues. The final price is min(b / w(S), bb(i - 1)); the
// buyer takes S at that price if w(S) > w_tau and otherwise takes tau alone
// for the whole budget.

#ifndef BFM_MECHANISM_HPP_
#define BFM_MECHANISM_HPP_

#include <algorithm>
#include <concepts>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bfm/element.hpp"
#include "bfm/intersection.hpp"
#include "bfm/matroid.hpp"
#include "bfm/rational.hpp"

namespace bfm {

// A procurement instance over a feasibility structure F (MatroidSpec or
// IntersectionSpec). Mechanisms read `bids` only; `true_costs` exist for
// utility and for the oracles.
template <class Feasibility>
struct Instance {
  Universe universe;
  Feasibility feasibility;
  WeightVector weights;
  PerElement<Rational> true_costs;
  PerElement<Rational> bids;
  Rational budget;

  const ElementSet& ground() const { return feasibility.ground(); }
};

using MatroidInstance = Instance<MatroidSpec>;
using IntersectionInstance = Instance<IntersectionSpec>;

// Rejects malformed instances: non-positive numbers or vectors not covering
// the ground set. Bids above the budget are rejected when a file is loaded
// (io.hpp), not here: the spec's removal-then-tau example itself carries a
// bid above the budget and is run in memory.
template <class Feasibility>
void validate(const Instance<Feasibility>& inst) {
  const std::size_t n = inst.universe.size();
  if (inst.ground() != inst.universe.all())
    throw InputError("the ground set must contain every listed element", "elements");
  if (inst.weights.size() != n || inst.true_costs.size() != n || inst.bids.size() != n)
    throw InputError("weights, costs and bids must cover the ground set", "elements");
  if (inst.budget <= 0) throw InputError("budget must be positive", "budget");
  for (Element e : inst.ground()) {
    const std::string where = "elements[" + inst.universe.id(e) + "]";
    if (inst.weights[e] <= 0) throw InputError("weight must be positive", where + ".weight");
    if (inst.true_costs[e] <= 0) throw InputError("cost must be positive", where + ".cost");
    if (inst.bids[e] <= 0) throw InputError("bid must be positive", where + ".bid");
  }
}

// One pass of the descending-price loop.
struct TraceStep {
  std::size_t iteration = 0;      // 1-based
  Rate rate;                      // bb(i) used in the budget test
  ElementSet selected;            // MAX / APX set with T and tau deleted
  Rational selected_weight;
  std::optional<Element> removed; // element moved into T, if any
};

enum class Branch { kSelected, kTau, kEmpty };

struct Outcome {
  PerElement<bool> allocation;
  PerElement<Rational> payments;
  std::vector<TraceStep> trace;

  // Diagnostics consumed by the property checks.
  Element tau{};
  ElementSet removed;        // T at exit
  ElementSet final_set;      // selector output at exit
  Rational final_weight;
  Rate final_rate;           // min(b / w(S), bb(i - 1))
  Branch branch = Branch::kEmpty;

  ElementSet allocated() const {
    ElementSet out;
    for (std::uint32_t i = 0; i < allocation.size(); ++i)
      if (allocation[Element{i}]) out.push_back(Element{i});
    return out;
  }

  Rational total_payment() const {
    Rational sum = 0;
    for (const auto& p : payments.values()) sum += p;
    return sum;
  }
};

inline Outcome empty_outcome(std::size_t universe_size) {
  Outcome out;
  out.allocation = PerElement<bool>(universe_size, false);
  out.payments = PerElement<Rational>(universe_size, Rational(0));
  out.final_rate = Rate::infinity();
  return out;
}

// bb(e) = d_e / w_e.
inline Rational buck_per_bang(const WeightVector& w, const PerElement<Rational>& bids, Element e) {
  return bids[e] / w[e];
}

// Maximum-weight element; smallest id on ties.
inline Element heaviest(std::span<const Element> ground, const WeightVector& w) {
  Element best = ground.front();
  for (Element e : ground)
    if (w[best] < w[e]) best = e;
  return best;
}

// E - tau by bb descending, id ascending on ties.
inline ElementSet buck_per_bang_order(std::span<const Element> ground, Element tau,
                                      const WeightVector& w, const PerElement<Rational>& bids) {
  ElementSet order;
  for (Element e : ground)
    if (e != tau) order.push_back(e);
  std::stable_sort(order.begin(), order.end(), [&](Element a, Element b) {
    // bids[a] / w[a] > bids[b] / w[b], cross-multiplied (weights positive).
    return bids[a] * w[b] > bids[b] * w[a];
  });
  return order;
}

// Callable mapping the deleted set (T plus tau) to the chosen set.
template <class S>
concept Selector = requires(const S& select, const ElementSet& deleted) {
  { select(deleted) } -> std::convertible_to<ElementSet>;
};

// The shared descending-price loop over `ground`. The payment vectors are
// sized for `universe_size` so sub-runs on part of a universe compose.
template <Selector Select>
Outcome run_descending_price(std::span<const Element> ground, std::size_t universe_size,
                             const WeightVector& w, const PerElement<Rational>& bids,
                             const Rational& budget, const Select& select) {
  if (ground.empty()) throw InputError("the ground set is empty", "elements");
  Outcome out = empty_outcome(universe_size);
  out.tau = heaviest(ground, w);
  const ElementSet order = buck_per_bang_order(ground, out.tau, w, bids);

  ElementSet deleted{out.tau};
  std::size_t i = 0;  // 0-based position of the element under test
  for (;; ++i) {
    TraceStep step;
    step.iteration = i + 1;
    step.selected = select(deleted);
    step.selected_weight = total(w, step.selected);
    if (i == order.size()) {
      // Everything but tau was removed; bb(|E - tau| + 1) does not exist.
      step.rate = Rate::infinity();
      out.trace.push_back(std::move(step));
      break;
    }
    const Rational rate = buck_per_bang(w, bids, order[i]);
    step.rate = Rate(rate);
    const bool over_budget = step.selected_weight * rate > budget;
    if (over_budget) step.removed = order[i];
    out.trace.push_back(step);
    if (!over_budget) break;
    out.removed = with(out.removed, order[i]);
    deleted = with(deleted, order[i]);
  }

  out.final_set = out.trace.back().selected;
  out.final_weight = out.trace.back().selected_weight;
  const Rate previous = i == 0 ? Rate::infinity() : Rate(buck_per_bang(w, bids, order[i - 1]));
  out.final_rate = min(ratio_or_infinity(budget, out.final_weight), previous);

  if (out.final_weight > w[out.tau]) {
    out.branch = Branch::kSelected;
    for (Element e : out.final_set) {
      out.allocation[e] = true;
      out.payments[e] = out.final_rate.value() * w[e];
    }
  } else {
    out.branch = Branch::kTau;
    out.allocation[out.tau] = true;
    out.payments[out.tau] = budget;
  }
  return out;
}

// Matroid mechanism on an explicit matroid; `bids` and `w` indexed over the
// matroid's universe.
inline Outcome run_matroid_mechanism(const MatroidSpec& matroid, std::size_t universe_size,
                                     const WeightVector& w, const PerElement<Rational>& bids,
                                     const Rational& budget) {
  auto select = [&](const ElementSet& deleted) {
    return max_weight_independent_set(delete_elements(matroid, deleted), w);
  };
  return run_descending_price(matroid.ground(), universe_size, w, bids, budget, select);
}

inline Outcome run_matroid_mechanism(const MatroidInstance& inst) {
  validate(inst);
  return run_matroid_mechanism(inst.feasibility, inst.universe.size(), inst.weights, inst.bids,
                               inst.budget);
}

// Intersection mechanism: the greedy MAX step is replaced by `apx`, which
// sees the reduced intersection and the weights only.
inline Outcome run_intersection_mechanism(const IntersectionInstance& inst, const ApxBlackbox& apx) {
  validate(inst);
  auto select = [&](const ElementSet& deleted) {
    return apx(delete_elements(inst.feasibility, deleted), inst.weights);
  };
  return run_descending_price(inst.ground(), inst.universe.size(), inst.weights, inst.bids,
                              inst.budget, select);
}

// u_e = p_e - f_e * c_e against the true cost.
template <class Feasibility>
Rational utility(const Instance<Feasibility>& inst, const Outcome& out, Element e) {
  if (e.index >= inst.universe.size())
    throw InputError("element #" + std::to_string(e.index) + " is not in the ground set");
  return out.payments[e] - (out.allocation[e] ? inst.true_costs[e] : Rational(0));
}

inline Rational utility(const PerElement<Rational>& true_costs, const Outcome& out, Element e) {
  return out.payments[e] - (out.allocation[e] ? true_costs[e] : Rational(0));
}

}  // namespace bfm

#endif  // BFM_MECHANISM_HPP_
