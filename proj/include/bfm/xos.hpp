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

// Randomized, universally truthful procurement for XOS valuations, exact at
// desk scale (subset enumeration), plus the tuning of its (alpha, beta)
// parameters.

#ifndef BFM_XOS_HPP_
#define BFM_XOS_HPP_

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bfm/element.hpp"
#include "bfm/matroid.hpp"
#include "bfm/mechanism.hpp"
#include "bfm/rational.hpp"

namespace bfm {

// v(S) = max_k f_k(S) over nonnegative additive clauses f_k.
class XosValuation {
 public:
  XosValuation() = default;
  explicit XosValuation(std::vector<PerElement<Rational>> clauses) : clauses_(std::move(clauses)) {
    if (clauses_.empty()) throw InputError("at least one additive function is required", "xos.functions");
    for (const auto& clause : clauses_) {
      if (clause.size() != clauses_.front().size())
        throw InputError("every function must list one value per element", "xos.functions");
      for (const auto& value : clause.values())
        if (value < 0) throw InputError("function values must be nonnegative", "xos.functions");
    }
  }

  std::size_t size() const { return clauses_.front().size(); }
  std::size_t clause_count() const { return clauses_.size(); }
  const PerElement<Rational>& clause(std::size_t k) const { return clauses_.at(k); }
  const std::vector<PerElement<Rational>>& clauses() const { return clauses_; }

  // Lowest-index clause attaining v(s).
  std::size_t best_clause(std::span<const Element> s) const {
    std::size_t best = 0;
    Rational best_value = total(clauses_[0], s);
    for (std::size_t k = 1; k < clauses_.size(); ++k) {
      Rational value = total(clauses_[k], s);
      if (value > best_value) {
        best = k;
        best_value = std::move(value);
      }
    }
    return best;
  }

  Rational value(std::span<const Element> s) const {
    return total(clauses_[best_clause(s)], s);
  }

 private:
  std::vector<PerElement<Rational>> clauses_;
};

inline Rational xos_value(const XosValuation& val, std::span<const Element> s) {
  return val.value(s);
}

// Mechanism parameters. `gamma` is the approximation factor credited to the
// additive sub-mechanism; it enters the analysis only.
struct XosParams {
  Rational alpha = 218;
  Rational beta = Rational(9, 2);
  Rational gamma = 4;
  std::uint64_t seed = 0;

  void validate() const {
    if (alpha <= 1) throw InputError("alpha must exceed 1", "--alpha");
    if (beta <= 0) throw InputError("beta must be positive", "--beta");
    if (gamma < 1) throw InputError("gamma must be at least 1", "--gamma");
    if (alpha * beta - beta - 4 * alpha <= 0)
      throw InputError("alpha*beta - beta - 4*alpha must be positive", "--beta");
  }
};

// Splits `opt` into S1, S2 with f*(S_i) >= ((alpha-1)/(2 alpha)) f*(opt),
// where f* is the clause attaining v(opt). S1 takes elements in ascending id
// order until it reaches the bound. Requires f*(e) <= f*(opt)/alpha on opt.
inline std::pair<ElementSet, ElementSet> partition_halves(const XosValuation& val,
                                                          std::span<const Element> opt,
                                                          const Rational& alpha,
                                                          const Universe* names = nullptr) {
  if (alpha <= 1) throw InputError("alpha must exceed 1", "alpha");
  const auto& f = val.clause(val.best_clause(opt));
  const Rational whole = total(f, opt);
  for (Element e : opt) {
    if (f[e] * alpha > whole) {
      std::string label = names ? names->id(e) : "#" + std::to_string(e.index);
      throw InputError("element " + label + " carries more than 1/alpha of f*(opt)", "opt");
    }
  }
  const Rational target = (alpha - 1) / (2 * alpha) * whole;
  ElementSet first, second;
  Rational first_value = 0;
  for (Element e : opt) {
    if (first_value >= target) {
      second.push_back(e);
    } else {
      first.push_back(e);
      first_value += f[e];
    }
  }
  return {first, second};
}

// All randomness of one mechanism run, drawn up front from a seeded
// mt19937_64 (bit = top bit of each draw): the first coin chooses the
// single-element branch, then one bit per ground element places it in the
// first half.
struct CoinTape {
  bool top_element = false;
  std::vector<bool> in_first_half;

  static CoinTape draw(std::uint64_t seed, std::size_t ground_size) {
    std::mt19937_64 gen(seed);
    auto bit = [&] { return (gen() >> 63) != 0; };
    CoinTape tape;
    tape.top_element = bit();
    tape.in_first_half.reserve(ground_size);
    for (std::size_t i = 0; i < ground_size; ++i) tape.in_first_half.push_back(bit());
    return tape;
  }
};

// Element i of `ground` goes to the first half iff tape bit i is set.
inline std::pair<ElementSet, ElementSet> random_split(std::span<const Element> ground,
                                                      const CoinTape& tape) {
  ElementSet first, second;
  for (std::size_t i = 0; i < ground.size(); ++i)
    (tape.in_first_half.at(i) ? first : second).push_back(ground[i]);
  return {first, second};
}

inline std::pair<ElementSet, ElementSet> random_split(std::span<const Element> ground,
                                                      std::uint64_t seed) {
  return random_split(ground, CoinTape::draw(seed, ground.size()));
}

// min(1/(2a), (1/2)(1/gamma)(1/2) min((a-1)/(8ab), (ab-b-4a)/(4ab))).
inline double approximation_objective(double alpha, double beta, double gamma) {
  const double single = 1.0 / (2.0 * alpha);
  const double expensive = (alpha - 1.0) / (8.0 * alpha * beta);
  const double cheap = (alpha * beta - beta - 4.0 * alpha) / (4.0 * alpha * beta);
  return std::min(single, std::min(expensive, cheap) / (4.0 * gamma));
}

struct ConstantChoice {
  double alpha = 0;
  double beta = 0;
  double ratio = 0;  // 1 / objective
};

// Maximises approximation_objective over alpha > 1, beta > 0.
//
// For fixed alpha the two inner terms are decreasing and increasing in beta
// and cross at beta = 1/2 + 4a/(a-1), where both equal
// (a-1)^2 / (4a(9a-1)), increasing in alpha. The outer 1/(2a) decreases, so
// the optimum equalises them: a^2 - (2 + 72g) a + (1 + 8g) = 0, larger root.
inline ConstantChoice optimize_constant(double gamma) {
  if (!(gamma >= 1.0)) throw InputError("gamma must be at least 1", "--gamma");
  const double b = 2.0 + 72.0 * gamma;
  const double c = 1.0 + 8.0 * gamma;
  const double alpha = (b + std::sqrt(b * b - 4.0 * c)) / 2.0;
  const double beta = 0.5 + 4.0 * alpha / (alpha - 1.0);
  return {alpha, beta, 1.0 / approximation_objective(alpha, beta, gamma)};
}

struct XosInstance {
  Universe universe;
  XosValuation valuation;
  PerElement<Rational> true_costs;
  PerElement<Rational> bids;
  Rational budget;

  ElementSet ground() const { return universe.all(); }
};

inline void validate(const XosInstance& inst) {
  const std::size_t n = inst.universe.size();
  if (n == 0) throw InputError("the ground set is empty", "elements");
  if (inst.valuation.size() != n)
    throw InputError("every function must list one value per element", "xos.functions");
  if (inst.true_costs.size() != n || inst.bids.size() != n)
    throw InputError("costs and bids must cover the ground set", "elements");
  if (inst.budget <= 0) throw InputError("budget must be positive", "budget");
  for (Element e : inst.ground()) {
    const std::string where = "elements[" + inst.universe.id(e) + "]";
    if (inst.true_costs[e] <= 0) throw InputError("cost must be positive", where + ".cost");
    if (inst.bids[e] <= 0) throw InputError("bid must be positive", where + ".bid");
    if (inst.bids[e] > inst.budget) throw InputError("bid exceeds the budget", where + ".bid");
  }
}

struct XosOutcome {
  Outcome outcome;
  bool top_element_branch = false;
  ElementSet first_half;       // T1
  ElementSet second_half;      // T2
  ElementSet first_half_opt;   // OPT(T1) under bids
  Rational threshold;          // t
  ElementSet chosen;           // S*
  std::size_t clause = 0;      // f, attaining v(S*)
};

inline constexpr std::size_t kDefaultXosCap = 16;

// Sorted id sequences compared lexicographically, on bitmasks whose bit i
// is the i-th smallest element.
inline bool mask_lex_less(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  const int p = std::countr_zero(a ^ b);
  const std::uint32_t above = ~((std::uint32_t{2} << p) - 1);
  if ((a >> p) & 1u) return (b & above) != 0;  // b continues past p with a larger id
  return (a & above) == 0;                     // a ends before b's element p
}

// XOS mechanism with the subset-value table of its valuation prebuilt, so
// repeated runs (seeds, bid deviations) share it.
class XosMechanism {
 public:
  explicit XosMechanism(XosValuation valuation, std::size_t cap = kDefaultXosCap)
      : valuation_(std::move(valuation)) {
    const std::size_t n = valuation_.size();
    if (n == 0) throw InputError("the ground set is empty", "elements");
    if (n > cap || n > 24)
      throw CapError("XOS mechanism enumerates subsets and is capped at " + std::to_string(cap) +
                     " elements (got " + std::to_string(n) + "); reduce the instance size");
    const std::size_t count = std::size_t{1} << n;
    value_.assign(count, Rational(0));
    std::vector<Rational> sums(count, Rational(0));
    for (const auto& clause : valuation_.clauses()) {
      for (std::size_t mask = 1; mask < count; ++mask) {
        const int low = std::countr_zero(mask);
        sums[mask] = sums[mask & (mask - 1)] + clause[Element{static_cast<std::uint32_t>(low)}];
        if (sums[mask] > value_[mask]) value_[mask] = sums[mask];
      }
    }
  }

  const XosValuation& valuation() const { return valuation_; }

  const Rational& value(std::uint32_t mask) const { return value_[mask]; }

  XosOutcome run(const PerElement<Rational>& bids, const Rational& budget,
                 const XosParams& params) const {
    const std::size_t n = valuation_.size();
    const CoinTape tape = CoinTape::draw(params.seed, n);
    XosOutcome result;
    result.outcome = empty_outcome(n);

    if (tape.top_element) {
      result.top_element_branch = true;
      std::uint32_t best = 0;
      for (std::uint32_t i = 1; i < n; ++i)
        if (value_[1u << i] > value_[1u << best]) best = i;
      result.outcome.allocation[Element{best}] = true;
      result.outcome.payments[Element{best}] = budget;
      result.outcome.branch = Branch::kTau;
      result.outcome.tau = Element{best};
      return result;
    }

    std::uint32_t first_mask = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      if (tape.in_first_half[i]) first_mask |= 1u << i;
    const std::uint32_t second_mask = static_cast<std::uint32_t>((std::size_t{1} << n) - 1) & ~first_mask;
    result.first_half = to_set(first_mask);
    result.second_half = to_set(second_mask);

    // OPT(T1): most valuable subset of T1 affordable at the bids.
    std::uint32_t opt_mask = 0;
    for_each_submask(first_mask, bids, [&](std::uint32_t sub, const Rational& cost) {
      if (cost > budget) return;
      const Rational& v = value_[sub];
      if (v > value_[opt_mask] || (v == value_[opt_mask] && mask_lex_less(sub, opt_mask)))
        opt_mask = sub;
    });
    result.first_half_opt = to_set(opt_mask);
    result.threshold = value_[opt_mask] / (params.beta * budget);

    // S* = argmax over subsets of T2 of v(S) - t c(S); ties: smaller c(S),
    // then lexicographically smaller.
    std::uint32_t chosen = 0;
    Rational chosen_score = 0;
    Rational chosen_cost = 0;
    for_each_submask(second_mask, bids, [&](std::uint32_t sub, const Rational& cost) {
      Rational score = value_[sub] - result.threshold * cost;
      if (score > chosen_score ||
          (score == chosen_score &&
           (cost < chosen_cost || (cost == chosen_cost && mask_lex_less(sub, chosen))))) {
        chosen = sub;
        chosen_score = std::move(score);
        chosen_cost = cost;
      }
    });
    result.chosen = to_set(chosen);
    result.clause = valuation_.best_clause(result.chosen);
    if (result.chosen.empty()) return result;

    // Additive sub-mechanism: the matroid mechanism on the free matroid over
    // S* with the clause f as weights.
    const auto& f = valuation_.clause(result.clause);
    for (Element e : result.chosen)
      if (f[e] <= 0) throw std::logic_error("chosen set contains a zero-value element");
    result.outcome = run_matroid_mechanism(MatroidSpec::free(result.chosen), n, f, bids, budget);
    return result;
  }

 private:
  ElementSet to_set(std::uint32_t mask) const {
    ElementSet out;
    for (std::uint32_t i = 0; mask != 0; ++i, mask >>= 1)
      if (mask & 1u) out.push_back(Element{i});
    return out;
  }

  // Visits every submask of `mask` (including 0) with its total bid.
  template <class Visit>
  void for_each_submask(std::uint32_t mask, const PerElement<Rational>& bids, Visit&& visit) const {
    std::vector<std::uint32_t> bits;
    for (std::uint32_t i = 0; (mask >> i) != 0; ++i)
      if ((mask >> i) & 1u) bits.push_back(i);
    const std::size_t count = std::size_t{1} << bits.size();
    std::vector<std::uint32_t> full(count, 0);
    std::vector<Rational> cost(count, Rational(0));
    visit(0u, cost[0]);
    for (std::size_t j = 1; j < count; ++j) {
      const int low = std::countr_zero(j);
      const std::size_t rest = j & (j - 1);
      full[j] = full[rest] | (1u << bits[low]);
      cost[j] = cost[rest] + bids[Element{bits[low]}];
      visit(full[j], cost[j]);
    }
  }

  XosValuation valuation_;
  std::vector<Rational> value_;
};

inline XosOutcome xos_mechanism_main(const XosInstance& inst, const XosParams& params,
                                     std::size_t cap = kDefaultXosCap) {
  validate(inst);
  params.validate();
  return XosMechanism(inst.valuation, cap).run(inst.bids, inst.budget, params);
}

inline Rational utility(const XosInstance& inst, const Outcome& out, Element e) {
  return utility(inst.true_costs, out, e);
}

}  // namespace bfm

#endif  // BFM_XOS_HPP_
