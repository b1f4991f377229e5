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

// Seeded random instances for the verification harness and benchmarks.
// Instance i depends only on (seed, i), so pools can be generated in any
// order or in parallel.

#ifndef BFM_GENERATOR_HPP_
#define BFM_GENERATOR_HPP_

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bfm/element.hpp"
#include "bfm/intersection.hpp"
#include "bfm/matroid.hpp"
#include "bfm/mechanism.hpp"
#include "bfm/rational.hpp"
#include "bfm/xos.hpp"

namespace bfm {

enum class MatroidFamily { kUniform, kPartition, kGraphic, kDeadline, kFree };
enum class WeightDistribution { kUniformInteger, kHeavyTail };
enum class BudgetRegime { kTight, kLoose };

inline const char* to_string(MatroidFamily f) {
  switch (f) {
    case MatroidFamily::kUniform: return "uniform";
    case MatroidFamily::kPartition: return "partition";
    case MatroidFamily::kGraphic: return "graphic";
    case MatroidFamily::kDeadline: return "deadline";
    case MatroidFamily::kFree: return "free";
  }
  return "?";
}

inline const char* to_string(WeightDistribution d) {
  return d == WeightDistribution::kUniformInteger ? "uniform-integer" : "heavy-tail";
}

inline const char* to_string(BudgetRegime r) { return r == BudgetRegime::kTight ? "tight" : "loose"; }

struct GeneratorConfig {
  std::size_t n_min = 3;
  std::size_t n_max = 12;
  std::vector<MatroidFamily> families = {MatroidFamily::kUniform, MatroidFamily::kPartition,
                                         MatroidFamily::kGraphic, MatroidFamily::kDeadline};
  std::vector<WeightDistribution> weights = {WeightDistribution::kUniformInteger,
                                             WeightDistribution::kHeavyTail};
  std::vector<BudgetRegime> budgets = {BudgetRegime::kTight, BudgetRegime::kLoose};
  std::uint64_t seed = 1;
  // XOS pools only.
  std::size_t clauses_min = 1;
  std::size_t clauses_max = 4;

  void validate() const {
    if (n_min < 1 || n_min > n_max) throw InputError("need 1 <= n_min <= n_max", "n_min");
    if (families.empty()) throw InputError("no matroid kinds selected", "kinds");
    if (weights.empty()) throw InputError("no weight distributions selected", "weights");
    if (budgets.empty()) throw InputError("no budget regimes selected", "budget_regimes");
    if (clauses_min < 1 || clauses_min > clauses_max)
      throw InputError("need 1 <= clauses_min <= clauses_max", "xos.m_max");
  }
};

// mt19937_64 plus distribution code written out, so streams are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = gen_(); while (x >= limit);
    return x % n;
  }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  // Uniform in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  template <class T>
  const T& pick(const std::vector<T>& options) { return options[below(options.size())]; }
  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// SplitMix64 finaliser; decorrelates per-instance seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline Universe numbered_universe(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "e%02zu", i);
    ids.emplace_back(buffer);
  }
  return Universe::from_ids(std::move(ids));
}

struct Market {
  WeightVector weights;
  PerElement<Rational> costs;
  Rational budget;
};

namespace detail {

inline Rational draw_weight(Rng& rng, WeightDistribution d) {
  if (d == WeightDistribution::kUniformInteger) return Rational(static_cast<long>(rng.between(1, 20)));
  // Log-uniform on [1, 256].
  return Rational(static_cast<long>(std::floor(std::exp2(rng.unit() * 8.0))));
}

inline Rational draw_cost(Rng& rng) {
  return Rational(static_cast<long>(rng.between(1, 30)), static_cast<long>(rng.between(1, 4)));
}

inline Market draw_market(Rng& rng, std::size_t n, WeightDistribution wd, BudgetRegime regime) {
  Market m{WeightVector(n), PerElement<Rational>(n), Rational(0)};
  Rational sum = 0, largest = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    m.weights[Element{i}] = draw_weight(rng, wd);
    m.costs[Element{i}] = draw_cost(rng);
    sum += m.costs[Element{i}];
    largest = std::max(largest, m.costs[Element{i}]);
  }
  if (regime == BudgetRegime::kLoose) {
    m.budget = sum;
  } else {
    m.budget = sum * Rational(static_cast<long>(rng.between(1, 3)), 8);
    if (m.budget < largest) m.budget = largest;
  }
  return m;
}

}  // namespace detail

inline MatroidSpec random_matroid(Rng& rng, MatroidFamily family, const ElementSet& ground) {
  const std::size_t n = ground.size();
  switch (family) {
    case MatroidFamily::kUniform:
      return MatroidSpec::uniform(ground, rng.between(1, std::max<std::size_t>(1, n)));
    case MatroidFamily::kFree:
      return MatroidSpec::free(ground);
    case MatroidFamily::kPartition: {
      const std::size_t count = rng.between(1, std::max<std::size_t>(1, n / 2));
      std::vector<PartitionBlock> blocks(count);
      for (Element e : ground) blocks[rng.below(count)].members.push_back(e);
      for (auto& block : blocks)
        block.capacity = rng.between(1, std::max<std::size_t>(1, block.members.size()));
      return MatroidSpec::partition(ground, std::move(blocks));
    }
    case MatroidFamily::kGraphic: {
      const std::uint32_t vertices = static_cast<std::uint32_t>(rng.between(2, std::max<std::size_t>(3, n / 2 + 2)));
      std::vector<GraphicEdge> edges;
      for (Element e : ground) {
        std::uint32_t u = static_cast<std::uint32_t>(rng.below(vertices));
        std::uint32_t v = static_cast<std::uint32_t>(rng.below(vertices - 1));
        if (v >= u) ++v;
        edges.push_back({e, u, v});
      }
      return MatroidSpec::graphic(ground, std::move(edges));
    }
    case MatroidFamily::kDeadline: {
      std::vector<DeadlineEntry> deadlines;
      for (Element e : ground)
        deadlines.push_back({e, static_cast<std::uint32_t>(rng.between(1, std::max<std::size_t>(1, n / 2)))});
      return MatroidSpec::deadline(ground, std::move(deadlines));
    }
  }
  throw std::logic_error("unknown matroid family");
}

// Two capacity-one partition matroids encoding a random bipartite graph
// with `ground.size()` edges (parallel edges allowed).
inline IntersectionSpec random_bipartite(Rng& rng, const ElementSet& ground) {
  const std::size_t left = rng.between(2, 4);
  const std::size_t right = rng.between(2, 4);
  std::vector<PartitionBlock> lhs(left), rhs(right);
  for (auto& b : lhs) b.capacity = 1;
  for (auto& b : rhs) b.capacity = 1;
  for (Element e : ground) {
    lhs[rng.below(left)].members.push_back(e);
    rhs[rng.below(right)].members.push_back(e);
  }
  return IntersectionSpec({MatroidSpec::partition(ground, std::move(lhs)),
                           MatroidSpec::partition(ground, std::move(rhs))});
}

struct GeneratedMatroidInstance {
  MatroidInstance instance;
  MatroidFamily family;
  BudgetRegime regime;
};

class InstanceGenerator {
 public:
  explicit InstanceGenerator(GeneratorConfig config) : config_(std::move(config)) { config_.validate(); }

  const GeneratorConfig& config() const { return config_; }

  GeneratedMatroidInstance matroid_instance(std::size_t index) const {
    Rng rng(mix_seed(config_.seed, index));
    const std::size_t n = rng.between(config_.n_min, config_.n_max);
    const MatroidFamily family = rng.pick(config_.families);
    const WeightDistribution wd = rng.pick(config_.weights);
    const BudgetRegime regime = rng.pick(config_.budgets);
    Universe universe = numbered_universe(n);
    MatroidSpec matroid = random_matroid(rng, family, universe.all());
    Market market = detail::draw_market(rng, n, wd, regime);
    return {MatroidInstance{std::move(universe), std::move(matroid), market.weights, market.costs,
                            market.costs, market.budget},
            family, regime};
  }

  IntersectionInstance bipartite_instance(std::size_t index) const {
    Rng rng(mix_seed(config_.seed ^ 0xB1B1B1B1ull, index));
    const std::size_t n = rng.between(config_.n_min, config_.n_max);
    const WeightDistribution wd = rng.pick(config_.weights);
    const BudgetRegime regime = rng.pick(config_.budgets);
    Universe universe = numbered_universe(n);
    IntersectionSpec spec = random_bipartite(rng, universe.all());
    Market market = detail::draw_market(rng, n, wd, regime);
    return {std::move(universe), std::move(spec), market.weights, market.costs, market.costs,
            market.budget};
  }

  XosInstance xos_instance(std::size_t index) const {
    Rng rng(mix_seed(config_.seed ^ 0x05050505ull, index));
    const std::size_t n = rng.between(config_.n_min, config_.n_max);
    const std::size_t m = rng.between(config_.clauses_min, config_.clauses_max);
    const BudgetRegime regime = rng.pick(config_.budgets);
    Universe universe = numbered_universe(n);
    std::vector<PerElement<Rational>> clauses;
    for (std::size_t k = 0; k < m; ++k) {
      PerElement<Rational> clause(n);
      for (std::uint32_t i = 0; i < n; ++i)
        clause[Element{i}] = rng.below(4) == 0 ? Rational(0) : Rational(static_cast<long>(rng.between(1, 20)));
      clauses.push_back(std::move(clause));
    }
    Market market = detail::draw_market(rng, n, WeightDistribution::kUniformInteger, regime);
    return {std::move(universe), XosValuation(std::move(clauses)), market.costs, market.costs,
            market.budget};
  }

 private:
  GeneratorConfig config_;
};

}  // namespace bfm

#endif  // BFM_GENERATOR_HPP_
