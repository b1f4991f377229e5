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

#include "bfm/oracle.hpp"

#include <gtest/gtest.h>

#include "bfm/generator.hpp"

namespace bfm {
namespace {

PerElement<Rational> values(std::initializer_list<Rational> list) {
  return PerElement<Rational>(std::vector<Rational>(list));
}

TEST(BruteForceOpt, ZeroBudgetIsEmpty) {
  auto m = MatroidSpec::uniform(make_set({0, 1, 2}), 2);
  EXPECT_TRUE(brute_force_opt(m, values({6, 5, 4}), values({6, 2, 2}), Rational(0)).empty());
}

TEST(BruteForceOpt, UniformTwoExample) {
  auto m = MatroidSpec::uniform(make_set({0, 1, 2}), 2);
  EXPECT_EQ(brute_force_opt(m, values({6, 5, 4}), values({6, 2, 2}), Rational(10)), make_set({0, 1}));
}

TEST(BruteForceOpt, SingletonFallbackWhenCostsWithinBudget) {
  auto m = MatroidSpec::free(make_set({0, 1, 2}));
  auto s = brute_force_opt(m, values({1, 9, 2}), values({5, 5, 5}), Rational(5));
  EXPECT_EQ(s, make_set({1}));
}

TEST(BruteForceOpt, CapError) {
  auto m = MatroidSpec::free(numbered_universe(23).all());
  PerElement<Rational> ones(23, Rational(1));
  EXPECT_THROW(brute_force_opt(m, ones, ones, Rational(1)), CapError);
}

TEST(BruteForceOpt, AgreesWithPlainEnumeration) {
  InstanceGenerator gen(GeneratorConfig{});
  for (std::size_t i = 0; i < 100; ++i) {
    auto inst = gen.matroid_instance(i).instance;
    if (inst.universe.size() > 10) continue;
    ElementSet best;
    Rational best_value = 0;
    for (const ElementSet& s : all_subsets(inst.ground())) {
      if (!inst.feasibility.is_independent(s) || total(inst.true_costs, s) > inst.budget) continue;
      const Rational v = total(inst.weights, s);
      if (v > best_value || (v == best_value && lexicographically_less(s, best))) {
        best = s;
        best_value = v;
      }
    }
    ASSERT_EQ(brute_force_opt(inst.feasibility, inst.weights, inst.true_costs, inst.budget), best);
  }
}

TEST(BruteForceOpt, MonotoneInBudget) {
  InstanceGenerator gen(GeneratorConfig{});
  for (std::size_t i = 0; i < 100; ++i) {
    auto inst = gen.matroid_instance(i).instance;
    const Rational everything = total(inst.true_costs, inst.ground());
    const auto loose = brute_force_opt(inst.feasibility, inst.weights, inst.true_costs, everything);
    const auto tight = brute_force_opt(inst.feasibility, inst.weights, inst.true_costs, inst.budget);
    ASSERT_GE(total(inst.weights, loose), total(inst.weights, tight));
    // With every cost affordable the budget does not bind: equals MAX.
    ASSERT_EQ(total(inst.weights, loose),
              total(inst.weights, brute_force_max(inst.feasibility, inst.weights)));
  }
}

TEST(AllSubsets, CountsAndOrder) {
  auto subsets = all_subsets(make_set({0, 1, 2}));
  ASSERT_EQ(subsets.size(), 8u);
  EXPECT_TRUE(subsets[0].empty());
  EXPECT_EQ(subsets[5], make_set({0, 2}));
}

}  // namespace
}  // namespace bfm
