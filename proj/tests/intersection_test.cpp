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

#include "bfm/intersection.hpp"

#include <gtest/gtest.h>

#include <set>

#include "bfm/generator.hpp"
#include "bfm/oracle.hpp"

namespace bfm {
namespace {

WeightVector weights(std::initializer_list<long> values) {
  std::vector<Rational> out;
  for (long v : values) out.emplace_back(v);
  return WeightVector(out);
}

// Edges given as (left, right) vertex pairs; element i is edge i.
IntersectionSpec bipartite(std::size_t left, std::size_t right,
                           const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<PartitionBlock> lhs(left), rhs(right);
  for (auto& blk : lhs) blk.capacity = 1;
  for (auto& blk : rhs) blk.capacity = 1;
  ElementSet ground;
  for (std::uint32_t i = 0; i < edges.size(); ++i) {
    ground.push_back(Element{i});
    lhs[edges[i].first].members.push_back(Element{i});
    rhs[edges[i].second].members.push_back(Element{i});
  }
  return IntersectionSpec({MatroidSpec::partition(ground, lhs), MatroidSpec::partition(ground, rhs)});
}

// e11, e12, e21, e22 -> elements 0..3.
IntersectionSpec complete_two_by_two() { return bipartite(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}); }

// Independent oracle: enumerate subsets, keep those with distinct left and
// right endpoints, maximise weight, lexicographically smallest on ties.
ElementSet enumerate_matchings(const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                               const WeightVector& w) {
  ElementSet best;
  Rational best_value = 0;
  const std::size_t count = std::size_t{1} << edges.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::set<std::size_t> left, right;
    ElementSet s;
    bool ok = true;
    for (std::uint32_t i = 0; i < edges.size() && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      ok = left.insert(edges[i].first).second && right.insert(edges[i].second).second;
      s.push_back(Element{i});
    }
    if (!ok) continue;
    Rational value = total(w, s);
    if (value > best_value || (value == best_value && lexicographically_less(s, best))) {
      best = s;
      best_value = value;
    }
  }
  return best;
}

TEST(IntersectionSpecTest, RejectsMismatchedGrounds) {
  auto m1 = MatroidSpec::free(make_set({0, 1}));
  auto m2 = MatroidSpec::free(make_set({0, 1, 2}));
  EXPECT_THROW(IntersectionSpec({m1, m2}), InputError);
  EXPECT_THROW(IntersectionSpec({m1}), InputError);
}

TEST(ExactBipartiteMatching, SingleEdge) {
  auto spec = bipartite(1, 1, {{0, 0}});
  EXPECT_EQ(exact_bipartite_matching(spec, weights({5})), make_set({0}));
}

TEST(ExactBipartiteMatching, ConflictKeepsHeavier) {
  auto spec = bipartite(1, 2, {{0, 0}, {0, 1}});
  EXPECT_EQ(exact_bipartite_matching(spec, weights({3, 2})), make_set({0}));
}

TEST(ExactBipartiteMatching, CompleteTwoByTwo) {
  const std::vector<std::pair<std::size_t, std::size_t>> edges = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  auto w = weights({4, 3, 3, 1});
  auto s = exact_bipartite_matching(complete_two_by_two(), w);
  EXPECT_EQ(s, make_set({1, 2}));
  EXPECT_EQ(total(w, s), 6);
  EXPECT_EQ(s, enumerate_matchings(edges, w));
}

TEST(ExactBipartiteMatching, RejectsOtherShapes) {
  auto ground = make_set({0, 1});
  IntersectionSpec uniform_pair({MatroidSpec::uniform(ground, 1), MatroidSpec::uniform(ground, 1)});
  EXPECT_THROW(exact_bipartite_matching(uniform_pair, weights({1, 1})), InputError);
  IntersectionSpec capacity_two(
      {MatroidSpec::partition(ground, {{ground, 2}}), MatroidSpec::partition(ground, {{ground, 1}})});
  EXPECT_THROW(exact_bipartite_matching(capacity_two, weights({1, 1})), InputError);
  auto p = MatroidSpec::partition(ground, {{ground, 1}});
  IntersectionSpec three({p, p, p});
  EXPECT_THROW(exact_bipartite_matching(three, weights({1, 1})), InputError);
}

TEST(ExactBipartiteMatching, EmptyGraph) {
  IntersectionSpec spec({MatroidSpec::partition({}, {}), MatroidSpec::partition({}, {})});
  EXPECT_TRUE(exact_bipartite_matching(spec, WeightVector()).empty());
}

TEST(GreedyCommonIndependent, Examples) {
  auto ground = make_set({0, 1});
  IntersectionSpec uniform_pair({MatroidSpec::uniform(ground, 1), MatroidSpec::uniform(ground, 1)});
  EXPECT_EQ(greedy_common_independent(uniform_pair, weights({3, 2})), make_set({0}));

  // Path u - v - w as a bipartite graph: left {u, w}, right {v}.
  auto path = bipartite(2, 1, {{0, 0}, {1, 0}});
  EXPECT_EQ(greedy_common_independent(path, weights({2, 2})), make_set({0}));

  auto w = weights({4, 3, 3, 1});
  auto s = greedy_common_independent(complete_two_by_two(), w);
  EXPECT_EQ(s, make_set({0, 3}));
  EXPECT_EQ(total(w, s), 5);
  EXPECT_LT(total(w, s), total(w, exact_bipartite_matching(complete_two_by_two(), w)));
}

TEST(Blackboxes, NamesAndFactors) {
  auto spec = complete_two_by_two();
  EXPECT_EQ(blackbox_by_name("exact-bipartite", spec).alpha, 1);
  EXPECT_EQ(blackbox_by_name("greedy", spec).alpha, 2);
  EXPECT_THROW(blackbox_by_name("lp", spec), InputError);
}

TEST(BlackboxProperties, ExactIsOptimalGreedyWithinK) {
  Rng rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = rng.between(1, 10);
    ElementSet ground = numbered_universe(n).all();
    IntersectionSpec spec = random_bipartite(rng, ground);
    WeightVector w(n);
    for (Element e : ground) w[e] = Rational(static_cast<long>(rng.between(1, 6)));

    std::vector<std::pair<std::size_t, std::size_t>> edges = bipartite_edges(spec).ends;
    const ElementSet oracle = enumerate_matchings(edges, w);
    const ElementSet exact = exact_bipartite_matching(spec, w);
    const ElementSet greedy = greedy_common_independent(spec, w);
    ASSERT_TRUE(spec.is_independent(exact));
    ASSERT_TRUE(spec.is_independent(greedy));
    ASSERT_EQ(exact, oracle);  // value and lexicographic tie-break
    ASSERT_GE(total(w, greedy) * Rational(static_cast<long>(spec.k())), total(w, oracle));
    // Same answer from the generic exhaustive oracle.
    ASSERT_EQ(total(w, brute_force_max(spec, w)), total(w, oracle));
    // Determinism.
    ASSERT_EQ(exact_bipartite_matching(spec, w), exact);
    ASSERT_EQ(greedy_common_independent(spec, w), greedy);
  }
}

TEST(BlackboxProperties, GreedyOnThreeMatroidsIsCommonIndependent) {
  Rng rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = rng.between(1, 9);
    ElementSet ground = numbered_universe(n).all();
    IntersectionSpec spec({random_matroid(rng, MatroidFamily::kPartition, ground),
                           random_matroid(rng, MatroidFamily::kGraphic, ground),
                           random_matroid(rng, MatroidFamily::kUniform, ground)});
    WeightVector w(n);
    for (Element e : ground) w[e] = Rational(static_cast<long>(rng.between(1, 9)));
    const ElementSet greedy = greedy_common_independent(spec, w);
    ASSERT_TRUE(spec.is_independent(greedy));
    ASSERT_GE(total(w, greedy) * 3, total(w, brute_force_max(spec, w)));
  }
}

}  // namespace
}  // namespace bfm
