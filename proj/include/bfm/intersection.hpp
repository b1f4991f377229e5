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

// Intersections of k matroids on one ground set and the deterministic
// approximation blackboxes used by the intersection mechanism.

#ifndef BFM_INTERSECTION_HPP_
#define BFM_INTERSECTION_HPP_

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bfm/element.hpp"
#include "bfm/matroid.hpp"
#include "bfm/rational.hpp"

namespace bfm {

class IntersectionSpec {
 public:
  explicit IntersectionSpec(std::vector<MatroidSpec> matroids) : matroids_(std::move(matroids)) {
    if (matroids_.size() < 2)
      throw InputError("an intersection needs at least two matroids", "matroid.intersection");
    for (const auto& m : matroids_)
      if (m.ground() != matroids_.front().ground())
        throw InputError("all matroids must share one ground set", "matroid.intersection");
  }

  const std::vector<MatroidSpec>& matroids() const { return matroids_; }
  const ElementSet& ground() const { return matroids_.front().ground(); }
  std::size_t k() const { return matroids_.size(); }

  bool is_independent(std::span<const Element> s) const {
    return std::all_of(matroids_.begin(), matroids_.end(),
                       [&](const MatroidSpec& m) { return m.is_independent(s); });
  }

  bool is_independent_unchecked(std::span<const Element> s) const {
    return std::all_of(matroids_.begin(), matroids_.end(),
                       [&](const MatroidSpec& m) { return m.is_independent_unchecked(s); });
  }

  friend bool operator==(const IntersectionSpec&, const IntersectionSpec&) = default;

 private:
  std::vector<MatroidSpec> matroids_;
};

inline IntersectionSpec delete_elements(const IntersectionSpec& spec, std::span<const Element> t) {
  std::vector<MatroidSpec> reduced;
  for (const auto& m : spec.matroids()) reduced.push_back(delete_elements(m, t));
  return IntersectionSpec(std::move(reduced));
}

// Deterministic weight-only procedure with a certified approximation
// factor. The signature carries no bids, so a blackbox cannot react to them.
struct ApxBlackbox {
  using Procedure = std::function<ElementSet(const IntersectionSpec&, const WeightVector&)>;

  std::string name;
  Rational alpha = 1;
  Procedure procedure;

  ElementSet operator()(const IntersectionSpec& spec, const WeightVector& w) const {
    return procedure(spec, w);
  }
};

// Scan by weight descending (id ascending) and keep an element whenever the
// set stays independent in every matroid. A 1/k approximation.
inline ElementSet greedy_common_independent(const IntersectionSpec& spec, const WeightVector& w) {
  ElementSet chosen;
  for (Element e : greedy_order(spec.ground(), w)) {
    ElementSet candidate = with(chosen, e);
    if (spec.is_independent_unchecked(candidate)) chosen = std::move(candidate);
  }
  return chosen;
}

// Bipartite graph read off two capacity-one partition matroids: each
// element is an edge between its block in the first matroid (left vertex)
// and its block in the second (right vertex).
struct BipartiteEdges {
  std::size_t left_count = 0;
  std::size_t right_count = 0;
  std::vector<Element> edges;                        // ascending
  std::vector<std::pair<std::size_t, std::size_t>> ends;  // parallel to edges
};

inline BipartiteEdges bipartite_edges(const IntersectionSpec& spec) {
  auto shape_error = [] {
    return InputError(
        "exact bipartite matching needs exactly two partition matroids with capacity 1 per block",
        "matroid.intersection");
  };
  if (spec.k() != 2) throw shape_error();
  std::vector<const kind::Partition*> sides;
  for (const auto& m : spec.matroids()) {
    const auto* p = std::get_if<kind::Partition>(&m.kind());
    if (p == nullptr) throw shape_error();
    for (const auto& block : p->blocks)
      if (block.capacity != 1) throw shape_error();
    sides.push_back(p);
  }
  auto block_of = [](const kind::Partition& p, Element e) {
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
      if (contains(p.blocks[b].members, e)) return b;
    return p.blocks.size();  // unreachable: blocks cover the ground set
  };
  BipartiteEdges graph;
  graph.left_count = sides[0]->blocks.size();
  graph.right_count = sides[1]->blocks.size();
  for (Element e : spec.ground()) {
    graph.edges.push_back(e);
    graph.ends.emplace_back(block_of(*sides[0], e), block_of(*sides[1], e));
  }
  return graph;
}

namespace detail {

// Maximum total weight of an assignment on a dense rows x cols profit
// matrix (rows <= cols), where a zero entry means "leave unmatched".
// Shortest augmenting path Hungarian method with potentials, O(rows^2 cols).
inline Rational max_assignment_value(const std::vector<std::vector<Rational>>& profit) {
  const std::size_t rows = profit.size();
  if (rows == 0) return 0;
  const std::size_t cols = profit.front().size();
  // Minimise cost = -profit. Index 0 is a virtual column/row.
  std::vector<Rational> u(rows + 1, 0), v(cols + 1, 0);
  std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<std::optional<Rational>> minv(cols + 1);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      std::optional<Rational> delta;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        Rational cur = -profit[i0 - 1][j - 1] - u[i0] - v[j];
        if (!minv[j] || cur < *minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (!delta || *minv[j] < *delta) {
          delta = *minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += *delta;
          v[j] -= *delta;
        } else {
          *minv[j] -= *delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Rational value = 0;
  for (std::size_t j = 1; j <= cols; ++j)
    if (match[j] != 0) value += profit[match[j] - 1][j - 1];
  return value;
}

// Best matching value over `allowed` edges avoiding the blocked vertices.
inline Rational best_matching_value(const BipartiteEdges& graph, const WeightVector& w,
                                    const std::vector<bool>& allowed,
                                    const std::vector<bool>& left_blocked,
                                    const std::vector<bool>& right_blocked) {
  std::map<std::pair<std::size_t, std::size_t>, Rational> best;
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    if (!allowed[i]) continue;
    auto [l, r] = graph.ends[i];
    if (left_blocked[l] || right_blocked[r]) continue;
    auto& slot = best[{l, r}];
    slot = std::max(slot, w[graph.edges[i]]);
  }
  if (best.empty()) return 0;
  std::size_t n = std::max(graph.left_count, graph.right_count);
  std::vector<std::vector<Rational>> profit(n, std::vector<Rational>(n, 0));
  for (const auto& [ends, weight] : best) profit[ends.first][ends.second] = weight;
  return max_assignment_value(profit);
}

}  // namespace detail

// Exact maximum-weight matching (not necessarily maximum cardinality).
// Among optimal matchings returns the lexicographically smallest sorted
// edge-id sequence: edges are fixed in id order, each kept iff an optimum
// extending the current prefix still exists.
inline ElementSet exact_bipartite_matching(const IntersectionSpec& spec, const WeightVector& w) {
  const BipartiteEdges graph = bipartite_edges(spec);
  const std::size_t m = graph.edges.size();
  std::vector<bool> allowed(m, true);
  std::vector<bool> left_blocked(graph.left_count, false);
  std::vector<bool> right_blocked(graph.right_count, false);
  const Rational optimum = detail::best_matching_value(graph, w, allowed, left_blocked, right_blocked);

  ElementSet chosen;
  Rational chosen_weight = 0;
  for (std::size_t i = 0; i < m; ++i) {
    allowed[i] = false;  // decided from here on
    auto [l, r] = graph.ends[i];
    if (left_blocked[l] || right_blocked[r]) continue;
    left_blocked[l] = right_blocked[r] = true;
    const Rational with_edge =
        chosen_weight + w[graph.edges[i]] +
        detail::best_matching_value(graph, w, allowed, left_blocked, right_blocked);
    if (with_edge == optimum) {
      chosen.push_back(graph.edges[i]);
      chosen_weight += w[graph.edges[i]];
    } else {
      left_blocked[l] = right_blocked[r] = false;
    }
  }
  return chosen;
}

inline ApxBlackbox exact_bipartite_blackbox() {
  return {"exact-bipartite", Rational(1),
          [](const IntersectionSpec& spec, const WeightVector& w) {
            return exact_bipartite_matching(spec, w);
          }};
}

inline ApxBlackbox greedy_blackbox(std::size_t k) {
  return {"greedy", Rational(static_cast<long>(k)),
          [](const IntersectionSpec& spec, const WeightVector& w) {
            return greedy_common_independent(spec, w);
          }};
}

// Resolves the CLI name of a blackbox; the greedy factor is the number of
// matroids in `spec`.
inline ApxBlackbox blackbox_by_name(const std::string& name, const IntersectionSpec& spec) {
  if (name == "exact-bipartite") return exact_bipartite_blackbox();
  if (name == "greedy") return greedy_blackbox(spec.k());
  throw InputError("unknown blackbox \"" + name + "\" (expected exact-bipartite or greedy)",
                   "--apx");
}

}  // namespace bfm

#endif  // BFM_INTERSECTION_HPP_
