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

// Matroids given by an independence oracle per family, plus deletion,
// restriction and the greedy maximum-weight independent set.

#ifndef BFM_MATROID_HPP_
#define BFM_MATROID_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bfm/element.hpp"
#include "bfm/rational.hpp"

namespace bfm {

struct PartitionBlock {
  ElementSet members;
  std::size_t capacity = 0;

  friend bool operator==(const PartitionBlock&, const PartitionBlock&) = default;
};

struct GraphicEdge {
  Element label;
  std::uint32_t u = 0;
  std::uint32_t v = 0;

  friend bool operator==(const GraphicEdge&, const GraphicEdge&) = default;
};

struct DeadlineEntry {
  Element element;
  std::uint32_t deadline = 1;

  friend bool operator==(const DeadlineEntry&, const DeadlineEntry&) = default;
};

namespace kind {

struct Uniform {
  std::size_t rank = 0;
  friend bool operator==(const Uniform&, const Uniform&) = default;
};

struct Partition {
  std::vector<PartitionBlock> blocks;
  friend bool operator==(const Partition&, const Partition&) = default;
};

// Edges sorted by label. Vertices are dense indices below vertex_count.
struct Graphic {
  std::vector<GraphicEdge> edges;
  std::uint32_t vertex_count = 0;
  friend bool operator==(const Graphic&, const Graphic&) = default;
};

// Unit-time jobs on one machine; sorted by element.
struct Deadline {
  std::vector<DeadlineEntry> deadlines;
  friend bool operator==(const Deadline&, const Deadline&) = default;
};

struct Free {
  friend bool operator==(const Free&, const Free&) = default;
};

// Every independent set listed; sorted and duplicate-free. Test fixture
// kind for small hand-built matroids.
struct Explicit {
  std::vector<ElementSet> independents;
  friend bool operator==(const Explicit&, const Explicit&) = default;
};

}  // namespace kind

using MatroidKind = std::variant<kind::Uniform, kind::Partition, kind::Graphic,
                                 kind::Deadline, kind::Free, kind::Explicit>;

class MatroidSpec {
 public:
  static MatroidSpec uniform(ElementSet ground, std::size_t rank) {
    return MatroidSpec(std::move(ground), kind::Uniform{rank});
  }

  static MatroidSpec partition(ElementSet ground, std::vector<PartitionBlock> blocks) {
    for (auto& block : blocks) block.members = make_set(std::move(block.members));
    return MatroidSpec(std::move(ground), kind::Partition{std::move(blocks)});
  }

  static MatroidSpec graphic(ElementSet ground, std::vector<GraphicEdge> edges) {
    std::sort(edges.begin(), edges.end(),
              [](const GraphicEdge& a, const GraphicEdge& b) { return a.label < b.label; });
    std::uint32_t vertices = 0;
    for (const auto& edge : edges) vertices = std::max({vertices, edge.u + 1, edge.v + 1});
    return MatroidSpec(std::move(ground), kind::Graphic{std::move(edges), vertices});
  }

  static MatroidSpec deadline(ElementSet ground, std::vector<DeadlineEntry> deadlines) {
    std::sort(deadlines.begin(), deadlines.end(),
              [](const DeadlineEntry& a, const DeadlineEntry& b) { return a.element < b.element; });
    return MatroidSpec(std::move(ground), kind::Deadline{std::move(deadlines)});
  }

  static MatroidSpec free(ElementSet ground) {
    return MatroidSpec(std::move(ground), kind::Free{});
  }

  static MatroidSpec explicit_independents(ElementSet ground,
                                           std::vector<ElementSet> independents) {
    for (auto& set : independents) set = make_set(std::move(set));
    std::sort(independents.begin(), independents.end());
    independents.erase(std::unique(independents.begin(), independents.end()),
                       independents.end());
    return MatroidSpec(std::move(ground), kind::Explicit{std::move(independents)});
  }

  const ElementSet& ground() const { return ground_; }
  const MatroidKind& kind() const { return kind_; }

  std::string_view kind_name() const {
    static constexpr std::string_view names[] = {"uniform", "partition", "graphic",
                                                 "deadline", "free", "explicit"};
    return names[kind_.index()];
  }

  // `s` must be a sorted, duplicate-free subset of ground().
  bool is_independent(std::span<const Element> s) const {
    if (!std::is_sorted(s.begin(), s.end()) ||
        std::adjacent_find(s.begin(), s.end()) != s.end())
      throw InputError("element set must be sorted and duplicate-free");
    if (!is_subset(s, ground_)) {
      for (Element e : s)
        if (!contains(ground_, e))
          throw InputError("element #" + std::to_string(e.index) + " is not in the ground set");
    }
    return is_independent_unchecked(s);
  }

  // Same as is_independent without validating `s`.
  bool is_independent_unchecked(std::span<const Element> s) const {
    return std::visit([&](const auto& k) { return independent(k, s); }, kind_);
  }

  friend bool operator==(const MatroidSpec&, const MatroidSpec&) = default;

 private:
  MatroidSpec(ElementSet ground, MatroidKind kind)
      : ground_(make_set(std::move(ground))), kind_(std::move(kind)) {
    std::visit([&](const auto& k) { validate(k); }, kind_);
  }

  friend MatroidSpec keep_only(const MatroidSpec& m, std::span<const Element> keep);

  void validate(const kind::Uniform&) const {}
  void validate(const kind::Free&) const {}

  void validate(const kind::Partition& k) const {
    ElementSet covered;
    std::size_t count = 0;
    for (const auto& block : k.blocks) {
      covered = set_union(covered, block.members);
      count += block.members.size();
    }
    if (count != covered.size())
      throw InputError("partition blocks must be disjoint", "matroid.blocks");
    if (covered != ground_)
      throw InputError("partition blocks must cover exactly the ground set", "matroid.blocks");
  }

  void validate(const kind::Graphic& k) const {
    ElementSet labels;
    for (const auto& edge : k.edges) labels.push_back(edge.label);
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
      throw InputError("edge label used more than once", "matroid.edges");
    if (labels != ground_)
      throw InputError("every ground element must label exactly one edge", "matroid.edges");
  }

  void validate(const kind::Deadline& k) const {
    ElementSet labelled;
    for (const auto& entry : k.deadlines) {
      if (entry.deadline < 1) throw InputError("deadlines must be >= 1", "matroid.deadlines");
      labelled.push_back(entry.element);
    }
    if (std::adjacent_find(labelled.begin(), labelled.end()) != labelled.end())
      throw InputError("element given two deadlines", "matroid.deadlines");
    if (labelled != ground_)
      throw InputError("every ground element needs exactly one deadline", "matroid.deadlines");
  }

  void validate(const kind::Explicit& k) const {
    auto listed = [&](const ElementSet& s) {
      return std::binary_search(k.independents.begin(), k.independents.end(), s);
    };
    if (!listed(ElementSet{}))
      throw InputError("the empty set must be independent", "matroid.independents");
    for (const auto& set : k.independents) {
      if (!is_subset(set, ground_))
        throw InputError("independent set outside the ground set", "matroid.independents");
      for (std::size_t drop = 0; drop < set.size(); ++drop) {
        ElementSet smaller = set;
        smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(drop));
        if (!listed(smaller))
          throw InputError("independent family is not hereditary", "matroid.independents");
      }
    }
    for (const auto& small : k.independents) {
      for (const auto& large : k.independents) {
        if (small.size() >= large.size()) continue;
        bool augmentable = false;
        for (Element e : set_difference(large, small)) {
          if (listed(with(small, e))) {
            augmentable = true;
            break;
          }
        }
        if (!augmentable)
          throw InputError("independent family violates the exchange property",
                           "matroid.independents");
      }
    }
  }

  bool independent(const kind::Uniform& k, std::span<const Element> s) const {
    return s.size() <= k.rank;
  }

  bool independent(const kind::Free&, std::span<const Element>) const { return true; }

  bool independent(const kind::Partition& k, std::span<const Element> s) const {
    for (const auto& block : k.blocks) {
      std::size_t used = 0;
      for (Element e : s) used += contains(block.members, e) ? 1 : 0;
      if (used > block.capacity) return false;
    }
    return true;
  }

  bool independent(const kind::Graphic& k, std::span<const Element> s) const {
    std::vector<std::uint32_t> parent(k.vertex_count);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (Element e : s) {
      auto it = std::lower_bound(k.edges.begin(), k.edges.end(), e,
                                 [](const GraphicEdge& edge, Element x) { return edge.label < x; });
      std::uint32_t a = find(it->u);
      std::uint32_t b = find(it->v);
      if (a == b) return false;
      parent[a] = b;
    }
    return true;
  }

  // For every t >= 1 at most t selected jobs may have deadline <= t, i.e.
  // the k-th smallest deadline (1-based) is at least k.
  bool independent(const kind::Deadline& k, std::span<const Element> s) const {
    std::vector<std::uint32_t> due;
    due.reserve(s.size());
    for (Element e : s) {
      auto it = std::lower_bound(k.deadlines.begin(), k.deadlines.end(), e,
                                 [](const DeadlineEntry& d, Element x) { return d.element < x; });
      due.push_back(it->deadline);
    }
    std::sort(due.begin(), due.end());
    for (std::size_t i = 0; i < due.size(); ++i)
      if (due[i] < i + 1) return false;
    return true;
  }

  bool independent(const kind::Explicit& k, std::span<const Element> s) const {
    ElementSet key(s.begin(), s.end());
    return std::binary_search(k.independents.begin(), k.independents.end(), key);
  }

  ElementSet ground_;
  MatroidKind kind_;
};

// Matroid on `keep` (a subset of ground) whose independents are those of
// `m` contained in `keep`. Family parameters are filtered accordingly.
inline MatroidSpec keep_only(const MatroidSpec& m, std::span<const Element> keep) {
  ElementSet ground(keep.begin(), keep.end());
  MatroidKind reduced = std::visit(
      [&](const auto& k) -> MatroidKind {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kind::Uniform> || std::is_same_v<K, kind::Free>) {
          return k;
        } else if constexpr (std::is_same_v<K, kind::Partition>) {
          kind::Partition out;
          for (const auto& block : k.blocks)
            out.blocks.push_back({set_intersection(block.members, ground), block.capacity});
          return out;
        } else if constexpr (std::is_same_v<K, kind::Graphic>) {
          kind::Graphic out{{}, k.vertex_count};
          for (const auto& edge : k.edges)
            if (contains(ground, edge.label)) out.edges.push_back(edge);
          return out;
        } else if constexpr (std::is_same_v<K, kind::Deadline>) {
          kind::Deadline out;
          for (const auto& entry : k.deadlines)
            if (contains(ground, entry.element)) out.deadlines.push_back(entry);
          return out;
        } else {
          kind::Explicit out;
          for (const auto& set : k.independents)
            if (is_subset(set, ground)) out.independents.push_back(set);
          return out;
        }
      },
      m.kind());
  MatroidSpec out = m;
  out.ground_ = std::move(ground);
  out.kind_ = std::move(reduced);
  return out;
}

namespace detail {
inline void require_subset(const MatroidSpec& m, std::span<const Element> t) {
  for (Element e : t)
    if (!contains(m.ground(), e))
      throw InputError("element #" + std::to_string(e.index) + " is not in the ground set");
}
}  // namespace detail

// M \ T: ground E - T, independents of M avoiding T.
inline MatroidSpec delete_elements(const MatroidSpec& m, std::span<const Element> t) {
  ElementSet removed = make_set(ElementSet(t.begin(), t.end()));
  detail::require_subset(m, removed);
  if (removed.empty()) return m;
  return keep_only(m, set_difference(m.ground(), removed));
}

// M | T: ground T, independents of M contained in T.
inline MatroidSpec restrict_to(const MatroidSpec& m, std::span<const Element> t) {
  ElementSet kept = make_set(ElementSet(t.begin(), t.end()));
  detail::require_subset(m, kept);
  return keep_only(m, kept);
}

// Scan order shared by every greedy in the library: weight descending,
// element id ascending. Depends on public weights only.
inline ElementSet greedy_order(std::span<const Element> ground, const WeightVector& w) {
  ElementSet order(ground.begin(), ground.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](Element a, Element b) { return w[b] < w[a]; });
  return order;
}

// Matroid greedy; optimal for every matroid. Returns a sorted set.
inline ElementSet max_weight_independent_set(const MatroidSpec& m, const WeightVector& w) {
  ElementSet chosen;
  for (Element e : greedy_order(m.ground(), w)) {
    ElementSet candidate = with(chosen, e);
    if (m.is_independent_unchecked(candidate)) chosen = std::move(candidate);
  }
  return chosen;
}

}  // namespace bfm

#endif  // BFM_MATROID_HPP_
