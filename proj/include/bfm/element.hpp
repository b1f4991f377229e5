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

#ifndef BFM_ELEMENT_HPP_
#define BFM_ELEMENT_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bfm/rational.hpp"

namespace bfm {

// Dense handle for a ground element. Handles are assigned in ascending
// element-id order (see Universe), so comparing handles compares ids.
struct Element {
  std::uint32_t index = 0;

  friend auto operator<=>(const Element&, const Element&) = default;
};

// Sorted, duplicate-free list of elements.
using ElementSet = std::vector<Element>;

inline ElementSet make_set(std::vector<Element> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

inline ElementSet make_set(std::initializer_list<std::uint32_t> indices) {
  std::vector<Element> members;
  for (auto i : indices) members.push_back(Element{i});
  return make_set(std::move(members));
}

inline bool contains(std::span<const Element> set, Element e) {
  return std::binary_search(set.begin(), set.end(), e);
}

inline bool is_subset(std::span<const Element> sub, std::span<const Element> super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

inline ElementSet set_union(std::span<const Element> a, std::span<const Element> b) {
  ElementSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline ElementSet set_difference(std::span<const Element> a, std::span<const Element> b) {
  ElementSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline ElementSet set_intersection(std::span<const Element> a, std::span<const Element> b) {
  ElementSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline ElementSet with(std::span<const Element> set, Element e) {
  ElementSet out(set.begin(), set.end());
  auto pos = std::lower_bound(out.begin(), out.end(), e);
  if (pos == out.end() || *pos != e) out.insert(pos, e);
  return out;
}

// Lexicographic order on sorted id sequences; the tie-break among
// value-equal optimal sets.
inline bool lexicographically_less(std::span<const Element> a, std::span<const Element> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Dense per-element table indexed by Element.
template <class T>
class PerElement {
 public:
  PerElement() = default;
  explicit PerElement(std::size_t size, const T& fill = T()) : values_(size, fill) {}
  explicit PerElement(std::vector<T> values) : values_(std::move(values)) {}

  typename std::vector<T>::reference operator[](Element e) { return values_.at(e.index); }
  typename std::vector<T>::const_reference operator[](Element e) const { return values_.at(e.index); }

  std::size_t size() const { return values_.size(); }
  const std::vector<T>& values() const { return values_; }

  friend bool operator==(const PerElement&, const PerElement&) = default;

 private:
  std::vector<T> values_;
};

using WeightVector = PerElement<Rational>;

inline Rational total(const PerElement<Rational>& values, std::span<const Element> set) {
  Rational sum = 0;
  for (Element e : set) sum += values[e];
  return sum;
}

// Bidirectional mapping between external string ids and Element handles.
class Universe {
 public:
  Universe() = default;

  // Handles follow ascending (lexicographic) id order.
  static Universe from_ids(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw InputError("duplicate element id \"" +
                           *std::adjacent_find(ids.begin(), ids.end()) + "\"",
                       "elements");
    Universe u;
    u.ids_ = std::move(ids);
    for (std::uint32_t i = 0; i < u.ids_.size(); ++i) u.lookup_.emplace(u.ids_[i], Element{i});
    return u;
  }

  std::size_t size() const { return ids_.size(); }
  const std::string& id(Element e) const { return ids_.at(e.index); }
  const std::vector<std::string>& ids() const { return ids_; }

  Element element(const std::string& id, const std::string& field = {}) const {
    auto it = lookup_.find(id);
    if (it == lookup_.end()) throw InputError("unknown element id \"" + id + "\"", field);
    return it->second;
  }

  ElementSet all() const {
    ElementSet out(ids_.size());
    for (std::uint32_t i = 0; i < ids_.size(); ++i) out[i] = Element{i};
    return out;
  }

 private:
  std::vector<std::string> ids_;
  std::map<std::string, Element> lookup_;
};

}  // namespace bfm

#endif  // BFM_ELEMENT_HPP_
