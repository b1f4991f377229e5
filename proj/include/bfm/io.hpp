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

// JSON wire formats: instance files, outcomes, and the FNV-1a instance hash.
//
// Instance file:
//   {"matroid": <matroid> | {"intersection": [<matroid>, ...]},
//    "elements": [{"id", "weight", "cost", "bid"?}, ...],
//    "budget": <rational>,
//    "xos": {"functions": [[v_1, ..., v_n], ...]}?}
//   <matroid> = {"kind": "uniform", "rank": r}
//             | {"kind": "partition", "blocks": [{"elements": [ids], "capacity": c}]}
//             | {"kind": "graphic", "edges": [[id, u, v], ...]}
//             | {"kind": "deadline", "deadlines": {id: d, ...}}
//             | {"kind": "free"}
//             | {"kind": "explicit", "independents": [[ids], ...]}
// Rationals are integers or strings ("p/q", "p", "2.5"); JSON floats are
// rejected because they are inexact. XOS function values follow the order
// of "elements" in the file. With "xos" present, "matroid" and "weight" are
// optional.

#ifndef BFM_IO_HPP_
#define BFM_IO_HPP_

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "bfm/element.hpp"
#include "bfm/intersection.hpp"
#include "bfm/matroid.hpp"
#include "bfm/mechanism.hpp"
#include "bfm/rational.hpp"
#include "bfm/xos.hpp"

namespace bfm {

using Json = nlohmann::ordered_json;

// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Feasibility = std::variant<MatroidSpec, IntersectionSpec>;

struct InstanceFile {
  Universe universe;
  std::optional<Feasibility> feasibility;
  WeightVector weights;
  PerElement<Rational> costs;
  PerElement<Rational> bids;
  Rational budget;
  std::optional<XosValuation> xos;

  MatroidInstance matroid_instance() const {
    if (!feasibility || !std::holds_alternative<MatroidSpec>(*feasibility))
      throw InputError("instance has no single matroid", "matroid");
    return {universe, std::get<MatroidSpec>(*feasibility), weights, costs, bids, budget};
  }
  IntersectionInstance intersection_instance() const {
    if (!feasibility || !std::holds_alternative<IntersectionSpec>(*feasibility))
      throw InputError("instance has no matroid intersection", "matroid.intersection");
    return {universe, std::get<IntersectionSpec>(*feasibility), weights, costs, bids, budget};
  }
  XosInstance xos_instance() const {
    if (!xos) throw InputError("instance has no XOS valuation", "xos");
    return {universe, *xos, costs, bids, budget};
  }
};

namespace detail {

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InputError("expected an object", where);
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError("missing required field", where.empty() ? key : where + "." + key);
  return *it;
}

inline std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

}  // namespace detail

inline Rational rational_from_json(const Json& v, const std::string& field) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? Rational(v.get<std::uint64_t>()) : Rational(v.get<std::int64_t>());
  }
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(e.what(), field);
    }
  }
  if (v.is_number_float())
    throw InputError("floating-point numbers are inexact; write \"p/q\" or a decimal string", field);
  throw InputError("expected a rational (integer or string)", field);
}

inline std::uint64_t count_from_json(const Json& v, const std::string& field) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw InputError("expected a non-negative integer", field);
  return v.get<std::uint64_t>();
}

inline std::string id_from_json(const Json& v, const std::string& field) {
  if (!v.is_string()) throw InputError("expected an element id string", field);
  return v.get<std::string>();
}

inline ElementSet id_set_from_json(const Json& v, const Universe& u, const std::string& field) {
  if (!v.is_array()) throw InputError("expected an array of element ids", field);
  std::vector<Element> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    out.push_back(u.element(id_from_json(v[i], f), f));
  }
  ElementSet set = make_set(out);
  if (set.size() != out.size()) throw InputError("duplicate element id", field);
  return set;
}

inline MatroidSpec matroid_from_json(const Json& j, const Universe& u, const std::string& where) {
  const Json& kind_json = detail::require(j, "kind", where);
  if (!kind_json.is_string()) throw InputError("expected a string", detail::join(where, "kind"));
  const std::string kind = kind_json.get<std::string>();
  const ElementSet ground = u.all();
  auto with_field = [&](const std::string& field, auto&& build) -> MatroidSpec {
    try {
      return build();
    } catch (const InputError& e) {
      if (!e.field().empty()) throw;
      throw InputError(e.what(), field);
    }
  };
  if (kind == "uniform") {
    const std::string f = detail::join(where, "rank");
    const std::uint64_t rank = count_from_json(detail::require(j, "rank", where), f);
    return with_field(f, [&] { return MatroidSpec::uniform(ground, rank); });
  }
  if (kind == "free") return MatroidSpec::free(ground);
  if (kind == "partition") {
    const std::string f = detail::join(where, "blocks");
    const Json& blocks = detail::require(j, "blocks", where);
    if (!blocks.is_array()) throw InputError("expected an array", f);
    std::vector<PartitionBlock> out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string bf = f + "[" + std::to_string(i) + "]";
      out.push_back({id_set_from_json(detail::require(blocks[i], "elements", bf), u, bf + ".elements"),
                     count_from_json(detail::require(blocks[i], "capacity", bf), bf + ".capacity")});
    }
    return with_field(f, [&] { return MatroidSpec::partition(ground, std::move(out)); });
  }
  if (kind == "graphic") {
    const std::string f = detail::join(where, "edges");
    const Json& edges = detail::require(j, "edges", where);
    if (!edges.is_array()) throw InputError("expected an array", f);
    // Vertex names may be integers or strings; strings get dense indices in
    // sorted order.
    std::map<std::string, std::uint32_t> names;
    for (const auto& e : edges)
      if (e.is_array() && e.size() == 3)
        for (int k = 1; k <= 2; ++k)
          if (e[k].is_string()) names.emplace(e[k].get<std::string>(), 0);
    std::uint32_t next = 0;
    for (auto& [name, index] : names) index = next++;
    std::vector<GraphicEdge> out;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string ef = f + "[" + std::to_string(i) + "]";
      const Json& e = edges[i];
      if (!e.is_array() || e.size() != 3) throw InputError("expected [id, u, v]", ef);
      auto vertex = [&](const Json& v) -> std::uint32_t {
        if (v.is_string()) return names.at(v.get<std::string>());
        const std::uint64_t x = count_from_json(v, ef);
        if (!names.empty()) throw InputError("mixes integer and string vertex names", ef);
        if (x > UINT32_MAX) throw InputError("vertex index too large", ef);
        return static_cast<std::uint32_t>(x);
      };
      out.push_back({u.element(id_from_json(e[0], ef + "[0]"), ef + "[0]"), vertex(e[1]), vertex(e[2])});
    }
    return with_field(f, [&] { return MatroidSpec::graphic(ground, std::move(out)); });
  }
  if (kind == "deadline") {
    const std::string f = detail::join(where, "deadlines");
    const Json& deadlines = detail::require(j, "deadlines", where);
    if (!deadlines.is_object()) throw InputError("expected an object mapping id to deadline", f);
    std::vector<DeadlineEntry> out;
    for (const auto& [id, d] : deadlines.items()) {
      const std::string df = f + "." + id;
      const std::uint64_t value = count_from_json(d, df);
      if (value < 1 || value > UINT32_MAX) throw InputError("deadline must be a positive integer", df);
      out.push_back({u.element(id, df), static_cast<std::uint32_t>(value)});
    }
    return with_field(f, [&] { return MatroidSpec::deadline(ground, std::move(out)); });
  }
  if (kind == "explicit") {
    const std::string f = detail::join(where, "independents");
    const Json& sets = detail::require(j, "independents", where);
    if (!sets.is_array()) throw InputError("expected an array of id arrays", f);
    std::vector<ElementSet> out;
    for (std::size_t i = 0; i < sets.size(); ++i)
      out.push_back(id_set_from_json(sets[i], u, f + "[" + std::to_string(i) + "]"));
    return with_field(f, [&] { return MatroidSpec::explicit_independents(ground, std::move(out)); });
  }
  throw InputError("unknown matroid kind \"" + kind + "\"", detail::join(where, "kind"));
}

inline InstanceFile instance_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("instance must be a JSON object", "");
  InstanceFile out;
  const Json& elements = detail::require(j, "elements", "");
  if (!elements.is_array()) throw InputError("expected an array", "elements");
  if (elements.empty()) throw InputError("the ground set is empty", "elements");

  const bool has_xos = j.contains("xos");
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string f = "elements[" + std::to_string(i) + "]";
    ids.push_back(id_from_json(detail::require(elements[i], "id", f), f + ".id"));
  }
  out.universe = Universe::from_ids(ids);
  const std::size_t n = ids.size();
  out.weights = WeightVector(n, Rational(1));
  out.costs = PerElement<Rational>(n);
  out.bids = PerElement<Rational>(n);
  std::vector<Element> file_order;
  for (std::size_t i = 0; i < n; ++i) {
    const Json& el = elements[i];
    const Element e = out.universe.element(ids[i]);
    file_order.push_back(e);
    const std::string f = "elements[" + ids[i] + "]";
    if (el.contains("weight") || !has_xos)
      out.weights[e] = rational_from_json(detail::require(el, "weight", f), f + ".weight");
    out.costs[e] = rational_from_json(detail::require(el, "cost", f), f + ".cost");
    out.bids[e] = el.contains("bid") ? rational_from_json(el["bid"], f + ".bid") : out.costs[e];
  }
  out.budget = rational_from_json(detail::require(j, "budget", ""), "budget");
  // The paper assumes d_e <= b; over-budget bids are rejected here, at load.
  for (std::size_t i = 0; i < n; ++i)
    if (out.bids[file_order[i]] > out.budget)
      throw InputError("bid exceeds the budget", "elements[" + ids[i] + "].bid");

  if (j.contains("matroid")) {
    const Json& m = j["matroid"];
    if (m.is_object() && m.contains("intersection")) {
      const Json& list = m["intersection"];
      if (!list.is_array()) throw InputError("expected an array of matroids", "matroid.intersection");
      std::vector<MatroidSpec> ms;
      for (std::size_t i = 0; i < list.size(); ++i)
        ms.push_back(matroid_from_json(list[i], out.universe, "matroid.intersection[" + std::to_string(i) + "]"));
      out.feasibility = IntersectionSpec(std::move(ms));
    } else {
      out.feasibility = matroid_from_json(m, out.universe, "matroid");
    }
  } else if (!has_xos) {
    throw InputError("missing required field", "matroid");
  }

  if (has_xos) {
    const Json& functions = detail::require(j["xos"], "functions", "xos");
    if (!functions.is_array() || functions.empty())
      throw InputError("expected a non-empty array of functions", "xos.functions");
    std::vector<PerElement<Rational>> clauses;
    for (std::size_t k = 0; k < functions.size(); ++k) {
      const std::string f = "xos.functions[" + std::to_string(k) + "]";
      if (!functions[k].is_array() || functions[k].size() != n)
        throw InputError("expected one value per element", f);
      PerElement<Rational> clause(n);
      for (std::size_t i = 0; i < n; ++i) {
        clause[file_order[i]] = rational_from_json(functions[k][i], f + "[" + std::to_string(i) + "]");
        if (clause[file_order[i]] < 0) throw InputError("values must be non-negative", f);
      }
      clauses.push_back(std::move(clause));
    }
    out.xos = XosValuation(std::move(clauses));
  }
  return out;
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what(), what);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buffer.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

inline InstanceFile load_instance(const std::string& path) {
  return instance_from_json(parse_json_text(read_file(path), path));
}

// ---- serialization ----

inline Json rational_to_json(const Rational& v) { return to_fraction_string(v); }

inline Json id_list(const Universe& u, std::span<const Element> s) {
  Json out = Json::array();
  for (Element e : s) out.push_back(u.id(e));
  return out;
}

inline Json matroid_to_json(const MatroidSpec& m, const Universe& u) {
  Json out;
  out["kind"] = std::string(m.kind_name());
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kind::Uniform>) {
          out["rank"] = k.rank;
        } else if constexpr (std::is_same_v<K, kind::Partition>) {
          Json blocks = Json::array();
          for (const auto& b : k.blocks)
            blocks.push_back(Json{{"elements", id_list(u, b.members)}, {"capacity", b.capacity}});
          out["blocks"] = blocks;
        } else if constexpr (std::is_same_v<K, kind::Graphic>) {
          Json edges = Json::array();
          for (const auto& e : k.edges) edges.push_back(Json::array({u.id(e.label), e.u, e.v}));
          out["edges"] = edges;
        } else if constexpr (std::is_same_v<K, kind::Deadline>) {
          Json d = Json::object();
          for (const auto& entry : k.deadlines) d[u.id(entry.element)] = entry.deadline;
          out["deadlines"] = d;
        } else if constexpr (std::is_same_v<K, kind::Explicit>) {
          Json sets = Json::array();
          for (const auto& s : k.independents) sets.push_back(id_list(u, s));
          out["independents"] = sets;
        }
      },
      m.kind());
  return out;
}

inline Json feasibility_to_json(const Feasibility& f, const Universe& u) {
  if (const auto* m = std::get_if<MatroidSpec>(&f)) return matroid_to_json(*m, u);
  Json list = Json::array();
  for (const auto& m : std::get<IntersectionSpec>(f).matroids()) list.push_back(matroid_to_json(m, u));
  return Json{{"intersection", list}};
}

inline Json instance_to_json(const InstanceFile& inst) {
  Json out;
  if (inst.feasibility) out["matroid"] = feasibility_to_json(*inst.feasibility, inst.universe);
  Json elements = Json::array();
  for (Element e : inst.universe.all()) {
    Json el;
    el["id"] = inst.universe.id(e);
    if (!inst.xos || inst.feasibility) el["weight"] = rational_to_json(inst.weights[e]);
    el["cost"] = rational_to_json(inst.costs[e]);
    el["bid"] = rational_to_json(inst.bids[e]);
    elements.push_back(el);
  }
  out["elements"] = elements;
  out["budget"] = rational_to_json(inst.budget);
  if (inst.xos) {
    Json functions = Json::array();
    for (const auto& clause : inst.xos->clauses()) {
      Json row = Json::array();
      for (Element e : inst.universe.all()) row.push_back(rational_to_json(clause[e]));
      functions.push_back(row);
    }
    out["xos"] = Json{{"functions", functions}};
  }
  return out;
}

template <class F>
InstanceFile to_instance_file(const Instance<F>& inst) {
  return {inst.universe, Feasibility(inst.feasibility), inst.weights, inst.true_costs, inst.bids,
          inst.budget, std::nullopt};
}

inline InstanceFile to_instance_file(const XosInstance& inst) {
  const std::size_t n = inst.universe.size();
  return {inst.universe, std::nullopt, WeightVector(n, Rational(1)), inst.true_costs, inst.bids,
          inst.budget, inst.valuation};
}

// 64-bit FNV-1a over the compact canonical JSON, as 16 hex digits.
inline std::string instance_hash(const Json& instance) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : instance.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::kSelected: return "selected";
    case Branch::kTau: return "tau";
    case Branch::kEmpty: return "empty";
  }
  return "?";
}

inline Json rate_to_json(const Rate& r) { return r.is_infinite() ? Json("inf") : rational_to_json(r.value()); }

inline Json decimal_json(const Rational& v) { return Json::parse(to_decimal_string(v)); }

// Payments list allocated elements only; exact as "p/q", display decimals
// at 12 significant digits alongside.
inline Json outcome_to_json(const Outcome& out, const Universe& u, const std::string& mechanism,
                            bool with_trace) {
  Json j;
  j["mechanism"] = mechanism;
  const ElementSet allocated = out.allocated();
  j["allocation"] = id_list(u, allocated);
  Json payments = Json::object(), decimals = Json::object();
  for (Element e : allocated) {
    payments[u.id(e)] = rational_to_json(out.payments[e]);
    decimals[u.id(e)] = decimal_json(out.payments[e]);
  }
  j["payments"] = payments;
  j["payments_decimal"] = decimals;
  j["total_payment"] = rational_to_json(out.total_payment());
  j["total_payment_decimal"] = decimal_json(out.total_payment());
  j["branch"] = to_string(out.branch);
  if (out.branch != Branch::kEmpty || !out.trace.empty()) {
    j["tau"] = u.id(out.tau);
    j["rate"] = rate_to_json(out.final_rate);
  }
  if (with_trace) {
    Json trace = Json::array();
    for (const auto& step : out.trace) {
      Json s;
      s["iteration"] = step.iteration;
      s["rate"] = rate_to_json(step.rate);
      s["selected"] = id_list(u, step.selected);
      s["selected_weight"] = rational_to_json(step.selected_weight);
      s["removed"] = step.removed ? Json(u.id(*step.removed)) : Json(nullptr);
      trace.push_back(s);
    }
    j["trace"] = trace;
  }
  return j;
}

inline Json xos_outcome_to_json(const XosOutcome& x, const Universe& u, const XosParams& params,
                                bool with_trace) {
  Json j = outcome_to_json(x.outcome, u, "xos", with_trace);
  Json d;
  d["seed"] = params.seed;
  d["alpha"] = rational_to_json(params.alpha);
  d["beta"] = rational_to_json(params.beta);
  d["gamma"] = rational_to_json(params.gamma);
  d["top_element_branch"] = x.top_element_branch;
  if (!x.top_element_branch) {
    d["first_half"] = id_list(u, x.first_half);
    d["second_half"] = id_list(u, x.second_half);
    d["first_half_opt"] = id_list(u, x.first_half_opt);
    d["threshold"] = rational_to_json(x.threshold);
    d["chosen"] = id_list(u, x.chosen);
    d["clause"] = x.clause;
  }
  j["xos"] = d;
  return j;
}

// The exact part of an outcome read back from its JSON.
struct ParsedOutcome {
  std::vector<std::string> allocation;
  std::map<std::string, Rational> payments;
  Rational total_payment;
};

inline ParsedOutcome outcome_from_json(const Json& j) {
  ParsedOutcome out;
  for (const auto& id : detail::require(j, "allocation", "")) out.allocation.push_back(id_from_json(id, "allocation"));
  for (const auto& [id, p] : detail::require(j, "payments", "").items())
    out.payments.emplace(id, rational_from_json(p, "payments." + id));
  out.total_payment = rational_from_json(detail::require(j, "total_payment", ""), "total_payment");
  return out;
}

}  // namespace bfm

#endif  // BFM_IO_HPP_
