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

// Property-verification harness. A Subject is one deterministic mechanism
// (fixed instance, fixed coins) as a closure from bids to outcome; the
// checks below evaluate the paper's definitions against it with exact
// rationals. Every failure carries its serialized instance and deviation
// and can be re-evaluated by `recheck`.

#ifndef BFM_VERIFY_HPP_
#define BFM_VERIFY_HPP_

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bfm/generator.hpp"
#include "bfm/io.hpp"
#include "bfm/mechanism.hpp"
#include "bfm/oracle.hpp"
#include "bfm/xos.hpp"

namespace bfm {

enum class Property {
  kIndependence,
  kIR,
  kBudgetFeasible,
  kTruthful,
  kApproxRatio,
  kLemma1Bound,
  kBidIndependence
};

inline constexpr std::array<Property, 7> kAllProperties = {
    Property::kIndependence, Property::kIR,          Property::kBudgetFeasible,
    Property::kTruthful,     Property::kApproxRatio, Property::kLemma1Bound,
    Property::kBidIndependence};

inline const char* to_string(Property p) {
  switch (p) {
    case Property::kIndependence: return "Independence";
    case Property::kIR: return "IR";
    case Property::kBudgetFeasible: return "BudgetFeasible";
    case Property::kTruthful: return "Truthful";
    case Property::kApproxRatio: return "ApproxRatio";
    case Property::kLemma1Bound: return "Lemma1Bound";
    case Property::kBidIndependence: return "BidIndependence";
  }
  return "?";
}

inline Property property_from_string(const std::string& name) {
  for (Property p : kAllProperties)
    if (name == to_string(p)) return p;
  throw InputError("unknown property \"" + name + "\"", "property");
}

// Probe offset around breakpoints.
inline const Rational& probe_epsilon() {
  static const Rational eps(1, 1000000000);
  return eps;
}

struct FailureRecord {
  Property property = Property::kIndependence;
  std::string mechanism;
  std::size_t instance_index = 0;
  Json instance;
  std::optional<std::uint64_t> seed;  // XOS coin seed
  Json context = Json::object();      // bound, XOS parameters, seed count
  std::string element;                // deviating or offending element, if any
  std::optional<Rational> deviation;  // deviating bid, if any
  std::string observed;
  std::string required;
};

struct VerificationReport {
  std::string mechanism;
  Property property = Property::kIndependence;
  std::size_t instances_checked = 0;
  std::vector<FailureRecord> failures;

  bool passed() const { return failures.empty(); }
};

// ---- subjects ----

struct Subject {
  std::string mechanism;
  std::shared_ptr<const InstanceFile> file;
  std::optional<std::uint64_t> seed;
  Json context = Json::object();

  ElementSet ground;
  std::function<Outcome(const PerElement<Rational>& bids)> run;
  std::function<bool(const ElementSet&)> feasible;
  std::function<Rational(const ElementSet&)> value;
  // Candidate deviating bids for `e` near the price breakpoints of the
  // truthful run (before the ±epsilon expansion and clamping).
  std::function<std::vector<Rational>(Element e, const Outcome& truthful)> breakpoints;

  const PerElement<Rational>& true_costs() const { return file->costs; }
  const PerElement<Rational>& bids() const { return file->bids; }
  const Rational& budget() const { return file->budget; }
  const Universe& universe() const { return file->universe; }
};

namespace detail {

// bb(j) w_e for every j != e, every finite trace rate r w_e, and e's payment.
inline std::vector<Rational> weight_breakpoints(const WeightVector& w, const PerElement<Rational>& bids,
                                                std::span<const Element> ground, Element e,
                                                const Outcome& truthful) {
  std::vector<Rational> out;
  for (Element j : ground)
    if (j != e && w[j] > 0) out.push_back(bids[j] / w[j] * w[e]);
  for (const auto& step : truthful.trace)
    if (!step.rate.is_infinite()) out.push_back(step.rate.value() * w[e]);
  if (!truthful.final_rate.is_infinite()) out.push_back(truthful.final_rate.value() * w[e]);
  out.push_back(truthful.payments[e]);
  return out;
}

// Pay-your-bid greedy: weight order, add while independent and the bid
// total fits. Deliberately not truthful.
template <class Feasible>
Outcome pay_your_bid(std::span<const Element> ground, std::size_t n, const WeightVector& w,
                     const PerElement<Rational>& bids, const Rational& budget,
                     const Feasible& feasible) {
  Outcome out = empty_outcome(n);
  ElementSet chosen;
  Rational spent = 0;
  for (Element e : greedy_order(ground, w)) {
    ElementSet candidate = with(chosen, e);
    if (spent + bids[e] > budget || !feasible(candidate)) continue;
    chosen = std::move(candidate);
    spent += bids[e];
  }
  for (Element e : chosen) {
    out.allocation[e] = true;
    out.payments[e] = bids[e];
  }
  out.branch = chosen.empty() ? Branch::kEmpty : Branch::kSelected;
  return out;
}

}  // namespace detail

inline Subject matroid_subject(std::shared_ptr<const InstanceFile> file) {
  MatroidInstance inst = file->matroid_instance();
  validate(inst);
  auto m = std::make_shared<const MatroidSpec>(inst.feasibility);
  Subject s;
  s.mechanism = "matroid";
  s.ground = m->ground();
  s.context["bound"] = "4";
  const std::size_t n = file->universe.size();
  s.run = [m, file, n](const PerElement<Rational>& bids) {
    return run_matroid_mechanism(*m, n, file->weights, bids, file->budget);
  };
  s.feasible = [m](const ElementSet& set) { return m->is_independent(set); };
  s.value = [file](const ElementSet& set) { return total(file->weights, set); };
  s.breakpoints = [file, m](Element e, const Outcome& truthful) {
    return detail::weight_breakpoints(file->weights, file->bids, m->ground(), e, truthful);
  };
  s.file = std::move(file);
  return s;
}

// `apx_name` is "exact-bipartite" or "greedy"; the ratio bound is 3 alpha + 1.
inline Subject intersection_subject(std::shared_ptr<const InstanceFile> file, const std::string& apx_name) {
  IntersectionInstance inst = file->intersection_instance();
  validate(inst);
  auto spec = std::make_shared<const IntersectionSpec>(inst.feasibility);
  auto apx = std::make_shared<const ApxBlackbox>(blackbox_by_name(apx_name, *spec));
  Subject s;
  s.mechanism = "intersection:" + apx_name;
  s.ground = spec->ground();
  s.context["bound"] = to_fraction_string(3 * apx->alpha + 1);
  const std::size_t n = file->universe.size();
  s.run = [spec, apx, file, n](const PerElement<Rational>& bids) {
    auto select = [&](const ElementSet& deleted) {
      return (*apx)(delete_elements(*spec, deleted), file->weights);
    };
    return run_descending_price(spec->ground(), n, file->weights, bids, file->budget, select);
  };
  s.feasible = [spec](const ElementSet& set) { return spec->is_independent(set); };
  s.value = [file](const ElementSet& set) { return total(file->weights, set); };
  s.breakpoints = [file, spec](Element e, const Outcome& truthful) {
    return detail::weight_breakpoints(file->weights, file->bids, spec->ground(), e, truthful);
  };
  s.file = std::move(file);
  return s;
}

// Harness sensitivity control: pay-your-bid greedy over the instance's matroid.
inline Subject broken_subject(std::shared_ptr<const InstanceFile> file) {
  Subject s = matroid_subject(file);
  s.mechanism = "broken";
  s.context = Json::object();
  auto m = std::make_shared<const MatroidSpec>(std::get<MatroidSpec>(*file->feasibility));
  const std::size_t n = file->universe.size();
  s.run = [m, file, n](const PerElement<Rational>& bids) {
    return detail::pay_your_bid(m->ground(), n, file->weights, bids, file->budget,
                                [&](const ElementSet& set) { return m->is_independent_unchecked(set); });
  };
  s.breakpoints = [file](Element e, const Outcome&) {
    return std::vector<Rational>{file->costs[e] * 2, file->budget};
  };
  return s;
}

inline Json xos_params_to_json(const XosParams& p) {
  return Json{{"alpha", to_fraction_string(p.alpha)},
              {"beta", to_fraction_string(p.beta)},
              {"gamma", to_fraction_string(p.gamma)}};
}

inline XosParams xos_params_from_json(const Json& j, std::uint64_t seed) {
  XosParams p;
  if (j.contains("alpha")) p.alpha = rational_from_json(j["alpha"], "alpha");
  if (j.contains("beta")) p.beta = rational_from_json(j["beta"], "beta");
  if (j.contains("gamma")) p.gamma = rational_from_json(j["gamma"], "gamma");
  p.seed = seed;
  p.validate();
  return p;
}

// One fixed-seed realization of the XOS mechanism.
inline Subject xos_subject(std::shared_ptr<const InstanceFile> file,
                           std::shared_ptr<const XosMechanism> mech, const XosParams& params) {
  Subject s;
  s.mechanism = "xos";
  s.seed = params.seed;
  s.context["params"] = xos_params_to_json(params);
  s.ground = file->universe.all();
  s.run = [mech, file, params](const PerElement<Rational>& bids) {
    return mech->run(bids, file->budget, params).outcome;
  };
  s.feasible = [](const ElementSet&) { return true; };
  s.value = [mech](const ElementSet& set) { return mech->valuation().value(set); };
  s.breakpoints = [file, mech, params](Element e, const Outcome& truthful) {
    // Sub-mechanism breakpoints under the clause that the truthful run used.
    const XosOutcome x = mech->run(file->bids, file->budget, params);
    std::vector<Rational> out{truthful.payments[e]};
    if (!x.top_element_branch && !x.chosen.empty()) {
      const auto& f = mech->valuation().clause(x.clause);
      if (f[e] > 0) {
        auto more = detail::weight_breakpoints(f, file->bids, x.chosen, e, truthful);
        out.insert(out.end(), more.begin(), more.end());
      }
    }
    return out;
  };
  s.file = std::move(file);
  return s;
}

// Rebuilds the subject named by a failure record.
inline Subject subject_for(const std::string& mechanism, std::shared_ptr<const InstanceFile> file,
                           std::optional<std::uint64_t> seed, const Json& context) {
  if (mechanism == "matroid") return matroid_subject(std::move(file));
  if (mechanism == "broken") return broken_subject(std::move(file));
  if (mechanism.rfind("intersection:", 0) == 0)
    return intersection_subject(std::move(file), mechanism.substr(13));
  if (mechanism == "xos") {
    XosInstance inst = file->xos_instance();
    validate(inst);
    auto mech = std::make_shared<const XosMechanism>(inst.valuation);
    const Json params = context.contains("params") ? context["params"] : Json::object();
    return xos_subject(std::move(file), std::move(mech), xos_params_from_json(params, seed.value_or(0)));
  }
  throw InputError("unknown mechanism \"" + mechanism + "\"", "mechanism");
}

// ---- checks ----

struct CheckOptions {
  std::size_t deviations = 50;   // minimum deviations per element, probes included
  std::size_t min_random = 10;   // random deviations even when probes suffice
  bool truthfulness = true;
  bool ratio = true;
  std::size_t max_failures_per_property = 5;
};

struct SubjectResult {
  std::vector<FailureRecord> failures;
  Outcome truthful;
  std::size_t deviations_run = 0;
};

namespace detail {

inline FailureRecord make_failure(const Subject& s, Property p, std::size_t index) {
  FailureRecord r;
  r.property = p;
  r.mechanism = s.mechanism;
  r.instance_index = index;
  r.seed = s.seed;
  r.context = s.context;
  return r;
}

class FailureSink {
 public:
  FailureSink(const Subject& s, std::size_t index, std::size_t cap,
              std::vector<FailureRecord>& out)
      : subject_(s), index_(index), cap_(cap), out_(out) {}

  bool wants(Property p) const { return counts_[static_cast<std::size_t>(p)] < cap_; }

  void add(Property p, std::string element, std::optional<Rational> deviation, std::string observed,
           std::string required) {
    if (!wants(p)) return;
    ++counts_[static_cast<std::size_t>(p)];
    FailureRecord r = make_failure(subject_, p, index_);
    if (!cached_) cached_ = instance_to_json(*subject_.file);
    r.instance = *cached_;
    r.element = std::move(element);
    r.deviation = std::move(deviation);
    r.observed = std::move(observed);
    r.required = std::move(required);
    out_.push_back(std::move(r));
  }

 private:
  const Subject& subject_;
  std::size_t index_;
  std::size_t cap_;
  std::vector<FailureRecord>& out_;
  std::array<std::size_t, kAllProperties.size()> counts_{};
  std::optional<Json> cached_;
};

}  // namespace detail

// Independence, IR (allocated: p >= bid; others: p = 0) and budget
// feasibility of one outcome computed from `bids`.
inline void check_soundness(const Subject& s, const Outcome& out, const PerElement<Rational>& bids,
                            const std::string& deviator, const std::optional<Rational>& deviation,
                            detail::FailureSink& sink) {
  const ElementSet allocated = out.allocated();
  if (!s.feasible(allocated)) {
    std::string ids;
    for (Element e : allocated) ids += (ids.empty() ? "" : ",") + s.universe().id(e);
    sink.add(Property::kIndependence, deviator, deviation, "{" + ids + "}", "independent set");
  }
  for (Element e : s.ground) {
    const Rational& p = out.payments[e];
    if (out.allocation[e] ? p < bids[e] : p != 0) {
      sink.add(Property::kIR, deviator.empty() ? s.universe().id(e) : deviator, deviation,
               "payment " + to_fraction_string(p) + " to " + s.universe().id(e),
               out.allocation[e] ? ">= bid " + to_fraction_string(bids[e]) : "0 (not allocated)");
    }
  }
  const Rational spent = out.total_payment();
  if (spent > s.budget())
    sink.add(Property::kBudgetFeasible, deviator, deviation, to_fraction_string(spent),
             "<= " + to_fraction_string(s.budget()));
}

// Candidate deviating bids for `e`: breakpoints +- epsilon, the truthful
// cost +- epsilon and the budget, clamped to (0, b] and deduplicated, then
// topped up with uniform random bids in (0, b]; the true cost itself is
// excluded, so at least `deviations` bids come back.
inline std::vector<Rational> deviation_bids(const Subject& s, Element e, const Outcome& truthful,
                                            const CheckOptions& options, Rng& rng) {
  const Rational& b = s.budget();
  const Rational& eps = probe_epsilon();
  std::vector<Rational> centres = s.breakpoints(e, truthful);
  centres.push_back(s.true_costs()[e]);
  centres.push_back(b);
  std::vector<Rational> out;
  for (const Rational& c : centres) {
    for (const Rational& d : std::array<Rational, 3>{c - eps, c, c + eps}) {
      if (d <= 0) continue;
      out.push_back(d > b ? b : d);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](const Rational& d) { return d == s.true_costs()[e]; });
  const std::size_t wanted = std::max(options.min_random, options.deviations > out.size()
                                                              ? options.deviations - out.size()
                                                              : std::size_t{0});
  constexpr std::uint64_t kGrid = std::uint64_t{1} << 30;
  for (std::size_t k = 0; k < wanted;) {
    Rational d = b * Rational(static_cast<long long>(rng.between(1, kGrid)), static_cast<long long>(kGrid));
    if (d == s.true_costs()[e]) continue;
    out.push_back(std::move(d));
    ++k;
  }
  return out;
}

// Unilateral deviation of `e` to bid `d` against the truthful outcome:
// utility must not strictly improve (Truthful); while e stays allocated its
// payment must not move (BidIndependence); the deviated outcome must stay
// sound.
inline void check_deviation(const Subject& s, Element e, const Outcome& truthful,
                            const PerElement<Rational>& truthful_bids, const Rational& d,
                            detail::FailureSink& sink) {
  PerElement<Rational> bids = truthful_bids;
  bids[e] = d;
  const Outcome out = s.run(bids);
  const std::string id = s.universe().id(e);
  check_soundness(s, out, bids, id, d, sink);
  const Rational honest = utility(s.true_costs(), truthful, e);
  const Rational deviated = utility(s.true_costs(), out, e);
  if (deviated > honest)
    sink.add(Property::kTruthful, id, d, "utility " + to_fraction_string(deviated),
             "<= truthful utility " + to_fraction_string(honest));
  if (truthful.allocation[e] && out.allocation[e] && out.payments[e] != truthful.payments[e])
    sink.add(Property::kBidIndependence, id, d, "payment " + to_fraction_string(out.payments[e]),
             "= truthful payment " + to_fraction_string(truthful.payments[e]));
}

// Soundness and (optionally) truthfulness of one subject. Others' bids stay
// at their declared values; the deviating element's truthful bid is its
// true cost.
inline SubjectResult check_subject(const Subject& s, std::size_t index, const CheckOptions& options,
                                   Rng& rng) {
  SubjectResult result;
  detail::FailureSink sink(s, index, options.max_failures_per_property, result.failures);
  result.truthful = s.run(s.bids());
  check_soundness(s, result.truthful, s.bids(), "", std::nullopt, sink);
  if (!options.truthfulness) return result;
  for (Element e : s.ground) {
    PerElement<Rational> honest_bids = s.bids();
    honest_bids[e] = s.true_costs()[e];
    const Outcome honest = honest_bids == s.bids() ? result.truthful : s.run(honest_bids);
    for (const Rational& d : deviation_bids(s, e, honest, options, rng)) {
      check_deviation(s, e, honest, honest_bids, d, sink);
      ++result.deviations_run;
    }
  }
  return result;
}

// w(alloc) * bound >= w(OPT) with OPT the budgeted brute-force optimum
// under true costs.
template <class Feasibility>
std::optional<FailureRecord> check_ratio(const Subject& s, std::size_t index, const Outcome& out,
                                         const Feasibility& f, const Rational& bound) {
  const ElementSet opt = brute_force_opt(f, s.file->weights, s.true_costs(), s.budget());
  const Rational opt_value = s.value(opt);
  const Rational got = s.value(out.allocated());
  if (got * bound >= opt_value) return std::nullopt;
  FailureRecord r = detail::make_failure(s, Property::kApproxRatio, index);
  r.instance = instance_to_json(*s.file);
  r.observed = "w(alloc) = " + to_fraction_string(got);
  r.required = ">= w(OPT)/" + to_fraction_string(bound) + " = " + to_fraction_string(opt_value / bound);
  return r;
}

// Lemma 1: w(OPT(M - tau, b)) <= 2 w(MAX(M - (T + tau))) + w_tau.
struct Lemma1Values {
  Rational lhs;
  Rational rhs;
  bool holds() const { return lhs <= rhs; }
};

inline Lemma1Values lemma1_values(const MatroidInstance& inst, const Outcome& out) {
  const MatroidSpec without_tau = delete_elements(inst.feasibility, ElementSet{out.tau});
  const ElementSet opt = brute_force_opt(without_tau, inst.weights, inst.bids, inst.budget);
  return {total(inst.weights, opt), 2 * out.final_weight + inst.weights[out.tau]};
}

inline std::optional<FailureRecord> check_lemma1(const Subject& s, std::size_t index, const Outcome& out) {
  const Lemma1Values v = lemma1_values(s.file->matroid_instance(), out);
  if (v.holds()) return std::nullopt;
  FailureRecord r = detail::make_failure(s, Property::kLemma1Bound, index);
  r.instance = instance_to_json(*s.file);
  r.observed = "w(OPT(M-tau,b)) = " + to_fraction_string(v.lhs);
  r.required = "<= 2 w(MAX) + w_tau = " + to_fraction_string(v.rhs);
  return r;
}

// ---- XOS ----

// Budgeted optimum of v at the declared bids, exhaustively.
inline Rational xos_opt_value(const XosMechanism& mech, const PerElement<Rational>& costs,
                              const Rational& budget) {
  const std::size_t n = mech.valuation().size();
  Rational best = 0;
  std::vector<Rational> cost(std::size_t{1} << n, Rational(0));
  for (std::size_t mask = 1; mask < cost.size(); ++mask) {
    cost[mask] = cost[mask & (mask - 1)] + costs[Element{static_cast<std::uint32_t>(std::countr_zero(mask))}];
    if (cost[mask] <= budget && mech.value(static_cast<std::uint32_t>(mask)) > best)
      best = mech.value(static_cast<std::uint32_t>(mask));
  }
  return best;
}

// ---- parallel driver ----

// Runs fn(i) for i in [0, count) on `threads` workers (0: hardware
// concurrency); results come back in index order.
template <class R, class Fn>
std::vector<R> parallel_map(std::size_t count, std::size_t threads, Fn fn) {
  std::vector<R> results(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

// ---- suites ----

struct SuiteConfig {
  std::size_t instances = 0;
  std::size_t deviations = 50;
  std::size_t min_random = 10;
  bool truthfulness = true;
};

struct XosSuiteConfig {
  std::size_t instances = 0;
  std::size_t seeds = 200;
  std::size_t n_max = 10;
  std::size_t m_max = 4;
  std::size_t deviations = 0;  // probes plus `min_random`
  std::size_t min_random = 4;
  bool truthfulness = true;
  XosParams params;
  Rational per_run_bound = 436;
};

struct VerifyConfig {
  GeneratorConfig generator;
  std::optional<SuiteConfig> matroid;
  std::optional<SuiteConfig> intersection;
  std::vector<std::string> apx = {"exact-bipartite", "greedy"};
  std::optional<XosSuiteConfig> xos;
  std::optional<SuiteConfig> broken;
  std::size_t threads = 0;
};

// Reports per (mechanism, property) plus suite statistics.
struct SuiteReport {
  std::vector<VerificationReport> reports;
  Json stats = Json::object();

  std::size_t failure_count() const {
    std::size_t n = 0;
    for (const auto& r : reports) n += r.failures.size();
    return n;
  }
  bool passed() const { return failure_count() == 0; }

  VerificationReport& entry(const std::string& mechanism, Property p) {
    for (auto& r : reports)
      if (r.mechanism == mechanism && r.property == p) return r;
    reports.push_back({mechanism, p, 0, {}});
    return reports.back();
  }
  const VerificationReport* find(const std::string& mechanism, Property p) const {
    for (const auto& r : reports)
      if (r.mechanism == mechanism && r.property == p) return &r;
    return nullptr;
  }
};

namespace detail {

struct InstanceOutcome {
  std::vector<std::pair<std::string, Property>> checked;
  std::vector<FailureRecord> failures;
  Json stats = Json::object();
};

inline void merge(SuiteReport& report, std::vector<InstanceOutcome>& parts) {
  for (auto& part : parts) {
    for (const auto& [mechanism, p] : part.checked) ++report.entry(mechanism, p).instances_checked;
    for (auto& f : part.failures) report.entry(f.mechanism, f.property).failures.push_back(std::move(f));
  }
}

inline const std::array<Property, 4> kSoundAndTruthful = {Property::kIndependence, Property::kIR,
                                                          Property::kBudgetFeasible,
                                                          Property::kTruthful};

inline void mark_checked(InstanceOutcome& o, const std::string& mechanism, bool truthful) {
  for (Property p : kSoundAndTruthful)
    if (truthful || p != Property::kTruthful) o.checked.emplace_back(mechanism, p);
  if (truthful) o.checked.emplace_back(mechanism, Property::kBidIndependence);
}

inline CheckOptions options_from(const SuiteConfig& c) {
  CheckOptions o;
  o.deviations = c.deviations;
  o.min_random = c.min_random;
  o.truthfulness = c.truthfulness;
  return o;
}

}  // namespace detail

// Mechanism 1 on the generated matroid pool: soundness, truthfulness,
// ratio 4 and Lemma 1.
inline void run_matroid_suite(const VerifyConfig& config, SuiteReport& report) {
  const SuiteConfig& sc = *config.matroid;
  InstanceGenerator gen(config.generator);
  auto parts = parallel_map<detail::InstanceOutcome>(sc.instances, config.threads, [&](std::size_t i) {
    detail::InstanceOutcome o;
    const GeneratedMatroidInstance g = gen.matroid_instance(i);
    auto file = std::make_shared<const InstanceFile>(to_instance_file(g.instance));
    Subject s = matroid_subject(file);
    Rng rng(mix_seed(config.generator.seed ^ 0x7777ull, i));
    SubjectResult r = check_subject(s, i, detail::options_from(sc), rng);
    detail::mark_checked(o, s.mechanism, sc.truthfulness);
    o.failures = std::move(r.failures);
    o.checked.emplace_back(s.mechanism, Property::kApproxRatio);
    if (auto f = check_ratio(s, i, r.truthful, g.instance.feasibility, Rational(4))) o.failures.push_back(*f);
    o.checked.emplace_back(s.mechanism, Property::kLemma1Bound);
    if (auto f = check_lemma1(s, i, r.truthful)) o.failures.push_back(*f);
    o.stats["removal"] = !r.truthful.removed.empty();
    o.stats["deviations"] = r.deviations_run;
    const Rational opt = total(g.instance.weights, brute_force_opt(g.instance.feasibility, g.instance.weights,
                                                                   g.instance.true_costs, g.instance.budget));
    const Rational got = total(g.instance.weights, r.truthful.allocated());
    o.stats["ratio"] = to_double(opt / got);
    return o;
  });
  std::size_t with_removal = 0, deviations = 0;
  double worst = 1;
  for (const auto& p : parts) {
    with_removal += p.stats["removal"].get<bool>() ? 1 : 0;
    deviations += p.stats["deviations"].get<std::size_t>();
    worst = std::max(worst, p.stats["ratio"].get<double>());
  }
  report.stats["matroid"] = Json{{"instances", sc.instances},
                                 {"lemma1_instances_with_removal", with_removal},
                                 {"deviations_run", deviations},
                                 {"max_ratio", worst}};
  detail::merge(report, parts);
}

// Mechanism 2 on the bipartite pool, once per configured blackbox.
inline void run_intersection_suite(const VerifyConfig& config, SuiteReport& report) {
  const SuiteConfig& sc = *config.intersection;
  InstanceGenerator gen(config.generator);
  for (const std::string& apx : config.apx) {
    auto parts = parallel_map<detail::InstanceOutcome>(sc.instances, config.threads, [&](std::size_t i) {
      detail::InstanceOutcome o;
      IntersectionInstance inst = gen.bipartite_instance(i);
      auto file = std::make_shared<const InstanceFile>(to_instance_file(inst));
      Subject s = intersection_subject(file, apx);
      Rng rng(mix_seed(config.generator.seed ^ 0x8888ull, i));
      SubjectResult r = check_subject(s, i, detail::options_from(sc), rng);
      detail::mark_checked(o, s.mechanism, sc.truthfulness);
      o.failures = std::move(r.failures);
      o.checked.emplace_back(s.mechanism, Property::kApproxRatio);
      const Rational bound = parse_rational(s.context["bound"].get<std::string>());
      if (auto f = check_ratio(s, i, r.truthful, inst.feasibility, bound)) o.failures.push_back(*f);
      const Rational opt = total(inst.weights, brute_force_opt(inst.feasibility, inst.weights,
                                                               inst.true_costs, inst.budget));
      o.stats["ratio"] = to_double(opt / total(inst.weights, r.truthful.allocated()));
      return o;
    });
    double worst = 1;
    for (const auto& p : parts) worst = std::max(worst, p.stats["ratio"].get<double>());
    report.stats["intersection:" + apx] = Json{{"instances", sc.instances}, {"max_ratio", worst}};
    detail::merge(report, parts);
  }
}

// The pay-your-bid control; its Truthful report is expected to fail.
inline void run_broken_suite(const VerifyConfig& config, SuiteReport& report) {
  const SuiteConfig& sc = *config.broken;
  InstanceGenerator gen(config.generator);
  auto parts = parallel_map<detail::InstanceOutcome>(sc.instances, config.threads, [&](std::size_t i) {
    detail::InstanceOutcome o;
    auto file = std::make_shared<const InstanceFile>(to_instance_file(gen.matroid_instance(i).instance));
    Subject s = broken_subject(file);
    Rng rng(mix_seed(config.generator.seed ^ 0x9999ull, i));
    SubjectResult r = check_subject(s, i, detail::options_from(sc), rng);
    detail::mark_checked(o, s.mechanism, sc.truthfulness);
    o.failures = std::move(r.failures);
    return o;
  });
  detail::merge(report, parts);
}

// Coin seed of run `s` on XOS instance `i`.
inline std::uint64_t xos_coin_seed(std::uint64_t suite_seed, std::size_t instance, std::size_t s) {
  return mix_seed(suite_seed ^ 0xC0C0ull, instance) + s;
}

// XOS mechanism: every fixed-seed run is checked for soundness and
// truthfulness; ApproxRatio asserts the theorem's expected-value form
// (mean value over seeds * ratio >= OPT). Per-run ratios are reported in
// the stats.
inline void run_xos_suite(const VerifyConfig& config, SuiteReport& report) {
  const XosSuiteConfig& xc = *config.xos;
  GeneratorConfig gc = config.generator;
  gc.n_max = std::min(gc.n_max, xc.n_max);
  gc.n_min = std::min(gc.n_min, gc.n_max);
  gc.clauses_max = xc.m_max;
  InstanceGenerator gen(gc);
  const Rational ratio_bound = xc.per_run_bound;
  auto parts = parallel_map<detail::InstanceOutcome>(xc.instances, config.threads, [&](std::size_t i) {
    detail::InstanceOutcome o;
    XosInstance inst = gen.xos_instance(i);
    auto file = std::make_shared<const InstanceFile>(to_instance_file(inst));
    auto mech = std::make_shared<const XosMechanism>(inst.valuation);
    const Rational opt = xos_opt_value(*mech, inst.true_costs, inst.budget);
    Rng rng(mix_seed(gc.seed ^ 0xAAAAull, i));
    CheckOptions options;
    options.deviations = xc.deviations;
    options.min_random = xc.min_random;
    options.truthfulness = xc.truthfulness;
    Rational sum = 0;
    std::size_t below = 0;
    std::vector<FailureRecord> failures;
    for (std::size_t k = 0; k < xc.seeds; ++k) {
      XosParams params = xc.params;
      params.seed = xos_coin_seed(gc.seed, i, k);
      Subject s = xos_subject(file, mech, params);
      SubjectResult r = check_subject(s, i, options, rng);
      for (auto& f : r.failures)
        if (failures.size() < 20) failures.push_back(std::move(f));
      const Rational got = mech->valuation().value(r.truthful.allocated());
      sum += got;
      if (got * ratio_bound < opt) ++below;
    }
    detail::mark_checked(o, "xos", xc.truthfulness);
    o.failures = std::move(failures);
    o.checked.emplace_back("xos", Property::kApproxRatio);
    const Rational mean = xc.seeds == 0 ? Rational(0) : sum / xc.seeds;
    if (xc.seeds > 0 && mean * ratio_bound < opt) {
      FailureRecord r;
      r.property = Property::kApproxRatio;
      r.mechanism = "xos";
      r.instance_index = i;
      r.instance = instance_to_json(*file);
      r.context = Json{{"params", xos_params_to_json(xc.params)},
                       {"seeds", xc.seeds},
                       {"suite_seed", gc.seed},
                       {"bound", to_fraction_string(ratio_bound)}};
      r.observed = "mean value " + to_fraction_string(mean);
      r.required = ">= OPT/" + to_fraction_string(ratio_bound) + " = " + to_fraction_string(opt / ratio_bound);
      o.failures.push_back(std::move(r));
    }
    o.stats["runs_below_bound"] = below;
    o.stats["expected_ratio"] = opt == 0 ? 1.0 : to_double(mean / opt);
    return o;
  });
  std::size_t below = 0;
  double worst_expected = 1;
  for (const auto& p : parts) {
    below += p.stats["runs_below_bound"].get<std::size_t>();
    worst_expected = std::min(worst_expected, p.stats["expected_ratio"].get<double>());
  }
  report.stats["xos"] = Json{{"instances", xc.instances},
                             {"seeds_per_instance", xc.seeds},
                             {"runs", xc.instances * xc.seeds},
                             {"runs_below_per_run_bound", below},
                             {"min_expected_value_over_opt", worst_expected}};
  detail::merge(report, parts);
}

inline SuiteReport run_verification(const VerifyConfig& config) {
  config.generator.validate();
  SuiteReport report;
  if (config.matroid) run_matroid_suite(config, report);
  if (config.intersection) run_intersection_suite(config, report);
  if (config.xos) run_xos_suite(config, report);
  if (config.broken) run_broken_suite(config, report);
  return report;
}

// ---- config and report serialization ----

namespace detail {

inline std::size_t size_field(const Json& j, const char* key, std::size_t fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return count_from_json(j[key], join(where, key));
}

template <class E>
std::vector<E> enum_list(const Json& j, const std::string& field, const std::vector<std::pair<std::string, E>>& names) {
  if (!j.is_array()) throw InputError("expected an array of names", field);
  std::vector<E> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw InputError("expected a name", field);
    auto it = std::find_if(names.begin(), names.end(), [&](const auto& p) { return p.first == v.get<std::string>(); });
    if (it == names.end()) throw InputError("unknown value \"" + v.get<std::string>() + "\"", field);
    out.push_back(it->second);
  }
  return out;
}

inline SuiteConfig suite_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError("expected an object", where);
  SuiteConfig c;
  c.instances = size_field(j, "instances", c.instances, where);
  c.deviations = size_field(j, "deviations", c.deviations, where);
  c.min_random = size_field(j, "min_random", c.min_random, where);
  if (j.contains("truthfulness")) {
    if (!j["truthfulness"].is_boolean()) throw InputError("expected a boolean", where + ".truthfulness");
    c.truthfulness = j["truthfulness"].get<bool>();
  }
  return c;
}

}  // namespace detail

inline GeneratorConfig generator_from_json(const Json& j, const std::string& where) {
  GeneratorConfig g;
  if (j.is_null()) return g;
  if (!j.is_object()) throw InputError("expected an object", where);
  g.seed = detail::size_field(j, "seed", g.seed, where);
  g.n_min = detail::size_field(j, "n_min", g.n_min, where);
  g.n_max = detail::size_field(j, "n_max", g.n_max, where);
  if (j.contains("kinds"))
    g.families = detail::enum_list<MatroidFamily>(j["kinds"], where + ".kinds",
                                                  {{"uniform", MatroidFamily::kUniform},
                                                   {"partition", MatroidFamily::kPartition},
                                                   {"graphic", MatroidFamily::kGraphic},
                                                   {"deadline", MatroidFamily::kDeadline},
                                                   {"free", MatroidFamily::kFree}});
  if (j.contains("weights"))
    g.weights = detail::enum_list<WeightDistribution>(j["weights"], where + ".weights",
                                                      {{"uniform-integer", WeightDistribution::kUniformInteger},
                                                       {"heavy-tail", WeightDistribution::kHeavyTail}});
  if (j.contains("budget_regimes"))
    g.budgets = detail::enum_list<BudgetRegime>(j["budget_regimes"], where + ".budget_regimes",
                                                {{"tight", BudgetRegime::kTight}, {"loose", BudgetRegime::kLoose}});
  if (g.n_max > kBruteForceCap) throw InputError("n_max exceeds the brute-force cap", where + ".n_max");
  try {
    g.validate();
  } catch (const InputError& e) {
    throw InputError(e.what(), where);
  }
  return g;
}

// {"generator": {...}, "threads": N,
//  "suites": {"matroid": {...}, "intersection": {..., "apx": [...]},
//             "xos": {...}, "broken": {...}}}
inline VerifyConfig verify_config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object", "");
  for (const auto& [key, _] : j.items())
    if (key != "generator" && key != "threads" && key != "suites")
      throw InputError("unknown config field", key);
  VerifyConfig c;
  c.generator = generator_from_json(j.contains("generator") ? j["generator"] : Json(), "generator");
  c.threads = detail::size_field(j, "threads", 0, "");
  const Json& suites = detail::require(j, "suites", "");
  if (!suites.is_object()) throw InputError("expected an object", "suites");
  for (const auto& [key, value] : suites.items()) {
    const std::string where = "suites." + key;
    if (key == "matroid") {
      c.matroid = detail::suite_from_json(value, where);
    } else if (key == "intersection") {
      c.intersection = detail::suite_from_json(value, where);
      if (value.contains("apx")) {
        c.apx.clear();
        for (const auto& name : value["apx"]) {
          if (!name.is_string()) throw InputError("expected blackbox names", where + ".apx");
          const std::string n = name.get<std::string>();
          if (n != "exact-bipartite" && n != "greedy")
            throw InputError("unknown blackbox \"" + n + "\"", where + ".apx");
          c.apx.push_back(n);
        }
      }
    } else if (key == "broken") {
      c.broken = detail::suite_from_json(value, where);
    } else if (key == "xos") {
      if (!value.is_object()) throw InputError("expected an object", where);
      XosSuiteConfig x;
      x.instances = detail::size_field(value, "instances", x.instances, where);
      x.seeds = detail::size_field(value, "seeds", x.seeds, where);
      x.n_max = detail::size_field(value, "n_max", x.n_max, where);
      x.m_max = detail::size_field(value, "m_max", x.m_max, where);
      x.deviations = detail::size_field(value, "deviations", x.deviations, where);
      x.min_random = detail::size_field(value, "min_random", x.min_random, where);
      if (value.contains("truthfulness")) {
        if (!value["truthfulness"].is_boolean()) throw InputError("expected a boolean", where + ".truthfulness");
        x.truthfulness = value["truthfulness"].get<bool>();
      }
      if (x.n_max > kDefaultXosCap) throw InputError("exceeds the XOS cap", where + ".n_max");
      if (x.m_max < 1) throw InputError("need at least one function", where + ".m_max");
      if (value.contains("ratio_bound")) x.per_run_bound = rational_from_json(value["ratio_bound"], where + ".ratio_bound");
      x.params = xos_params_from_json(value, 0);
      c.xos = x;
    } else {
      throw InputError("unknown suite", where);
    }
  }
  return c;
}

inline Json failure_to_json(const FailureRecord& f) {
  Json j;
  j["property"] = to_string(f.property);
  j["mechanism"] = f.mechanism;
  j["instance_index"] = f.instance_index;
  if (f.seed) j["seed"] = *f.seed;
  j["element"] = f.element;
  j["deviation"] = f.deviation ? Json(to_fraction_string(*f.deviation)) : Json(nullptr);
  j["observed"] = f.observed;
  j["required"] = f.required;
  j["context"] = f.context;
  j["instance"] = f.instance;
  return j;
}

inline FailureRecord failure_from_json(const Json& j) {
  FailureRecord f;
  const Json& prop = detail::require(j, "property", "");
  if (!prop.is_string()) throw InputError("expected a string", "property");
  f.property = property_from_string(prop.get<std::string>());
  const Json& mech = detail::require(j, "mechanism", "");
  if (!mech.is_string()) throw InputError("expected a string", "mechanism");
  f.mechanism = mech.get<std::string>();
  f.instance_index = detail::size_field(j, "instance_index", 0, "");
  if (j.contains("seed") && !j["seed"].is_null()) f.seed = count_from_json(j["seed"], "seed");
  if (j.contains("element")) f.element = id_from_json(j["element"], "element");
  if (j.contains("deviation") && !j["deviation"].is_null())
    f.deviation = rational_from_json(j["deviation"], "deviation");
  if (j.contains("observed") && j["observed"].is_string()) f.observed = j["observed"].get<std::string>();
  if (j.contains("required") && j["required"].is_string()) f.required = j["required"].get<std::string>();
  if (j.contains("context")) f.context = j["context"];
  f.instance = detail::require(j, "instance", "");
  return f;
}

inline Json report_to_json(const SuiteReport& report) {
  Json j;
  j["passed"] = report.passed();
  j["failure_count"] = report.failure_count();
  Json list = Json::array();
  for (const auto& r : report.reports) {
    Json e;
    e["mechanism"] = r.mechanism;
    e["property"] = to_string(r.property);
    e["instances_checked"] = r.instances_checked;
    e["passed"] = r.passed();
    Json failures = Json::array();
    for (const auto& f : r.failures) failures.push_back(failure_to_json(f));
    e["failures"] = failures;
    list.push_back(e);
  }
  j["reports"] = list;
  j["stats"] = report.stats;
  return j;
}

// property,checked,failed rows; property names are qualified by mechanism.
inline std::string report_to_csv(const SuiteReport& report) {
  std::string out = "mechanism,property,checked,failed\n";
  for (const auto& r : report.reports)
    out += r.mechanism + "," + to_string(r.property) + "," + std::to_string(r.instances_checked) + "," +
           std::to_string(r.failures.size()) + "\n";
  return out;
}

// ---- replay ----

// Re-evaluates a failure record. Returns the reproduced failure, or
// nothing when the property now holds for the recorded witness.
inline std::optional<FailureRecord> recheck(const FailureRecord& rec) {
  auto file = std::make_shared<const InstanceFile>(instance_from_json(rec.instance));
  const Subject s = subject_for(rec.mechanism, file, rec.seed, rec.context);
  std::vector<FailureRecord> found;
  detail::FailureSink sink(s, rec.instance_index, 1000, found);
  auto matching = [&]() -> std::optional<FailureRecord> {
    for (auto& f : found)
      if (f.property == rec.property && f.element == rec.element && f.deviation == rec.deviation) return f;
    return std::nullopt;
  };

  switch (rec.property) {
    case Property::kApproxRatio: {
      if (rec.mechanism == "xos") {
        XosInstance inst = file->xos_instance();
        XosMechanism mech(inst.valuation);
        const Rational opt = xos_opt_value(mech, inst.true_costs, inst.budget);
        const std::size_t seeds = detail::size_field(rec.context, "seeds", 0, "context");
        const std::uint64_t suite_seed = detail::size_field(rec.context, "suite_seed", 0, "context");
        const Rational bound = parse_rational(rec.context.value("bound", std::string("436")));
        XosParams params = xos_params_from_json(rec.context.value("params", Json::object()), 0);
        Rational sum = 0;
        for (std::size_t k = 0; k < seeds; ++k) {
          params.seed = xos_coin_seed(suite_seed, rec.instance_index, k);
          sum += mech.valuation().value(mech.run(inst.bids, inst.budget, params).outcome.allocated());
        }
        const Rational mean = seeds == 0 ? Rational(0) : sum / seeds;
        if (mean * bound >= opt) return std::nullopt;
        FailureRecord r = rec;
        r.observed = "mean value " + to_fraction_string(mean);
        return r;
      }
      const Rational bound = parse_rational(s.context.value("bound", std::string("4")));
      const Outcome out = s.run(s.bids());
      if (file->feasibility && std::holds_alternative<MatroidSpec>(*file->feasibility))
        return check_ratio(s, rec.instance_index, out, std::get<MatroidSpec>(*file->feasibility), bound);
      return check_ratio(s, rec.instance_index, out, std::get<IntersectionSpec>(*file->feasibility), bound);
    }
    case Property::kLemma1Bound:
      return check_lemma1(s, rec.instance_index, s.run(s.bids()));
    default:
      break;
  }

  if (rec.deviation) {
    const Element e = s.universe().element(rec.element, "element");
    PerElement<Rational> honest_bids = s.bids();
    honest_bids[e] = s.true_costs()[e];
    check_deviation(s, e, s.run(honest_bids), honest_bids, *rec.deviation, sink);
  } else {
    check_soundness(s, s.run(s.bids()), s.bids(), "", std::nullopt, sink);
    for (auto& f : found)
      if (f.property == rec.property) return f;
    return std::nullopt;
  }
  return matching();
}

}  // namespace bfm

#endif  // BFM_VERIFY_HPP_
