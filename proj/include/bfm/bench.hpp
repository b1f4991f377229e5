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

// Monte Carlo benchmark sweep: one CSV row per generated instance.
//
// Config: {"generator": {...}, "runs": N, "mechanism": "matroid" |
// "intersection" | "xos", "apx": "exact-bipartite" | "greedy",
// "xos": {"alpha", "beta", "gamma"}, "threads": T}. Every column except
// runtime_us is a function of the config.

#ifndef BFM_BENCH_HPP_
#define BFM_BENCH_HPP_

#include <chrono>
#include <string>
#include <vector>

#include "bfm/verify.hpp"

namespace bfm {

struct BenchConfig {
  GeneratorConfig generator;
  std::size_t runs = 0;
  std::string mechanism = "matroid";
  std::string apx = "exact-bipartite";
  XosParams xos;
  std::size_t threads = 0;
};

struct BenchRow {
  std::string instance_hash;
  std::size_t n = 0;
  std::string matroid_kind;
  std::string mechanism;
  Rational alpha;
  std::optional<Rational> ratio;  // OPT / value; empty when nothing of value was bought
  Rational utilization;           // total payment / budget
  long long runtime_us = 0;
};

inline BenchConfig bench_config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object", "");
  for (const auto& [key, _] : j.items())
    if (key != "generator" && key != "runs" && key != "mechanism" && key != "apx" && key != "xos" &&
        key != "threads")
      throw InputError("unknown config field", key);
  BenchConfig c;
  c.generator = generator_from_json(j.contains("generator") ? j["generator"] : Json(), "generator");
  c.runs = count_from_json(detail::require(j, "runs", ""), "runs");
  c.threads = j.contains("threads") ? count_from_json(j["threads"], "threads") : 0;
  if (j.contains("mechanism")) {
    if (!j["mechanism"].is_string()) throw InputError("expected a string", "mechanism");
    c.mechanism = j["mechanism"].get<std::string>();
  }
  if (c.mechanism != "matroid" && c.mechanism != "intersection" && c.mechanism != "xos")
    throw InputError("unknown mechanism \"" + c.mechanism + "\"", "mechanism");
  if (j.contains("apx")) {
    if (!j["apx"].is_string()) throw InputError("expected a string", "apx");
    c.apx = j["apx"].get<std::string>();
    if (c.apx != "exact-bipartite" && c.apx != "greedy")
      throw InputError("unknown blackbox \"" + c.apx + "\"", "apx");
  }
  if (j.contains("xos")) c.xos = xos_params_from_json(j["xos"], 0);
  if (c.mechanism == "xos" && c.generator.n_max > kDefaultXosCap)
    throw InputError("exceeds the XOS cap", "generator.n_max");
  return c;
}

inline std::vector<BenchRow> run_bench(const BenchConfig& config) {
  InstanceGenerator gen(config.generator);
  return parallel_map<BenchRow>(config.runs, config.threads, [&](std::size_t i) {
    BenchRow row;
    row.mechanism = config.mechanism;
    Rational value, opt, paid, budget;
    using Clock = std::chrono::steady_clock;
    Clock::duration elapsed{};
    if (config.mechanism == "matroid") {
      const GeneratedMatroidInstance g = gen.matroid_instance(i);
      const auto& inst = g.instance;
      row.instance_hash = instance_hash(instance_to_json(to_instance_file(inst)));
      row.n = inst.universe.size();
      row.matroid_kind = to_string(g.family);
      row.alpha = 1;
      const auto start = Clock::now();
      const Outcome out = run_matroid_mechanism(inst);
      elapsed = Clock::now() - start;
      value = total(inst.weights, out.allocated());
      opt = total(inst.weights, brute_force_opt(inst.feasibility, inst.weights, inst.true_costs, inst.budget));
      paid = out.total_payment();
      budget = inst.budget;
    } else if (config.mechanism == "intersection") {
      const IntersectionInstance inst = gen.bipartite_instance(i);
      row.instance_hash = instance_hash(instance_to_json(to_instance_file(inst)));
      row.n = inst.universe.size();
      row.matroid_kind = "bipartite";
      const ApxBlackbox apx = blackbox_by_name(config.apx, inst.feasibility);
      row.mechanism += ":" + config.apx;
      row.alpha = apx.alpha;
      const auto start = Clock::now();
      const Outcome out = run_intersection_mechanism(inst, apx);
      elapsed = Clock::now() - start;
      value = total(inst.weights, out.allocated());
      opt = total(inst.weights, brute_force_opt(inst.feasibility, inst.weights, inst.true_costs, inst.budget));
      paid = out.total_payment();
      budget = inst.budget;
    } else {
      const XosInstance inst = gen.xos_instance(i);
      row.instance_hash = instance_hash(instance_to_json(to_instance_file(inst)));
      row.n = inst.universe.size();
      row.matroid_kind = "xos";
      row.alpha = config.xos.alpha;
      XosParams params = config.xos;
      params.seed = xos_coin_seed(config.generator.seed, i, 0);
      const auto start = Clock::now();
      const XosMechanism mech(inst.valuation);
      const Outcome out = mech.run(inst.bids, inst.budget, params).outcome;
      elapsed = Clock::now() - start;
      value = inst.valuation.value(out.allocated());
      opt = xos_opt_value(mech, inst.true_costs, inst.budget);
      paid = out.total_payment();
      budget = inst.budget;
    }
    if (value > 0) row.ratio = opt / value;
    row.utilization = paid / budget;
    row.runtime_us = std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count();
    return row;
  });
}

inline std::string bench_csv_header() {
  return "instance_hash,n,matroid_kind,mechanism,alpha,ratio,total_payment_over_budget,runtime_us\n";
}

inline std::string bench_to_csv(const std::vector<BenchRow>& rows) {
  std::string out = bench_csv_header();
  for (const auto& r : rows) {
    out += r.instance_hash + "," + std::to_string(r.n) + "," + r.matroid_kind + "," + r.mechanism + "," +
           to_decimal_string(r.alpha) + "," + (r.ratio ? to_decimal_string(*r.ratio) : std::string("inf")) +
           "," + to_decimal_string(r.utilization) + "," + std::to_string(r.runtime_us) + "\n";
  }
  return out;
}

struct BenchSummary {
  std::size_t runs = 0;
  std::optional<Rational> max_ratio;  // empty: no runs, or some run bought nothing
  bool unbounded = false;
  Rational mean_utilization;
};

inline BenchSummary summarize(const std::vector<BenchRow>& rows) {
  BenchSummary s;
  s.runs = rows.size();
  Rational sum = 0;
  for (const auto& r : rows) {
    sum += r.utilization;
    if (!r.ratio) {
      s.unbounded = true;
    } else if (!s.max_ratio || *r.ratio > *s.max_ratio) {
      s.max_ratio = r.ratio;
    }
  }
  if (!rows.empty()) s.mean_utilization = sum / rows.size();
  return s;
}

}  // namespace bfm

#endif  // BFM_BENCH_HPP_
