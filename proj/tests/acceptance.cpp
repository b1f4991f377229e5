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

// Runs every acceptance criterion of the spec and prints one PASS/FAIL line
// per criterion (sub-checks indented beneath). Exit status is 0 only when
// every line passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <string>

#include "bfm/generator.hpp"
#include "bfm/io.hpp"
#include "bfm/mechanism.hpp"
#include "bfm/verify.hpp"
#include "bfm/xos.hpp"

namespace {

using namespace bfm;

int g_failed_lines = 0;

bool line(bool ok, const std::string& name, const std::string& detail, int indent = 0) {
  if (!ok) ++g_failed_lines;
  std::cout << std::string(indent, ' ') << (ok ? "PASS " : "FAIL ") << name;
  if (!detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << std::endl;
  return ok;
}

std::size_t failures(const SuiteReport& r, const std::string& mechanism, Property p) {
  const VerificationReport* v = r.find(mechanism, p);
  return v ? v->failures.size() : 0;
}

std::size_t checked(const SuiteReport& r, const std::string& mechanism, Property p) {
  const VerificationReport* v = r.find(mechanism, p);
  return v ? v->instances_checked : 0;
}

std::string counts(const SuiteReport& r, const std::string& mechanism, Property p) {
  return std::string(to_string(p)) + " " + std::to_string(failures(r, mechanism, p)) + "/" +
         std::to_string(checked(r, mechanism, p)) + " failed";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

GeneratorConfig pool() {
  GeneratorConfig g;  // n in [3, 12], all four matroid kinds, both regimes
  g.seed = 20260101;
  return g;
}

// Criteria 1, 2 (Mechanism-1 half) and 4 share one pass over the pool.
void matroid_criteria() {
  VerifyConfig c;
  c.generator = pool();
  c.threads = 1;
  c.matroid = SuiteConfig{1000, 50, 10, true};
  const auto start = std::chrono::steady_clock::now();
  const SuiteReport r = run_verification(c);
  const double elapsed = seconds_since(start);
  const Json& st = r.stats["matroid"];

  // Criterion 1: soundness + ratio 4. The timing covers the full pass,
  // truthfulness probes included, single-threaded.
  const std::string m = "matroid";
  bool ok = checked(r, m, Property::kApproxRatio) >= 1000;
  for (Property p : {Property::kIndependence, Property::kIR, Property::kBudgetFeasible, Property::kApproxRatio})
    ok &= failures(r, m, p) == 0;
  ok &= elapsed < 120.0;
  line(ok, "C1 Mechanism 1 soundness + 4-competitive",
       std::to_string(checked(r, m, Property::kApproxRatio)) + " instances, max ratio " +
           fmt(st["max_ratio"].get<double>()) + ", " + fmt(elapsed, 3) + " s single-threaded");
  for (Property p : {Property::kIndependence, Property::kIR, Property::kBudgetFeasible, Property::kApproxRatio})
    line(failures(r, m, p) == 0, counts(r, m, p), "", 4);

  // Deviations per element: every element of every instance gets at least
  // 50 (deviation_bids guarantees it; the total confirms).
  InstanceGenerator gen(c.generator);
  std::size_t elements = 0;
  for (std::size_t i = 0; i < 1000; ++i) elements += gen.matroid_instance(i).instance.universe.size();
  const std::size_t devs = st["deviations_run"].get<std::size_t>();
  const bool truthful_ok = failures(r, m, Property::kTruthful) == 0 &&
                           failures(r, m, Property::kBidIndependence) == 0 && devs >= 50 * elements;
  line(truthful_ok, "C2a Mechanism 1 truthfulness",
       std::to_string(devs) + " deviations over " + std::to_string(elements) + " elements; " +
           counts(r, m, Property::kTruthful) + "; " + counts(r, m, Property::kBidIndependence));

  // Criterion 4: Lemma 1.
  const std::size_t with_removal = st["lemma1_instances_with_removal"].get<std::size_t>();
  line(failures(r, m, Property::kLemma1Bound) == 0 && with_removal >= 100, "C4 Lemma 1 bound",
       counts(r, m, Property::kLemma1Bound) + "; " + std::to_string(with_removal) + " instances with |T| >= 1");
}

void broken_control() {
  VerifyConfig c;
  c.generator = pool();
  c.threads = 1;
  c.broken = SuiteConfig{100, 50, 10, true};
  const SuiteReport r = run_verification(c);
  const std::size_t v = failures(r, "broken", Property::kTruthful);
  line(v >= 1, "C2c broken control is caught", std::to_string(v) + " Truthful violations recorded (capped)");
}

void intersection_criteria() {
  VerifyConfig c;
  c.generator = pool();
  c.threads = 1;
  c.intersection = SuiteConfig{500, 50, 10, true};
  const SuiteReport r = run_verification(c);
  bool truthful = true, ratio = true;
  std::string truth_detail, ratio_detail;
  for (const char* apx : {"exact-bipartite", "greedy"}) {
    const std::string m = std::string("intersection:") + apx;
    truthful &= failures(r, m, Property::kTruthful) == 0 && failures(r, m, Property::kBidIndependence) == 0;
    for (Property p : {Property::kIndependence, Property::kIR, Property::kBudgetFeasible})
      truthful &= failures(r, m, p) == 0;
    truth_detail += (truth_detail.empty() ? "" : "; ") + m + " " + counts(r, m, Property::kTruthful);
    ratio &= failures(r, m, Property::kApproxRatio) == 0 && checked(r, m, Property::kApproxRatio) >= 500;
    ratio_detail += (ratio_detail.empty() ? "" : "; ") + std::string(apx) + " bound " +
                    (std::string(apx) == "greedy" ? "7" : "4") + ", max " +
                    fmt(r.stats[m]["max_ratio"].get<double>()) + ", " + counts(r, m, Property::kApproxRatio);
  }
  line(truthful, "C2b Mechanism 2 truthfulness + soundness", truth_detail);
  line(ratio, "C3 Mechanism 2 ratio 3*alpha+1", ratio_detail);
}

void constant_criterion() {
  const ConstantChoice c = optimize_constant(3.0);
  // Independent oracle: log-spaced grid with repeated zooming.
  double lo_a = std::log(1.0001), hi_a = std::log(1e5), lo_b = std::log(1e-3), hi_b = std::log(1e3);
  double best = -1, best_a = 0, best_b = 0;
  for (int round = 0; round < 40; ++round) {
    for (int i = 0; i <= 200; ++i) {
      const double a = std::exp(lo_a + (hi_a - lo_a) * i / 200);
      for (int j = 0; j <= 200; ++j) {
        const double b = std::exp(lo_b + (hi_b - lo_b) * j / 200);
        const double v = approximation_objective(a, b, 3.0);
        if (v > best) best = v, best_a = a, best_b = b;
      }
    }
    const double sa = (hi_a - lo_a) / 20, sb = (hi_b - lo_b) / 20;
    lo_a = std::log(best_a) - sa, hi_a = std::log(best_a) + sa;
    lo_b = std::log(best_b) - sb, hi_b = std::log(best_b) + sb;
  }
  const double at = approximation_objective(c.alpha, c.beta, 3.0);
  const double rel = std::abs(at - best) / best;
  const bool ok = c.ratio >= 430 && c.ratio <= 436.5 && c.alpha >= 210 && c.alpha <= 226 && c.beta >= 4.3 &&
                  c.beta <= 4.7 && rel <= 1e-6;
  line(ok, "C5 XOS constant (gamma = 3)",
       "ratio " + fmt(c.ratio, 7) + ", alpha " + fmt(c.alpha, 7) + ", beta " + fmt(c.beta, 6) +
           ", grid rel diff " + fmt(rel, 2));
}

void xos_criterion() {
  VerifyConfig c;
  c.generator = pool();
  c.threads = 1;
  XosSuiteConfig x;
  x.instances = 50;
  x.seeds = 200;
  x.n_max = 10;
  x.m_max = 4;
  x.truthfulness = true;
  c.xos = x;
  const auto start = std::chrono::steady_clock::now();
  const SuiteReport r = run_verification(c);
  const Json& st = r.stats["xos"];
  const std::size_t runs = st["runs"].get<std::size_t>();
  const std::size_t below = st["runs_below_per_run_bound"].get<std::size_t>();
  const double expected = st["min_expected_value_over_opt"].get<double>();

  bool sound = true;
  for (Property p : {Property::kIndependence, Property::kIR, Property::kBudgetFeasible})
    sound &= failures(r, "xos", p) == 0;
  const bool truthful = failures(r, "xos", Property::kTruthful) == 0;
  const bool per_run = below == 0;
  const bool in_expectation = failures(r, "xos", Property::kApproxRatio) == 0 && expected > 1.0 / 436;
  line(sound && truthful && per_run && in_expectation, "C6 XOS mechanism suite",
       "50 instances x 200 seeds, n <= 10, m <= 4, " + fmt(seconds_since(start), 3) + " s");
  line(sound, "budget feasible + IR on every fixed-seed run",
       counts(r, "xos", Property::kBudgetFeasible) + "; " + counts(r, "xos", Property::kIR), 4);
  std::set<std::size_t> gaining;
  if (const VerificationReport* v = r.find("xos", Property::kTruthful))
    for (const auto& f : v->failures) gaining.insert(f.instance_index);
  line(truthful, "fixed-seed truthfulness",
       std::to_string(gaining.size()) + " of " + std::to_string(checked(r, "xos", Property::kTruthful)) +
           " instances have a profitable deviation under some seed",
       4);
  if (!truthful) {
    const FailureRecord& f = r.find("xos", Property::kTruthful)->failures.front();
    std::cout << "         witness: instance " << f.instance_index << ", seed " << f.seed.value_or(0)
              << ", element " << f.element << " bids "
              << (f.deviation ? to_fraction_string(*f.deviation) : "-") << ": " << f.observed << " vs "
              << f.required << "\n";
  }
  line(per_run, "value >= OPT/436 on every run", std::to_string(below) + " of " + std::to_string(runs) + " runs below", 4);
  line(in_expectation, "mean value over seeds >= OPT/436",
       "min mean/OPT " + fmt(expected) + " vs 1/436 = " + fmt(1.0 / 436), 4);
}

void sampling_criteria() {
  GeneratorConfig g = pool();
  g.n_min = 2;
  g.n_max = 10;
  InstanceGenerator gen(g);
  Rng rng(99);

  // A random subset of the ground with positive value and tight alpha
  // f*(opt) / max f*(e) > 1.
  struct Draw {
    XosValuation val;
    ElementSet ground, opt;
    Rational alpha;
  };
  std::size_t index = 0;
  auto draw = [&]() -> Draw {
    for (;;) {
      XosInstance inst = gen.xos_instance(index++);
      ElementSet ground = inst.universe.all(), opt;
      for (Element e : ground)
        if (rng.below(2)) opt.push_back(e);
      if (opt.size() < 2) continue;
      const auto& f = inst.valuation.clause(inst.valuation.best_clause(opt));
      const Rational whole = total(f, opt);
      Rational biggest = 0;
      for (Element e : opt) biggest = std::max(biggest, f[e]);
      if (whole == 0 || whole / biggest <= 1) continue;
      return {inst.valuation, ground, opt, whole / biggest};
    }
  };

  std::size_t halves = 0, halves_failed = 0;
  while (halves < 500) {
    const Draw d = draw();
    auto [s1, s2] = partition_halves(d.val, d.opt, d.alpha);
    const auto& f = d.val.clause(d.val.best_clause(d.opt));
    const Rational bound = (d.alpha - 1) / (2 * d.alpha) * total(f, d.opt);
    if (set_union(s1, s2) != d.opt || !set_intersection(s1, s2).empty() || total(f, s1) < bound ||
        total(f, s2) < bound)
      ++halves_failed;
    ++halves;
  }
  line(halves_failed == 0, "C7a partition_halves (alpha-1)/(2 alpha) bound",
       std::to_string(halves_failed) + "/" + std::to_string(halves) + " precondition-satisfying instances failed");

  // Two-sided sampling event v(OPT n T_i) >= ((alpha-1)/(4 alpha)) v(OPT)
  // for both halves of the mechanism's split of the whole ground.
  constexpr std::size_t kInstances = 20, kSeeds = 2000;
  double worst = 1;
  for (std::size_t k = 0; k < kInstances; ++k) {
    const Draw d = draw();
    const Rational bound = (d.alpha - 1) / (4 * d.alpha) * d.val.value(d.opt);
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
      auto [t1, t2] = random_split(d.ground, seed);
      if (d.val.value(set_intersection(d.opt, t1)) >= bound && d.val.value(set_intersection(d.opt, t2)) >= bound)
        ++hits;
    }
    worst = std::min(worst, double(hits) / kSeeds);
  }
  line(worst >= 0.45, "C7b random_split two-sided success frequency",
       "min over " + std::to_string(kInstances) + " instances of 2000 seeds: " + fmt(worst));
}

Json run_file(const char* text, const std::string& mechanism) {
  const InstanceFile f = instance_from_json(Json::parse(text));
  if (mechanism == "matroid") {
    const MatroidInstance inst = f.matroid_instance();
    return outcome_to_json(run_matroid_mechanism(inst), inst.universe, mechanism, false)["payments"];
  }
  const IntersectionInstance inst = f.intersection_instance();
  const ApxBlackbox apx = blackbox_by_name("exact-bipartite", inst.feasibility);
  return outcome_to_json(run_intersection_mechanism(inst, apx), inst.universe, mechanism, false)["payments"];
}

void regression_criterion() {
  const Json ex2 = run_file(R"({"matroid": {"kind": "uniform", "rank": 2},
    "elements": [{"id": "a", "weight": 6, "cost": 6}, {"id": "b", "weight": 5, "cost": 2},
                 {"id": "c", "weight": 4, "cost": 2}], "budget": 10})",
                            "matroid");
  // Built in memory: the spec's trace has d_b = 4 above b = 3, which file
  // loading rejects.
  const Universe abc = Universe::from_ids({"a", "b", "c"});
  const auto vec = [](std::vector<Rational> v) { return PerElement<Rational>(std::move(v)); };
  const MatroidInstance tau_inst{abc, MatroidSpec::uniform(abc.all(), 2), vec({6, 5, 4}), vec({3, 4, 1}),
                                 vec({3, 4, 1}), Rational(3)};
  const Json ex3 = outcome_to_json(run_matroid_mechanism(tau_inst), abc, "matroid", false)["payments"];
  const Json bip = run_file(R"({"matroid": {"intersection": [
      {"kind": "partition", "blocks": [{"elements": ["e11", "e12"], "capacity": 1},
                                       {"elements": ["e21", "e22"], "capacity": 1}]},
      {"kind": "partition", "blocks": [{"elements": ["e11", "e21"], "capacity": 1},
                                       {"elements": ["e12", "e22"], "capacity": 1}]}]},
    "elements": [{"id": "e11", "weight": 4, "cost": 1}, {"id": "e12", "weight": 3, "cost": 1},
                 {"id": "e21", "weight": 3, "cost": 1}, {"id": "e22", "weight": 1, "cost": 1}],
    "budget": 12})",
                            "intersection");
  const bool a = ex2 == Json::parse(R"({"b": "50/9", "c": "40/9"})");
  const bool b = ex3 == Json::parse(R"({"a": "3"})");
  const bool c = bip == Json::parse(R"({"e12": "6", "e21": "6"})");
  line(a && b && c, "C8 exact-arithmetic regressions", "");
  line(a, "Mechanism 1 no-removal example", ex2.dump(), 4);
  line(b, "Mechanism 1 removal-then-tau example", ex3.dump(), 4);
  line(c, "Mechanism 2 2x2 bipartite example", bip.dump(), 4);
}

}  // namespace

int main() {
  std::cout << "Acceptance criteria (all [PRIMARY])\n";
  try {
    matroid_criteria();
    broken_control();
    intersection_criteria();
    constant_criterion();
    xos_criterion();
    sampling_criteria();
    regression_criterion();
  } catch (const std::exception& e) {
    std::cout << "FAIL aborted: " << e.what() << "\n";
    return 1;
  }
  std::cout << (g_failed_lines == 0 ? "ALL PASS" : std::to_string(g_failed_lines) + " line(s) FAILED") << "\n";
  return g_failed_lines == 0 ? 0 : 1;
}
