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

// Command-line front end.
//
// Exit codes: 0 success; 1 verification failures (or a replayed failure
// that reproduces); 2 input or schema errors; 3 size-cap violations;
// 4 I/O errors.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "bfm/bench.hpp"
#include "bfm/io.hpp"
#include "bfm/mechanism.hpp"
#include "bfm/verify.hpp"
#include "bfm/xos.hpp"

namespace {

using namespace bfm;

constexpr int kExitFailures = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;
constexpr int kExitIo = 4;

struct RunOptions {
  std::string instance;
  std::string mechanism = "auto";
  std::string apx = "exact-bipartite";
  std::uint64_t seed = 0;
  std::optional<std::string> alpha, beta, gamma;
  bool trace = false;
  std::size_t cap = kDefaultXosCap;
};

XosParams xos_params(const RunOptions& o) {
  XosParams p;
  auto parse = [](const std::string& text, const char* flag) {
    try {
      return parse_rational(text);
    } catch (const InputError& e) {
      throw InputError(e.what(), flag);
    }
  };
  if (o.alpha) p.alpha = parse(*o.alpha, "--alpha");
  if (o.beta) p.beta = parse(*o.beta, "--beta");
  if (o.gamma) p.gamma = parse(*o.gamma, "--gamma");
  p.seed = o.seed;
  p.validate();
  return p;
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_run(const RunOptions& o, bool force_xos) {
  const InstanceFile file = load_instance(o.instance);
  std::string mechanism = force_xos ? "xos" : o.mechanism;
  if (mechanism == "auto") {
    if (file.xos) {
      mechanism = "xos";
    } else if (file.feasibility && std::holds_alternative<IntersectionSpec>(*file.feasibility)) {
      mechanism = "intersection";
    } else {
      mechanism = "matroid";
    }
  }
  if (mechanism == "matroid") {
    const MatroidInstance inst = file.matroid_instance();
    print_json(outcome_to_json(run_matroid_mechanism(inst), inst.universe, "matroid", o.trace));
  } else if (mechanism == "intersection") {
    const IntersectionInstance inst = file.intersection_instance();
    const ApxBlackbox apx = blackbox_by_name(o.apx, inst.feasibility);
    print_json(outcome_to_json(run_intersection_mechanism(inst, apx), inst.universe,
                               "intersection:" + o.apx, o.trace));
  } else if (mechanism == "xos") {
    const XosInstance inst = file.xos_instance();
    const XosParams params = xos_params(o);
    print_json(xos_outcome_to_json(xos_mechanism_main(inst, params, o.cap), inst.universe, params, o.trace));
  } else {
    throw InputError("unknown mechanism \"" + mechanism + "\"", "--mechanism");
  }
  return 0;
}

Json load_json(const std::string& path) { return parse_json_text(read_file(path), path); }

int cmd_verify(const std::string& config_path, const std::string& out_dir, std::optional<std::size_t> threads) {
  VerifyConfig config = verify_config_from_json(load_json(config_path));
  if (threads) config.threads = *threads;
  const SuiteReport report = run_verification(config);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  write_file((std::filesystem::path(out_dir) / "report.json").string(), report_to_json(report).dump(2) + "\n");
  const std::string csv = report_to_csv(report);
  write_file((std::filesystem::path(out_dir) / "summary.csv").string(), csv);
  std::cout << csv;
  if (!report.passed()) {
    std::cerr << "verification failed: " << report.failure_count() << " failure(s); see "
              << (std::filesystem::path(out_dir) / "report.json").string() << "\n";
    return kExitFailures;
  }
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out, std::optional<std::size_t> threads) {
  BenchConfig config = bench_config_from_json(load_json(config_path));
  if (threads) config.threads = *threads;
  const auto rows = run_bench(config);
  write_file(out, bench_to_csv(rows));
  const BenchSummary s = summarize(rows);
  std::cout << "runs " << s.runs << "\n";
  std::cout << "max_ratio " << (s.unbounded ? "inf" : s.max_ratio ? to_decimal_string(*s.max_ratio) : "n/a")
            << "\n";
  std::cout << "mean_budget_utilization " << (s.runs ? to_decimal_string(s.mean_utilization) : "n/a") << "\n";
  return 0;
}

// Accepts one failure record, or a report.json (picks failure `index`
// in report order).
int cmd_replay(const std::string& path, std::size_t index) {
  const Json j = load_json(path);
  Json record;
  if (j.is_object() && j.contains("reports")) {
    std::size_t seen = 0;
    for (const auto& r : j["reports"])
      for (const auto& f : r["failures"])
        if (seen++ == index) record = f;
    if (record.is_null())
      throw InputError("report has no failure #" + std::to_string(index), "--index");
  } else {
    record = j;
  }
  const FailureRecord rec = failure_from_json(record);
  const auto again = recheck(rec);
  Json out;
  out["property"] = to_string(rec.property);
  out["mechanism"] = rec.mechanism;
  out["element"] = rec.element;
  out["deviation"] = rec.deviation ? Json(to_fraction_string(*rec.deviation)) : Json(nullptr);
  out["reproduced"] = again.has_value();
  out["recorded_observed"] = rec.observed;
  if (again) {
    out["observed"] = again->observed;
    out["required"] = again->required;
  }
  print_json(out);
  return again ? kExitFailures : 0;
}

int cmd_xos_constant(const std::string& gamma_text) {
  double gamma;
  try {
    gamma = to_double(parse_rational(gamma_text));
  } catch (const InputError& e) {
    throw InputError(e.what(), "--gamma");
  }
  const ConstantChoice c = optimize_constant(gamma);
  Json j;
  j["gamma"] = gamma;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["ratio"] = c.ratio;
  print_json(j);
  return 0;
}

void add_run_flags(CLI::App* cmd, RunOptions& o, bool with_mechanism) {
  cmd->add_option("--instance", o.instance, "instance JSON file")->required();
  if (with_mechanism) {
    cmd->add_option("--mechanism", o.mechanism, "matroid | intersection | xos | auto")
        ->check(CLI::IsMember({"matroid", "intersection", "xos", "auto"}));
    cmd->add_option("--apx", o.apx, "intersection blackbox: exact-bipartite | greedy");
  }
  cmd->add_option("--seed", o.seed, "XOS coin seed");
  cmd->add_option("--alpha", o.alpha, "XOS alpha (rational)");
  cmd->add_option("--beta", o.beta, "XOS beta (rational)");
  cmd->add_option("--gamma", o.gamma, "XOS gamma (rational, analysis only)");
  cmd->add_flag("--trace", o.trace, "include the descending-price trace");
  cmd->add_option("--cap", o.cap, "XOS enumeration cap on n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-feasible procurement mechanisms over matroids"};
  app.require_subcommand(1);

  RunOptions run_opts, xos_opts;
  auto* run = app.add_subcommand("run", "run a mechanism on an instance file");
  add_run_flags(run, run_opts, true);
  auto* run_xos = app.add_subcommand("run-xos", "run the XOS mechanism on an instance file");
  add_run_flags(run_xos, xos_opts, false);

  std::string config, out_dir = ".", out, record;
  std::optional<std::size_t> threads;
  std::size_t index = 0;
  auto* verify = app.add_subcommand("verify", "run the property suites of a config");
  verify->add_option("--config", config, "verify config JSON")->required();
  verify->add_option("--out-dir", out_dir, "directory for report.json and summary.csv");
  verify->add_option("--threads", threads, "worker threads (0: all cores)");

  std::string bench_config;
  auto* bench = app.add_subcommand("bench", "Monte Carlo benchmark sweep to CSV");
  bench->add_option("--config", bench_config, "bench config JSON")->required();
  bench->add_option("--out", out, "output CSV")->required();
  bench->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* replay = app.add_subcommand("replay", "re-evaluate a failure record");
  replay->add_option("--record", record, "failure record JSON or report.json")->required();
  replay->add_option("--index", index, "failure index within a report.json");

  std::string gamma = "3";
  auto* constant = app.add_subcommand("xos-constant", "optimise the XOS approximation constant");
  constant->add_option("--gamma", gamma, "sub-mechanism approximation factor (>= 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts, false);
    if (run_xos->parsed()) return cmd_run(xos_opts, true);
    if (verify->parsed()) return cmd_verify(config, out_dir, threads);
    if (bench->parsed()) return cmd_bench(bench_config, out, threads);
    if (replay->parsed()) return cmd_replay(record, index);
    if (constant->parsed()) return cmd_xos_constant(gamma);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitInput;
}
