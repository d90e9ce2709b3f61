/*
 * Copyright 2026 The regsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// regsim: run, sweep, explore and check register-protocol scenarios.
//
// Exit codes: 0 pass, 1 check failure, 2 config error, 3 resource bound.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "regsim/explore.hpp"
#include "regsim/history.hpp"
#include "regsim/report.hpp"
#include "regsim/scenario.hpp"
#include "regsim/sim.hpp"
#include "regsim/trace.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kConfigError = 2;
constexpr int kResourceBound = 3;

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw regsim::ConfigError("cannot write " + path);
  out << contents;
}

std::vector<regsim::ExploreOp> parse_ops(const std::string& spec) {
  // "1:write:a,2:read,3:read"
  std::vector<regsim::ExploreOp> ops;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string part;
    while (std::getline(is, part, ':')) parts.push_back(part);
    if (parts.size() < 2) throw regsim::ConfigError("bad op '" + item + "', expected <pid>:read or <pid>:write:<value>");
    regsim::ExploreOp op;
    try {
      op.process = regsim::ProcessId{static_cast<std::uint32_t>(std::stoul(parts[0]))};
    } catch (const std::exception&) {
      throw regsim::ConfigError("bad process id in op '" + item + "'");
    }
    if (parts[1] == "read" && parts.size() == 2) {
      op.kind = regsim::OpKind::read;
    } else if (parts[1] == "write" && parts.size() == 3) {
      op.kind = regsim::OpKind::write;
      op.value = regsim::RegValue(parts[2]);
    } else {
      throw regsim::ConfigError("bad op '" + item + "'");
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out_path,
            const std::string& report_path, bool quiet) {
  auto config = regsim::load_scenario(config_path);
  if (seed) config.seed = *seed;
  const auto trace = regsim::run(config);
  if (!out_path.empty()) write_file(out_path, regsim::to_jsonl(trace));
  const auto report = regsim::make_report(trace);
  if (!report_path.empty()) write_file(report_path, regsim::to_json(report).dump(2) + "\n");
  if (!quiet) std::cout << regsim::format_table(report);
  if (!report.pass()) std::cout << "reproduce with: regsim run " << config_path << " --seed " << config.seed << "\n";
  return report.pass() ? kPass : kCheckFailure;
}

int cmd_check(const std::string& trace_path, const std::string& report_path, bool quiet) {
  const auto trace = regsim::load_trace(trace_path);
  const auto report = regsim::make_report(trace);
  if (!report_path.empty()) write_file(report_path, regsim::to_json(report).dump(2) + "\n");
  if (!quiet) std::cout << regsim::format_table(report);
  return report.pass() ? kPass : kCheckFailure;
}

int cmd_sweep(const std::string& config_path, std::uint64_t seeds, std::uint64_t first_seed, unsigned jobs,
              const std::string& report_path) {
  const auto base = regsim::load_scenario(config_path);
  regsim::SweepReport sweep;
  sweep.digest = regsim::scenario_digest(base);
  sweep.first_seed = first_seed;

  std::mutex mu;
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> abort{false};
  std::optional<std::string> fatal;
  int fatal_code = kPass;

  auto worker = [&] {
    while (!abort.load()) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= seeds) return;
      auto config = base;
      config.seed = first_seed + i;
      try {
        const auto report = regsim::make_report(regsim::run(config));
        std::lock_guard lock(mu);
        sweep.merge(config.seed, report);
        if (!report.pass()) abort = true;
      } catch (const regsim::BudgetExceeded& e) {
        std::lock_guard lock(mu);
        fatal = "seed " + std::to_string(config.seed) + ": " + e.what();
        fatal_code = kResourceBound;
        abort = true;
      } catch (const regsim::ConfigError& e) {
        std::lock_guard lock(mu);
        fatal = "seed " + std::to_string(config.seed) + ": " + e.what();
        fatal_code = kConfigError;
        abort = true;
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned k = 0; k < std::max(1u, jobs); ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  if (!report_path.empty()) write_file(report_path, regsim::to_json(sweep).dump(2) + "\n");
  std::cout << "sweep " << sweep.digest << ": " << sweep.runs << " run(s) from seed " << first_seed << "\n";
  for (const auto& [k, v] : sweep.max_duration) std::cout << "  max " << k << " = " << v << "\n";
  std::cout << "  bound violations: " << sweep.violations << "\n";
  if (fatal) {
    std::cerr << "error: " << *fatal << "\n";
    return fatal_code;
  }
  if (!sweep.pass()) {
    std::cout << "FAIL at seed " << sweep.failing_seeds.front() << "; reproduce with: regsim run " << config_path
              << " --seed " << sweep.failing_seeds.front() << "\n";
    return kCheckFailure;
  }
  std::cout << "PASS\n";
  return kPass;
}

int cmd_explore(std::uint32_t n, std::uint32_t t, const std::string& ops, const std::string& algorithm,
                bool writer_crash, bool crash_anywhere, std::size_t max_states) {
  regsim::ExploreConfig cfg;
  cfg.n = n;
  cfg.t = t;
  try {
    cfg.algorithm = regsim::algorithm_from_string(algorithm);
  } catch (const std::invalid_argument& e) {
    throw regsim::ConfigError(e.what());
  }
  cfg.ops = parse_ops(ops);
  cfg.writer_crash_subsets = writer_crash;
  cfg.crash_anywhere = crash_anywhere;
  const auto result = regsim::explore(cfg, regsim::ExploreBounds{max_states});

  std::size_t claims_fail = 0, lin_fail = 0, disagree = 0, term_fail = 0;
  for (const auto& h : result.histories) {
    const bool c = regsim::check_claims(h).pass;
    const bool l = regsim::check_linearizable(h).pass;
    claims_fail += !c;
    lin_fail += !l;
    disagree += c != l;
    term_fail += !regsim::check_termination(h).pass;
  }
  std::cout << "explored " << result.states << " states, " << result.terminals << " terminal(s), "
            << result.histories.size() << " distinct histories\n";
  std::cout << "  claims failures: " << claims_fail << "\n  linearizability failures: " << lin_fail
            << "\n  checker disagreements: " << disagree << "\n  termination failures: " << term_fail << "\n";
  if (result.overflow) {
    std::cout << "state bound of " << max_states << " exceeded (partial count above)\n";
    return kResourceBound;
  }
  const bool ok = claims_fail == 0 && lin_fail == 0 && term_fail == 0;
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kPass : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regsim: simulate and verify SWMR atomic register protocols"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one scenario, write its trace and report");
  std::string run_config, run_out, run_report;
  std::optional<std::uint64_t> run_seed;
  bool run_quiet = false;
  run->add_option("config", run_config, "Scenario JSON file")->required();
  run->add_option("--seed", run_seed, "Override the scenario's seed");
  run->add_option("--out", run_out, "Write the trace (JSONL) here");
  run->add_option("--report", run_report, "Write the report (JSON) here");
  run->add_flag("-q,--quiet", run_quiet, "Do not print the report table");

  auto* sweep = app.add_subcommand("sweep", "Run a scenario under many seeds");
  std::string sweep_config, sweep_report;
  std::uint64_t sweep_seeds = 100, sweep_first = 0;
  unsigned sweep_jobs = 1;
  sweep->add_option("config", sweep_config, "Scenario JSON file")->required();
  sweep->add_option("--seeds", sweep_seeds, "Number of seeds")->capture_default_str();
  sweep->add_option("--first-seed", sweep_first, "First seed")->capture_default_str();
  sweep->add_option("--jobs", sweep_jobs, "Worker threads")->capture_default_str();
  sweep->add_option("--report", sweep_report, "Write the aggregate report (JSON) here");

  auto* explore = app.add_subcommand("explore", "Exhaustively explore a small instance (n <= 3)");
  std::uint32_t ex_n = 3, ex_t = 1;
  std::string ex_ops = "1:write:a,2:read,3:read", ex_alg = "teff-modified";
  bool ex_writer_crash = false, ex_crash_any = false;
  std::size_t ex_max = regsim::ExploreBounds{}.max_states;
  explore->add_option("--n", ex_n)->capture_default_str();
  explore->add_option("--t", ex_t)->capture_default_str();
  explore->add_option("--ops", ex_ops, "Comma list of <pid>:read | <pid>:write:<value>")->capture_default_str();
  explore->add_option("--algorithm", ex_alg, "teff | teff-modified | abd")->capture_default_str();
  explore->add_flag("--writer-crash", ex_writer_crash, "Branch every write into each partial-broadcast crash");
  explore->add_flag("--crash-anywhere", ex_crash_any, "Allow crashes between any two steps");
  explore->add_option("--max-states", ex_max)->capture_default_str();

  auto* check = app.add_subcommand("check", "Re-check a stored trace and regenerate its report");
  std::string check_trace, check_report;
  bool check_quiet = false;
  check->add_option("trace", check_trace, "Trace JSONL file")->required();
  check->add_option("--report", check_report, "Write the report (JSON) here");
  check->add_flag("-q,--quiet", check_quiet, "Do not print the report table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_config, run_seed, run_out, run_report, run_quiet);
    if (*sweep) return cmd_sweep(sweep_config, sweep_seeds, sweep_first, sweep_jobs, sweep_report);
    if (*explore) return cmd_explore(ex_n, ex_t, ex_ops, ex_alg, ex_writer_crash, ex_crash_any, ex_max);
    if (*check) return cmd_check(check_trace, check_report, check_quiet);
  } catch (const regsim::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResourceBound;
  } catch (const regsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const regsim::ProtocolError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}
