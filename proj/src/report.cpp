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

#include "regsim/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace regsim {

using nlohmann::ordered_json;

RunReport make_report(const Trace& trace) {
  RunReport r;
  r.digest = scenario_digest(trace.config);
  r.config = trace.config;
  const History h = history_from_trace(trace);
  r.termination = check_termination(h);
  r.claims = check_claims(h);
  r.linearizable = check_linearizable(h);
  r.bounds = assert_bounds(trace);
  r.messages = count_messages(trace);
  return r;
}

ordered_json to_json(const RunReport& r) {
  ordered_json j;
  j["scenario"] = r.digest;
  j["algorithm"] = to_string(r.config.algorithm);
  j["network"] = {{"kind", to_string(r.config.network.kind)},
                  {"bound", r.config.network.bound},
                  {"delays", to_string(r.config.network.mode)}};
  j["n"] = r.config.n;
  j["t"] = r.config.t;
  j["seed"] = r.config.seed;
  j["pass"] = r.pass();
  j["termination"] = to_json(r.termination);
  j["claims"] = to_json(r.claims);
  j["linearizable"] = to_json(r.linearizable);
  j["bounds"] = to_json(r.bounds);
  ordered_json msgs = ordered_json::array();
  for (const auto& [op, count] : r.messages) msgs.push_back({{"op", op}, {"sends", count}});
  j["messages"] = std::move(msgs);
  return j;
}

std::string format_table(const RunReport& r) {
  std::ostringstream out;
  char line[160];
  out << "scenario " << r.digest << "  algorithm " << to_string(r.config.algorithm) << "  network "
      << to_string(r.config.network.kind) << "(" << r.config.network.bound << ")  n=" << r.config.n
      << " t=" << r.config.t << "  seed " << r.config.seed << "\n";
  std::snprintf(line, sizeof line, "%-4s %-4s %-6s %-26s %9s %5s %7s %5s %9s\n", "op", "proc", "kind", "class",
                "duration", "cmp", "bound", "ok", "messages");
  out << line;
  for (const auto& b : r.bounds.ops) {
    const std::string cls =
        b.kind == OpKind::write ? "-" : (b.local_read ? "local" : to_string(b.cls.value_or(ReadClass::wlf)));
    std::snprintf(line, sizeof line, "%-4zu p%-3u %-6s %-26s %9lld %5s %7lld %5s %9zu\n", b.op, b.process.value,
                  to_string(b.kind), cls.c_str(), static_cast<long long>(b.duration), to_string(b.cmp),
                  static_cast<long long>(b.bound), b.within_bound ? "yes" : "NO", b.messages);
    out << line;
  }
  if (r.bounds.pending > 0) out << r.bounds.pending << " operation(s) pending at end of run\n";
  auto verdict = [&](const char* name, const Verdict& v) {
    out << name << ": " << (v.skipped ? "skipped" : v.pass ? "pass" : "FAIL");
    if (!v.note.empty()) out << " (" << v.note << ")";
    out << "\n";
    for (const auto& x : v.violations) out << "  " << x.rule << ": " << x.detail << "\n";
  };
  verdict("termination", r.termination);
  verdict("atomicity claims", r.claims);
  verdict("linearizability", r.linearizable);
  out << "bound violations: " << r.bounds.violations << (r.bounds.informational ? " (async: informational)" : "")
      << "\n";
  out << (r.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

void SweepReport::merge(std::uint64_t seed, const RunReport& r) {
  ++runs;
  violations += r.bounds.violations;
  if (!r.pass()) {
    failing_seeds.insert(std::upper_bound(failing_seeds.begin(), failing_seeds.end(), seed), seed);
  }
  for (const auto& [k, v] : r.bounds.max_duration) {
    auto& mx = max_duration[k];
    mx = std::max(mx, v);
  }
}

ordered_json to_json(const SweepReport& r) {
  ordered_json j;
  j["scenario"] = r.digest;
  j["first_seed"] = r.first_seed;
  j["runs"] = r.runs;
  j["pass"] = r.pass();
  j["bound_violations"] = r.violations;
  j["failing_seeds"] = r.failing_seeds;
  ordered_json mx = ordered_json::object();
  for (const auto& [k, v] : r.max_duration) mx[k] = v;
  j["max_duration"] = std::move(mx);
  return j;
}

}  // namespace regsim
