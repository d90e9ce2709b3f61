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

#ifndef REGSIM_REPORT_HPP
#define REGSIM_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "regsim/history.hpp"
#include "regsim/metrics.hpp"
#include "regsim/trace.hpp"

namespace regsim {

/// Everything derived from one trace. Regenerating it from a stored trace
/// gives byte-identical JSON.
struct RunReport {
  std::string digest;
  ScenarioConfig config;
  Verdict termination;
  Verdict claims;
  Verdict linearizable;
  BoundReport bounds;
  std::map<std::int64_t, std::size_t> messages;

  bool pass() const {
    return termination.pass && claims.pass && linearizable.pass && bounds.violations == 0;
  }
};

RunReport make_report(const Trace& trace);
nlohmann::ordered_json to_json(const RunReport& r);

/// Fixed-width table for terminals.
std::string format_table(const RunReport& r);

/// Order-independent merge of many runs of one scenario.
struct SweepReport {
  std::string digest;
  std::uint64_t first_seed = 0;
  std::uint64_t runs = 0;
  std::vector<std::uint64_t> failing_seeds;
  std::size_t violations = 0;
  std::map<std::string, Ticks> max_duration;

  void merge(std::uint64_t seed, const RunReport& r);
  bool pass() const { return failing_seeds.empty(); }
};

nlohmann::ordered_json to_json(const SweepReport& r);

}  // namespace regsim

#endif  // REGSIM_REPORT_HPP
