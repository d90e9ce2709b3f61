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

#ifndef REGSIM_HISTORY_HPP
#define REGSIM_HISTORY_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "regsim/trace.hpp"
#include "regsim/types.hpp"

namespace regsim {

struct OpRecord {
  std::size_t id = 0;
  ProcessId process;
  OpKind kind = OpKind::read;
  Ticks invoke = 0;
  std::optional<Ticks> respond;
  /// Protocol identifier from the invoke event (see Step::tag).
  SeqNo tag = 0;
  /// Writes: the written value and its sequence number. Reads: the returned
  /// value and sequence number (meaningless while pending).
  RegValue value;
  SeqNo seq = 0;

  bool completed() const { return respond.has_value(); }
};

/// Operation-level view of a trace.
struct History {
  std::vector<OpRecord> ops;
  /// Crash time of every faulty process.
  std::map<ProcessId, Ticks> crashes;
  RegValue initial;

  bool faulty(ProcessId p) const { return crashes.contains(p); }
};

History history_from_trace(const Trace& trace);

/// True when a responded strictly before b was invoked.
bool precedes(const OpRecord& a, const OpRecord& b);

struct Violation {
  std::string rule;
  std::vector<std::size_t> ops;
  std::string detail;
};

struct Verdict {
  bool pass = true;
  /// The check did not run (e.g. the history exceeded the size guard).
  bool skipped = false;
  std::vector<Violation> violations;
  std::string note;
};

nlohmann::ordered_json to_json(const Verdict& v);

/// Every operation of a correct process responded. A faulty process's last
/// operation is exempt.
Verdict check_termination(const History& h);

/// The three ordering claims that together give SWMR atomicity, plus value
/// provenance (every read returns the value of the write carrying its
/// sequence number, or the initial value for 0):
///   1. read[i,x] before write[y]  =>  x < y
///   2. write[x]  before read[i,y] =>  x <= y
///   3. read[i,x] before read[j,y] =>  x <= y
Verdict check_claims(const History& h);

inline constexpr std::size_t kLinearizabilityMaxOps = 20;

/// Searches for a sequential order extending real-time precedence in which
/// every read returns the latest preceding write. Pending writes may be
/// placed anywhere after their invocation or left out; pending reads are
/// ignored. Histories with more than `max_ops` relevant operations are
/// skipped.
Verdict check_linearizable(const History& h, std::size_t max_ops = kLinearizabilityMaxOps);

}  // namespace regsim

#endif  // REGSIM_HISTORY_HPP
