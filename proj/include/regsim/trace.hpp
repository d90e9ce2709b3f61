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

#ifndef REGSIM_TRACE_HPP
#define REGSIM_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "regsim/message.hpp"
#include "regsim/scenario.hpp"
#include "regsim/types.hpp"

namespace regsim {

enum class EventKind : std::uint8_t { invoke, respond, send, deliver, crash, round_start };

const char* to_string(EventKind k);

/// One record of a simulation history.
///
///   invoke   process, op, op_kind, tag, [value, seq for writes]
///   respond  process, op, op_kind, value, seq
///   send     process = sender, peer = destination, message
///   deliver  process = receiver, peer = sender, message
///   crash    process
///   round_start  (process 0)
struct TraceEvent {
  Ticks time = 0;
  EventKind kind = EventKind::invoke;
  ProcessId process;
  ProcessId peer;
  /// Index of the operation in the scenario's op list (invoke/respond only).
  std::int64_t op = -1;
  std::optional<OpKind> op_kind;
  SeqNo tag = 0;
  std::optional<RegValue> value;
  std::optional<SeqNo> seq;
  std::optional<Message> message;

  bool operator==(const TraceEvent&) const = default;
};

struct Trace {
  ScenarioConfig config;
  std::vector<TraceEvent> events;
};

/// Writes the trace as JSONL: a header line {"config": ...} followed by one
/// object per event, with a fixed field order.
void write_jsonl(std::ostream& out, const Trace& trace);
std::string to_jsonl(const Trace& trace);

/// Parses the output of write_jsonl. Throws ConfigError on malformed input.
Trace read_jsonl(std::istream& in);
Trace load_trace(const std::string& path);

}  // namespace regsim

#endif  // REGSIM_TRACE_HPP
