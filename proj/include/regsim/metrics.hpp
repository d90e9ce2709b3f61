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

#ifndef REGSIM_METRICS_HPP
#define REGSIM_METRICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "regsim/history.hpp"
#include "regsim/scenario.hpp"
#include "regsim/trace.hpp"

namespace regsim {

enum class ReadClass : std::uint8_t {
  /// Not concurrent with any write; the closest preceding write did not
  /// crash and started more than Δ before the read.
  wlf,
  /// The interfering write (closest preceding or concurrent) did not crash.
  interfering_no_crash,
  /// The writer crashed during the interfering write.
  interfering_writer_crash,
};

const char* to_string(ReadClass c);

struct ReadClassification {
  ReadClass cls = ReadClass::wlf;
  Ticks tau_r = 0;
  /// Start of the interfering (or closest preceding) write, if any.
  std::optional<Ticks> tau_w;
  std::optional<std::size_t> write_op;
  bool concurrent = false;
};

/// Classifies a read of `h` against window `delta` (Δ, or δ for rounds).
/// A write whose writer crashed before it responded ends at the crash time.
ReadClassification classify_read(const History& h, const OpRecord& read, Ticks delta);

enum class Comparison : std::uint8_t { at_most, exactly, informational };

const char* to_string(Comparison c);

struct BoundRule {
  Comparison cmp = Comparison::informational;
  /// Bound in units of the network's Δ or δ.
  Ticks units = 0;
};

/// The bound table: total over (algorithm, network, op kind, read class).
/// `local_read` marks a writer read served from its own copy.
BoundRule bound_for(Algorithm algorithm, NetKind net, OpKind kind, std::optional<ReadClass> cls,
                    bool local_read = false);

struct OpBound {
  std::size_t op = 0;
  ProcessId process;
  OpKind kind = OpKind::read;
  std::optional<ReadClass> cls;
  bool local_read = false;
  Ticks duration = 0;
  Ticks bound = 0;
  Comparison cmp = Comparison::informational;
  bool within_bound = true;
  std::size_t messages = 0;
};

struct BoundReport {
  Algorithm algorithm = Algorithm::teff_modified;
  NetKind network = NetKind::bounded_delay;
  Ticks unit = 0;
  /// Completed operations only; pending ones have no duration.
  std::vector<OpBound> ops;
  std::size_t pending = 0;
  std::size_t violations = 0;
  /// Largest duration seen per "kind[/class]" key.
  std::map<std::string, Ticks> max_duration;
  /// True in the async model, where no bound applies.
  bool informational = false;
};

/// Point-to-point sends attributed to operations (keyed by op id), with
/// unattributable sends under -1. WRITE(s) traffic is charged to the write
/// of s, READ/STATE(rsn) to the read of that rsn, and ABD traffic to the
/// operation owning its phase id.
std::map<std::int64_t, std::size_t> count_messages(const Trace& trace);

BoundReport assert_bounds(const Trace& trace);

nlohmann::ordered_json to_json(const BoundReport& r);

/// Key used in BoundReport::max_duration.
std::string duration_key(const OpBound& b);

}  // namespace regsim

#endif  // REGSIM_METRICS_HPP
