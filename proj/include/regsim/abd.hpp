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

#ifndef REGSIM_ABD_HPP
#define REGSIM_ABD_HPP

#include <cstdint>
#include <optional>
#include <set>

#include "regsim/message.hpp"
#include "regsim/protocol.hpp"
#include "regsim/types.hpp"

namespace regsim {

/// In-flight ABD operation. A write has one phase (update/ack); a read has a
/// query/report phase followed by an unconditional write-back (update/ack).
struct AbdPending {
  OpKind kind = OpKind::read;
  bool collecting_acks = false;
  SeqNo phase_id = 0;
  std::set<ProcessId> responders;
  std::optional<SeqNo> best_wsn;
  RegValue best_value;

  bool operator==(const AbdPending&) const = default;
};

struct AbdReplicaState {
  ProcessId me;
  ProcessId writer{1};
  std::uint32_t n = 0;
  std::uint32_t t = 0;
  RegValue reg;
  SeqNo wsn = 0;
  /// Operations invoked so far by this process. Phase k of operation m uses
  /// phase id 2m + k, so phase_id / 2 recovers the operation.
  SeqNo opsn = 0;
  std::optional<AbdPending> pending;

  std::uint32_t quorum() const { return n - t; }
  bool is_writer() const { return me == writer; }

  bool operator==(const AbdReplicaState&) const = default;
};

using AbdOutput = HandlerOutput<AbdReplicaState>;

AbdReplicaState abd_init(ProcessId me, std::uint32_t n, std::uint32_t t, RegValue initial,
                         ProcessId writer = ProcessId{1});

AbdOutput abd_begin_write(AbdReplicaState state, RegValue v);
AbdOutput abd_begin_read(AbdReplicaState state);
AbdOutput abd_on_message(AbdReplicaState state, const Message& msg);

inline SeqNo abd_phase_id(SeqNo opsn, unsigned phase) { return 2 * opsn + phase; }

/// True when `msg` can never again change the state or trigger a send:
/// replies for a phase that is over.
bool abd_is_inert(const AbdReplicaState& state, const Message& msg);

}  // namespace regsim

#endif  // REGSIM_ABD_HPP
