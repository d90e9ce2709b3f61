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

#ifndef REGSIM_PROTOCOL_HPP
#define REGSIM_PROTOCOL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "regsim/message.hpp"
#include "regsim/types.hpp"

namespace regsim {

struct ProtocolOptions {
  /// The writer answers its own reads from reg without messages.
  bool writer_local_read = false;
  /// Modified variant only: STATE(-, s, v) from a distinct sender counts
  /// toward the n-t knowledge quorum for s, like WRITE(s, v) does.
  bool quorum_counts_state = true;

  bool operator==(const ProtocolOptions&) const = default;
};

/// Output of any handler: the successor state, the messages to send (in
/// order), and the operation result if the handler completed one.
template <class State>
struct HandlerOutput {
  State state;
  std::vector<Outgoing> outgoing;
  std::optional<Completion> completion;
};

struct PendingRead {
  SeqNo rsn = 0;
  std::set<ProcessId> responders;
  SeqNo maxwsn = 0;

  bool operator==(const PendingRead&) const = default;
};

/// Local state of one process running the time-efficient register.
struct ReplicaState {
  ProcessId me;
  ProcessId writer{1};
  std::uint32_t n = 0;
  std::uint32_t t = 0;
  Variant variant = Variant::base;
  ProtocolOptions options;

  RegValue reg;
  SeqNo wsn = 0;
  SeqNo rsn = 0;
  /// Newest sequence number this process knows to be held by n-t processes.
  SeqNo swsn = 0;
  /// Value whose sequence number is swsn.
  RegValue res;

  /// Sequence numbers whose WRITE this process has already broadcast.
  std::set<SeqNo> forwarded;
  /// Sequence numbers for which the swsn update already fired.
  std::set<SeqNo> swsn_done;
  /// Distinct senders known to hold each sequence number above swsn.
  std::map<SeqNo, std::set<ProcessId>> know_count;

  std::optional<SeqNo> pending_write;
  std::optional<PendingRead> pending_read;

  std::uint32_t quorum() const { return n - t; }
  bool is_writer() const { return me == writer; }

  bool operator==(const ReplicaState&) const = default;
};

using TeffOutput = HandlerOutput<ReplicaState>;

/// Throws ProtocolError unless 1 <= me <= n, 1 <= writer <= n and 2t < n.
ReplicaState init(ProcessId me, std::uint32_t n, std::uint32_t t, Variant variant, RegValue initial,
                  ProcessId writer = ProcessId{1}, ProtocolOptions options = {});

TeffOutput begin_write(ReplicaState state, RegValue v);
TeffOutput begin_read(ReplicaState state);

TeffOutput on_write(ReplicaState state, SeqNo wsn, const RegValue& v, ProcessId sender);
TeffOutput on_read(ReplicaState state, SeqNo rsn, ProcessId sender);
TeffOutput on_state(ReplicaState state, SeqNo rsn, SeqNo wsn, const std::optional<RegValue>& v,
                    ProcessId sender);

/// Dispatches on the message tag. Non-register tags are ignored.
TeffOutput on_message(ReplicaState state, const Message& msg);

/// The read wait predicate: n-t STATE replies for the pending rsn, and
/// swsn >= maxwsn. Returns the value to return, or nothing if the read must
/// keep waiting (or no read is pending).
std::optional<Completion> check_read_complete(const ReplicaState& state);

/// True when delivering `msg` now, or at any later point, leaves the state
/// unchanged and emits nothing. Relies on wsn, swsn, rsn and the forwarded
/// set only ever growing.
bool is_inert(const ReplicaState& state, const Message& msg);

}  // namespace regsim

#endif  // REGSIM_PROTOCOL_HPP
