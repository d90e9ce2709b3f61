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

#ifndef REGSIM_REPLICA_HPP
#define REGSIM_REPLICA_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "regsim/abd.hpp"
#include "regsim/protocol.hpp"

namespace regsim {

/// One process of whichever algorithm a scenario runs.
using Replica = std::variant<ReplicaState, AbdReplicaState>;

struct Step {
  std::vector<Outgoing> outgoing;
  std::optional<Completion> completion;
  /// For invocations: the protocol's identifier for the new operation (wsn
  /// for writes, rsn for time-efficient reads, opsn for ABD operations).
  SeqNo tag = 0;
  /// For write invocations: the sequence number being written.
  SeqNo write_seq = 0;
};

Replica make_replica(Algorithm algorithm, ProcessId me, std::uint32_t n, std::uint32_t t, const RegValue& initial,
                     ProcessId writer, const ProtocolOptions& options);

Step invoke(Replica& r, OpKind kind, const RegValue& v);
Step deliver(Replica& r, const Message& msg);
bool has_pending_op(const Replica& r);

/// Delivering `msg` to `r` is a no-op now and forever.
bool is_inert(const Replica& r, const Message& msg);

/// Appends a canonical byte serialization of the replica to `out`; equal
/// states produce equal bytes.
void serialize(const Replica& r, std::string& out);

}  // namespace regsim

#endif  // REGSIM_REPLICA_HPP
