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

#include "regsim/protocol.hpp"

#include <algorithm>
#include <string>

namespace regsim {

namespace {

// Lines 07..11: adopt a newer value, forward the first time a sequence number
// is seen, and advance swsn once n-t distinct senders are known to hold it.
void absorb_write(ReplicaState& s, SeqNo wsn, const RegValue& v, ProcessId sender, bool counts,
                  std::vector<Outgoing>& out) {
  // Every process starts out holding sequence number 0.
  if (wsn == 0) return;

  if (wsn > s.wsn) {
    s.reg = v;
    s.wsn = wsn;
  }
  if (!s.forwarded.contains(wsn)) {
    s.forwarded.insert(wsn);
    out.push_back(Outgoing{kBroadcast, make_write(s.me, wsn, v)});
  }
  if (!counts || wsn <= s.swsn) return;

  auto& senders = s.know_count[wsn];
  senders.insert(sender);
  if (senders.size() >= s.quorum() && !s.swsn_done.contains(wsn)) {
    s.swsn = wsn;
    s.res = v;
    s.swsn_done.insert(wsn);
    s.know_count.erase(s.know_count.begin(), s.know_count.upper_bound(s.swsn));
  }
}

// Re-evaluates both wait predicates after any event that may have moved swsn
// or the read bookkeeping.
void settle(TeffOutput& out) {
  auto& s = out.state;
  if (s.pending_write && s.swsn >= *s.pending_write) {
    out.completion = Completion{OpKind::write, s.reg, *s.pending_write};
    s.pending_write.reset();
  }
  if (auto done = check_read_complete(s)) {
    out.completion = std::move(done);
    s.pending_read.reset();
  }
}

}  // namespace

ReplicaState init(ProcessId me, std::uint32_t n, std::uint32_t t, Variant variant, RegValue initial,
                  ProcessId writer, ProtocolOptions options) {
  if (n < 1) throw ProtocolError("n must be at least 1");
  if (2 * t >= n) throw ProtocolError("model requires 2t < n (got n=" + std::to_string(n) + ", t=" +
                                      std::to_string(t) + ")");
  if (me.value < 1 || me.value > n) throw ProtocolError("process id out of range");
  if (writer.value < 1 || writer.value > n) throw ProtocolError("writer id out of range");

  ReplicaState s;
  s.me = me;
  s.writer = writer;
  s.n = n;
  s.t = t;
  s.variant = variant;
  s.options = options;
  s.reg = initial;
  s.res = std::move(initial);
  return s;
}

TeffOutput begin_write(ReplicaState state, RegValue v) {
  if (!state.is_writer()) throw ProtocolError("write invoked by a non-writer process");
  if (state.pending_write || state.pending_read) throw ProtocolError("operation already pending");

  TeffOutput out{std::move(state), {}, std::nullopt};
  auto& s = out.state;
  s.wsn += 1;
  s.reg = v;
  s.forwarded.insert(s.wsn);
  s.pending_write = s.wsn;
  out.outgoing.push_back(Outgoing{kBroadcast, make_write(s.me, s.wsn, std::move(v))});
  return out;
}

TeffOutput begin_read(ReplicaState state) {
  if (state.pending_read || state.pending_write) throw ProtocolError("operation already pending");

  TeffOutput out{std::move(state), {}, std::nullopt};
  auto& s = out.state;
  if (s.is_writer() && s.options.writer_local_read) {
    out.completion = Completion{OpKind::read, s.reg, s.wsn};
    return out;
  }
  s.rsn += 1;
  s.pending_read = PendingRead{s.rsn, {}, 0};
  out.outgoing.push_back(Outgoing{kBroadcast, make_read(s.me, s.rsn)});
  return out;
}

TeffOutput on_write(ReplicaState state, SeqNo wsn, const RegValue& v, ProcessId sender) {
  TeffOutput out{std::move(state), {}, std::nullopt};
  absorb_write(out.state, wsn, v, sender, true, out.outgoing);
  settle(out);
  return out;
}

TeffOutput on_read(ReplicaState state, SeqNo rsn, ProcessId sender) {
  TeffOutput out{std::move(state), {}, std::nullopt};
  const auto& s = out.state;
  std::optional<RegValue> v;
  if (s.variant == Variant::modified) v = s.reg;
  out.outgoing.push_back(Outgoing{sender, make_state(s.me, rsn, s.wsn, std::move(v))});
  return out;
}

TeffOutput on_state(ReplicaState state, SeqNo rsn, SeqNo wsn, const std::optional<RegValue>& v,
                    ProcessId sender) {
  TeffOutput out{std::move(state), {}, std::nullopt};
  auto& s = out.state;
  if (s.variant == Variant::modified && v) {
    absorb_write(s, wsn, *v, sender, s.options.quorum_counts_state, out.outgoing);
  }
  if (s.pending_read && s.pending_read->rsn == rsn) {
    s.pending_read->responders.insert(sender);
    s.pending_read->maxwsn = std::max(s.pending_read->maxwsn, wsn);
  }
  settle(out);
  return out;
}

TeffOutput on_message(ReplicaState state, const Message& msg) {
  switch (msg.tag) {
    case MsgTag::write:
      return on_write(std::move(state), msg.wsn, msg.value.value_or(RegValue::bottom()), msg.sender);
    case MsgTag::read:
      return on_read(std::move(state), msg.rsn, msg.sender);
    case MsgTag::state:
      return on_state(std::move(state), msg.rsn, msg.wsn, msg.value, msg.sender);
    default:
      return TeffOutput{std::move(state), {}, std::nullopt};
  }
}

std::optional<Completion> check_read_complete(const ReplicaState& state) {
  if (!state.pending_read) return std::nullopt;
  const auto& pr = *state.pending_read;
  if (pr.responders.size() >= state.quorum() && state.swsn >= pr.maxwsn) {
    return Completion{OpKind::read, state.res, state.swsn};
  }
  return std::nullopt;
}

namespace {

bool write_path_inert(const ReplicaState& s, SeqNo wsn) {
  return wsn == 0 || (wsn <= s.swsn && wsn <= s.wsn && s.forwarded.contains(wsn));
}

}  // namespace

bool is_inert(const ReplicaState& state, const Message& msg) {
  switch (msg.tag) {
    case MsgTag::write:
      return write_path_inert(state, msg.wsn);
    case MsgTag::state: {
      const bool current = state.pending_read && state.pending_read->rsn == msg.rsn;
      if (current || msg.rsn > state.rsn) return false;
      return state.variant == Variant::base || !msg.value || write_path_inert(state, msg.wsn);
    }
    case MsgTag::read:
      return false;
    default:
      return true;
  }
}

}  // namespace regsim
