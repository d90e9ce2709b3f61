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

#include "regsim/abd.hpp"

#include <string>

namespace regsim {

namespace {

Message update(ProcessId from, SeqNo phase, SeqNo wsn, RegValue v) {
  return Message{MsgTag::abd_update, from, phase, wsn, std::move(v)};
}

Message reply(MsgTag tag, ProcessId from, SeqNo phase) { return Message{tag, from, phase, 0, std::nullopt}; }

}  // namespace

AbdReplicaState abd_init(ProcessId me, std::uint32_t n, std::uint32_t t, RegValue initial, ProcessId writer) {
  if (n < 1) throw ProtocolError("n must be at least 1");
  if (2 * t >= n) throw ProtocolError("model requires 2t < n (got n=" + std::to_string(n) + ", t=" +
                                      std::to_string(t) + ")");
  if (me.value < 1 || me.value > n) throw ProtocolError("process id out of range");
  if (writer.value < 1 || writer.value > n) throw ProtocolError("writer id out of range");
  AbdReplicaState s;
  s.me = me;
  s.writer = writer;
  s.n = n;
  s.t = t;
  s.reg = std::move(initial);
  return s;
}

AbdOutput abd_begin_write(AbdReplicaState state, RegValue v) {
  if (!state.is_writer()) throw ProtocolError("write invoked by a non-writer process");
  if (state.pending) throw ProtocolError("operation already pending");

  AbdOutput out{std::move(state), {}, std::nullopt};
  auto& s = out.state;
  s.opsn += 1;
  s.wsn += 1;
  s.reg = v;
  AbdPending p;
  p.kind = OpKind::write;
  p.collecting_acks = true;
  p.phase_id = abd_phase_id(s.opsn, 0);
  p.best_wsn = s.wsn;
  p.best_value = v;
  s.pending = std::move(p);
  out.outgoing.push_back(Outgoing{kBroadcast, update(s.me, s.pending->phase_id, s.wsn, std::move(v))});
  return out;
}

AbdOutput abd_begin_read(AbdReplicaState state) {
  if (state.pending) throw ProtocolError("operation already pending");

  AbdOutput out{std::move(state), {}, std::nullopt};
  auto& s = out.state;
  s.opsn += 1;
  AbdPending p;
  p.kind = OpKind::read;
  p.phase_id = abd_phase_id(s.opsn, 0);
  s.pending = std::move(p);
  out.outgoing.push_back(Outgoing{kBroadcast, reply(MsgTag::abd_query, s.me, s.pending->phase_id)});
  return out;
}

AbdOutput abd_on_message(AbdReplicaState state, const Message& msg) {
  AbdOutput out{std::move(state), {}, std::nullopt};
  auto& s = out.state;
  switch (msg.tag) {
    case MsgTag::abd_update: {
      if (msg.wsn > s.wsn) {
        s.wsn = msg.wsn;
        s.reg = msg.value.value_or(RegValue::bottom());
      }
      out.outgoing.push_back(Outgoing{msg.sender, reply(MsgTag::abd_ack, s.me, msg.rsn)});
      break;
    }
    case MsgTag::abd_query:
      out.outgoing.push_back(Outgoing{msg.sender, Message{MsgTag::abd_report, s.me, msg.rsn, s.wsn, s.reg}});
      break;
    case MsgTag::abd_report: {
      if (!s.pending || s.pending->collecting_acks || s.pending->phase_id != msg.rsn) break;
      auto& p = *s.pending;
      p.responders.insert(msg.sender);
      if (!p.best_wsn || msg.wsn > *p.best_wsn) {
        p.best_wsn = msg.wsn;
        p.best_value = msg.value.value_or(RegValue::bottom());
      }
      if (p.responders.size() >= s.quorum()) {
        p.collecting_acks = true;
        p.phase_id = abd_phase_id(s.opsn, 1);
        p.responders.clear();
        out.outgoing.push_back(Outgoing{kBroadcast, update(s.me, p.phase_id, *p.best_wsn, p.best_value)});
      }
      break;
    }
    case MsgTag::abd_ack: {
      if (!s.pending || !s.pending->collecting_acks || s.pending->phase_id != msg.rsn) break;
      auto& p = *s.pending;
      p.responders.insert(msg.sender);
      if (p.responders.size() >= s.quorum()) {
        out.completion = Completion{p.kind, p.best_value, *p.best_wsn};
        s.pending.reset();
      }
      break;
    }
    default:
      break;
  }
  return out;
}

bool abd_is_inert(const AbdReplicaState& state, const Message& msg) {
  if (msg.tag != MsgTag::abd_ack && msg.tag != MsgTag::abd_report) return false;
  if (state.pending && state.pending->phase_id == msg.rsn) return false;
  return msg.rsn <= abd_phase_id(state.opsn, 1);
}

}  // namespace regsim
