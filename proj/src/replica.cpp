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

#include "regsim/replica.hpp"

namespace regsim {

namespace {

template <class State>
Step to_step(HandlerOutput<State>&& out, State& into) {
  into = std::move(out.state);
  return Step{std::move(out.outgoing), std::move(out.completion), 0, 0};
}

void put(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void put(std::string& out, const RegValue& v) {
  if (v.is_bottom()) {
    put(out, ~std::uint64_t{0});
    return;
  }
  put(out, v.bytes().size());
  out += v.bytes();
}

void put(std::string& out, const std::set<ProcessId>& ps) {
  put(out, ps.size());
  for (auto p : ps) put(out, p.value);
}

void put(std::string& out, const std::set<SeqNo>& ss) {
  put(out, ss.size());
  for (auto s : ss) put(out, s);
}

}  // namespace

Replica make_replica(Algorithm algorithm, ProcessId me, std::uint32_t n, std::uint32_t t, const RegValue& initial,
                     ProcessId writer, const ProtocolOptions& options) {
  switch (algorithm) {
    case Algorithm::teff:
      return init(me, n, t, Variant::base, initial, writer, options);
    case Algorithm::teff_modified:
      return init(me, n, t, Variant::modified, initial, writer, options);
    case Algorithm::abd:
      return abd_init(me, n, t, initial, writer);
  }
  throw ProtocolError("unknown algorithm");
}

Step invoke(Replica& r, OpKind kind, const RegValue& v) {
  if (auto* s = std::get_if<ReplicaState>(&r)) {
    if (kind == OpKind::write) {
      Step st = to_step(begin_write(std::move(*s), v), *s);
      st.tag = st.write_seq = s->wsn;
      return st;
    }
    const SeqNo before = s->rsn;
    Step st = to_step(begin_read(std::move(*s)), *s);
    st.tag = s->rsn != before ? s->rsn : 0;
    return st;
  }
  auto& a = std::get<AbdReplicaState>(r);
  Step st = kind == OpKind::write ? to_step(abd_begin_write(std::move(a), v), a)
                                  : to_step(abd_begin_read(std::move(a)), a);
  st.tag = a.opsn;
  if (kind == OpKind::write) st.write_seq = a.wsn;
  return st;
}

Step deliver(Replica& r, const Message& msg) {
  if (auto* s = std::get_if<ReplicaState>(&r)) return to_step(on_message(std::move(*s), msg), *s);
  auto& a = std::get<AbdReplicaState>(r);
  return to_step(abd_on_message(std::move(a), msg), a);
}

bool has_pending_op(const Replica& r) {
  if (const auto* s = std::get_if<ReplicaState>(&r)) return s->pending_write || s->pending_read;
  return std::get<AbdReplicaState>(r).pending.has_value();
}

bool is_inert(const Replica& r, const Message& msg) {
  if (const auto* s = std::get_if<ReplicaState>(&r)) return is_inert(*s, msg);
  return abd_is_inert(std::get<AbdReplicaState>(r), msg);
}

void serialize(const Replica& r, std::string& out) {
  if (const auto* s = std::get_if<ReplicaState>(&r)) {
    out.push_back('T');
    put(out, s->reg);
    put(out, s->wsn);
    put(out, s->rsn);
    put(out, s->swsn);
    put(out, s->res);
    put(out, s->forwarded);
    put(out, s->swsn_done);
    put(out, s->know_count.size());
    for (const auto& [seq, senders] : s->know_count) {
      put(out, seq);
      put(out, senders);
    }
    put(out, s->pending_write ? *s->pending_write + 1 : 0);
    if (s->pending_read) {
      out.push_back('R');
      put(out, s->pending_read->rsn);
      put(out, s->pending_read->responders);
      put(out, s->pending_read->maxwsn);
    } else {
      out.push_back('-');
    }
    return;
  }
  const auto& a = std::get<AbdReplicaState>(r);
  out.push_back('A');
  put(out, a.reg);
  put(out, a.wsn);
  put(out, a.opsn);
  if (a.pending) {
    const auto& p = *a.pending;
    out.push_back(p.kind == OpKind::write ? 'w' : 'r');
    out.push_back(p.collecting_acks ? '1' : '0');
    put(out, p.phase_id);
    put(out, p.responders);
    put(out, p.best_wsn ? *p.best_wsn + 1 : 0);
    put(out, p.best_value);
  } else {
    out.push_back('-');
  }
}

}  // namespace regsim
