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

#include "regsim/history.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_set>

namespace regsim {

using nlohmann::ordered_json;

namespace {

std::string op_name(const OpRecord& op) {
  std::string s = std::string(to_string(op.kind)) + "#" + std::to_string(op.id) + "@p" + std::to_string(op.process.value);
  if (op.kind == OpKind::write || op.completed()) s += "[seq " + std::to_string(op.seq) + "]";
  return s;
}

void add(Verdict& v, std::string rule, std::vector<std::size_t> ops, std::string detail) {
  v.pass = false;
  v.violations.push_back(Violation{std::move(rule), std::move(ops), std::move(detail)});
}

}  // namespace

History history_from_trace(const Trace& trace) {
  History h;
  h.initial = trace.config.initial;
  std::map<std::int64_t, std::size_t> index;
  for (const auto& e : trace.events) {
    switch (e.kind) {
      case EventKind::invoke: {
        OpRecord op;
        op.id = static_cast<std::size_t>(e.op);
        op.process = e.process;
        op.kind = e.op_kind.value_or(OpKind::read);
        op.invoke = e.time;
        op.tag = e.tag;
        if (op.kind == OpKind::write) {
          op.value = e.value.value_or(RegValue::bottom());
          op.seq = e.seq.value_or(0);
        }
        index[e.op] = h.ops.size();
        h.ops.push_back(std::move(op));
        break;
      }
      case EventKind::respond: {
        auto it = index.find(e.op);
        if (it == index.end()) break;
        auto& op = h.ops[it->second];
        op.respond = e.time;
        if (op.kind == OpKind::read) {
          op.value = e.value.value_or(RegValue::bottom());
          op.seq = e.seq.value_or(0);
        }
        break;
      }
      case EventKind::crash:
        h.crashes.emplace(e.process, e.time);
        break;
      default:
        break;
    }
  }
  return h;
}

bool precedes(const OpRecord& a, const OpRecord& b) { return a.respond && *a.respond < b.invoke; }

ordered_json to_json(const Verdict& v) {
  ordered_json j;
  j["pass"] = v.pass;
  if (v.skipped) j["skipped"] = true;
  ordered_json vs = ordered_json::array();
  for (const auto& x : v.violations) {
    vs.push_back({{"rule", x.rule}, {"ops", x.ops}, {"detail", x.detail}});
  }
  j["violations"] = std::move(vs);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Verdict check_termination(const History& h) {
  Verdict v;
  for (const auto& op : h.ops) {
    if (op.completed()) continue;
    if (h.faulty(op.process)) {
      // Only the last operation of a faulty process may be left pending.
      const bool last = std::none_of(h.ops.begin(), h.ops.end(), [&](const OpRecord& o) {
        return o.process == op.process && o.invoke > op.invoke;
      });
      if (last) continue;
    }
    add(v, "termination", {op.id}, op_name(op) + " by a correct process never responded");
  }
  return v;
}

Verdict check_claims(const History& h) {
  Verdict v;
  std::map<SeqNo, const OpRecord*> writes;
  for (const auto& op : h.ops) {
    if (op.kind == OpKind::write) writes[op.seq] = &op;
  }

  for (const auto& r : h.ops) {
    if (r.kind != OpKind::read || !r.completed()) continue;
    if (r.seq == 0) {
      if (r.value != h.initial) add(v, "provenance", {r.id}, op_name(r) + " returned seq 0 with a non-initial value");
    } else if (auto it = writes.find(r.seq); it == writes.end()) {
      add(v, "provenance", {r.id}, op_name(r) + " returned a sequence number no write produced");
    } else if (it->second->value != r.value) {
      add(v, "provenance", {r.id, it->second->id}, op_name(r) + " returned a value differing from its write");
    }
  }

  for (const auto& a : h.ops) {
    for (const auto& b : h.ops) {
      if (!precedes(a, b)) continue;
      if (a.kind == OpKind::read && b.kind == OpKind::write && !(a.seq < b.seq)) {
        add(v, "claim1", {a.id, b.id}, op_name(a) + " precedes " + op_name(b) + " but reads from the future");
      }
      if (a.kind == OpKind::write && b.kind == OpKind::read && b.completed() && !(a.seq <= b.seq)) {
        add(v, "claim2", {a.id, b.id}, op_name(b) + " follows " + op_name(a) + " but returns an overwritten value");
      }
      if (a.kind == OpKind::read && b.kind == OpKind::read && b.completed() && !(a.seq <= b.seq)) {
        add(v, "claim3", {a.id, b.id}, "new/old inversion: " + op_name(a) + " precedes " + op_name(b));
      }
    }
  }
  return v;
}

Verdict check_linearizable(const History& h, std::size_t max_ops) {
  std::vector<const OpRecord*> ops;
  for (const auto& op : h.ops) {
    if (op.completed() || op.kind == OpKind::write) ops.push_back(&op);
  }
  Verdict v;
  if (ops.size() > max_ops || ops.size() > 31) {
    v.skipped = true;
    v.note = std::to_string(ops.size()) + " operations exceed the search guard of " + std::to_string(max_ops) +
             "; rely on check_claims";
    return v;
  }

  const std::size_t k = ops.size();
  std::uint32_t required = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (ops[i]->completed()) required |= 1u << i;
  }
  // before[i]: operations that must be linearized before ops[i].
  std::vector<std::uint32_t> before(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (precedes(*ops[j], *ops[i])) before[i] |= 1u << j;
    }
  }

  std::unordered_set<std::uint32_t> dead;
  // Depth-first search over linearized prefixes. The register's current
  // write is the highest-sequence write in the prefix, since single-writer
  // writes are totally ordered by real time.
  auto search = [&](auto&& self, std::uint32_t mask, const OpRecord* current) -> bool {
    if ((mask & required) == required) return true;
    if (dead.contains(mask)) return false;
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint32_t bit = 1u << i;
      if ((mask & bit) || (before[i] & ~mask)) continue;
      const OpRecord& op = *ops[i];
      if (op.kind == OpKind::read) {
        const SeqNo cur_seq = current ? current->seq : 0;
        const RegValue& cur_val = current ? current->value : h.initial;
        if (op.seq != cur_seq || op.value != cur_val) continue;
        if (self(self, mask | bit, current)) return true;
      } else {
        if (current && op.seq < current->seq) continue;
        if (self(self, mask | bit, &op)) return true;
      }
    }
    dead.insert(mask);
    return false;
  };

  if (!search(search, 0, nullptr)) add(v, "linearizability", {}, "no sequential order explains the history");
  return v;
}

}  // namespace regsim
