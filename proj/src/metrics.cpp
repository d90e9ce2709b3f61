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

#include "regsim/metrics.hpp"

#include <algorithm>
#include <limits>

namespace regsim {

using nlohmann::ordered_json;

namespace {

constexpr Ticks kForever = std::numeric_limits<Ticks>::max();

bool crashed_write(const History& h, const OpRecord& w) { return !w.completed() && h.faulty(w.process); }

Ticks end_of(const History& h, const OpRecord& w) {
  if (w.respond) return *w.respond;
  if (auto it = h.crashes.find(w.process); it != h.crashes.end()) return it->second;
  return kForever;
}

}  // namespace

const char* to_string(ReadClass c) {
  switch (c) {
    case ReadClass::wlf: return "wlf";
    case ReadClass::interfering_no_crash: return "interfering_no_crash";
    case ReadClass::interfering_writer_crash: return "interfering_writer_crash";
  }
  return "?";
}

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::at_most: return "<=";
    case Comparison::exactly: return "==";
    case Comparison::informational: return "info";
  }
  return "?";
}

ReadClassification classify_read(const History& h, const OpRecord& read, Ticks delta) {
  ReadClassification out;
  out.tau_r = read.invoke;
  const Ticks rho_r = read.respond.value_or(kForever);

  const OpRecord* concurrent = nullptr;
  const OpRecord* preceding = nullptr;
  for (const auto& w : h.ops) {
    if (w.kind != OpKind::write) continue;
    const Ticks end = end_of(h, w);
    if (end < out.tau_r) {
      if (!preceding || w.invoke > preceding->invoke) preceding = &w;
    } else if (w.invoke <= rho_r) {
      if (!concurrent || w.invoke > concurrent->invoke) concurrent = &w;
    }
  }

  if (concurrent) {
    out.concurrent = true;
    out.tau_w = concurrent->invoke;
    out.write_op = concurrent->id;
    out.cls = crashed_write(h, *concurrent) ? ReadClass::interfering_writer_crash : ReadClass::interfering_no_crash;
    return out;
  }
  if (!preceding) return out;

  out.tau_w = preceding->invoke;
  out.write_op = preceding->id;
  if (crashed_write(h, *preceding)) {
    // A crashed write that started long before the read is neither
    // write-latency-free nor interfering; bound it as the crash case.
    out.cls = ReadClass::interfering_writer_crash;
  } else if (preceding->invoke < out.tau_r - delta) {
    out.cls = ReadClass::wlf;
  } else {
    out.cls = ReadClass::interfering_no_crash;
  }
  return out;
}

BoundRule bound_for(Algorithm algorithm, NetKind net, OpKind kind, std::optional<ReadClass> cls, bool local_read) {
  if (net == NetKind::async) return {Comparison::informational, 0};
  if (local_read) return {Comparison::exactly, 0};

  if (algorithm == Algorithm::abd) {
    const Ticks units = kind == OpKind::write ? 2 : 4;
    return {net == NetKind::round_sync ? Comparison::exactly : Comparison::at_most, units};
  }
  if (kind == OpKind::write) {
    return {net == NetKind::round_sync ? Comparison::exactly : Comparison::at_most, 2};
  }

  const ReadClass c = cls.value_or(ReadClass::wlf);
  if (net == NetKind::round_sync) {
    if (c == ReadClass::interfering_writer_crash) return {Comparison::at_most, 3};
    return {Comparison::exactly, 2};
  }
  switch (c) {
    case ReadClass::wlf: return {Comparison::at_most, 2};
    case ReadClass::interfering_no_crash: return {Comparison::at_most, 3};
    case ReadClass::interfering_writer_crash:
      // The base algorithm has no constant bound here: knowledge of the
      // crashed write may need t+1 forwarding hops.
      if (algorithm == Algorithm::teff) return {Comparison::informational, 0};
      return {Comparison::at_most, 4};
  }
  return {Comparison::informational, 0};
}

std::map<std::int64_t, std::size_t> count_messages(const Trace& trace) {
  const History h = history_from_trace(trace);
  std::map<SeqNo, std::int64_t> write_by_seq;
  std::map<std::pair<ProcessId, SeqNo>, std::int64_t> op_by_tag;
  for (const auto& op : h.ops) {
    if (trace.config.algorithm != Algorithm::abd && op.kind == OpKind::write) {
      write_by_seq[op.seq] = static_cast<std::int64_t>(op.id);
    } else if (op.tag != 0) {
      op_by_tag[{op.process, op.tag}] = static_cast<std::int64_t>(op.id);
    }
  }

  std::map<std::int64_t, std::size_t> counts;
  for (const auto& e : trace.events) {
    if (e.kind != EventKind::send || !e.message) continue;
    const Message& m = *e.message;
    std::int64_t owner = -1;
    auto by_tag = [&](ProcessId p, SeqNo tag) {
      auto it = op_by_tag.find({p, tag});
      return it == op_by_tag.end() ? std::int64_t{-1} : it->second;
    };
    switch (m.tag) {
      case MsgTag::write:
        if (auto it = write_by_seq.find(m.wsn); it != write_by_seq.end()) owner = it->second;
        break;
      case MsgTag::read: owner = by_tag(e.process, m.rsn); break;
      case MsgTag::state: owner = by_tag(e.peer, m.rsn); break;
      case MsgTag::abd_update:
      case MsgTag::abd_query: owner = by_tag(e.process, m.rsn / 2); break;
      case MsgTag::abd_ack:
      case MsgTag::abd_report: owner = by_tag(e.peer, m.rsn / 2); break;
    }
    ++counts[owner];
  }
  return counts;
}

std::string duration_key(const OpBound& b) {
  if (b.kind == OpKind::write) return "write";
  if (b.local_read) return "read/local";
  return std::string("read/") + to_string(b.cls.value_or(ReadClass::wlf));
}

BoundReport assert_bounds(const Trace& trace) {
  const auto& cfg = trace.config;
  const History h = history_from_trace(trace);
  const auto messages = count_messages(trace);

  BoundReport r;
  r.algorithm = cfg.algorithm;
  r.network = cfg.network.kind;
  r.unit = cfg.network.bound;
  r.informational = cfg.network.kind == NetKind::async;

  for (const auto& op : h.ops) {
    if (!op.completed()) {
      ++r.pending;
      continue;
    }
    OpBound b;
    b.op = op.id;
    b.process = op.process;
    b.kind = op.kind;
    b.duration = *op.respond - op.invoke;
    b.local_read = op.kind == OpKind::read && cfg.algorithm != Algorithm::abd && cfg.options.writer_local_read &&
                   op.process == cfg.writer;
    if (op.kind == OpKind::read) b.cls = classify_read(h, op, cfg.network.bound).cls;
    const BoundRule rule = bound_for(cfg.algorithm, cfg.network.kind, op.kind, b.cls, b.local_read);
    b.cmp = rule.cmp;
    b.bound = rule.units * cfg.network.bound;
    switch (b.cmp) {
      case Comparison::at_most: b.within_bound = b.duration <= b.bound; break;
      case Comparison::exactly: b.within_bound = b.duration == b.bound; break;
      case Comparison::informational: b.within_bound = true; break;
    }
    if (auto it = messages.find(static_cast<std::int64_t>(op.id)); it != messages.end()) b.messages = it->second;
    if (!b.within_bound) ++r.violations;
    auto& mx = r.max_duration[duration_key(b)];
    mx = std::max(mx, b.duration);
    r.ops.push_back(b);
  }
  return r;
}

ordered_json to_json(const BoundReport& r) {
  ordered_json j;
  j["algorithm"] = to_string(r.algorithm);
  j["network"] = to_string(r.network);
  j["unit"] = r.unit;
  j["informational"] = r.informational;
  j["violations"] = r.violations;
  j["pending"] = r.pending;
  ordered_json mx = ordered_json::object();
  for (const auto& [k, v] : r.max_duration) mx[k] = v;
  j["max_duration"] = std::move(mx);
  ordered_json ops = ordered_json::array();
  for (const auto& b : r.ops) {
    ordered_json o;
    o["op"] = b.op;
    o["process"] = b.process.value;
    o["kind"] = to_string(b.kind);
    if (b.kind == OpKind::read) o["class"] = b.local_read ? "local" : to_string(b.cls.value_or(ReadClass::wlf));
    o["duration"] = b.duration;
    o["cmp"] = to_string(b.cmp);
    o["bound"] = b.bound;
    o["within_bound"] = b.within_bound;
    o["messages"] = b.messages;
    ops.push_back(std::move(o));
  }
  j["ops"] = std::move(ops);
  return j;
}

}  // namespace regsim
