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

#include "regsim/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace regsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(where + ": bad field '" + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return get<T>(j, key, where);
}

RegValue value_from_json(const json& j) {
  if (j.is_null()) return RegValue::bottom();
  if (!j.is_string()) fail("register values must be strings or null");
  return RegValue(j.get<std::string>());
}

ordered_json value_to_json(const RegValue& v) {
  if (v.is_bottom()) return nullptr;
  return v.bytes();
}

DeliverSet deliver_set_from_json(const json& j, const std::string& where) {
  if (!j.contains("deliver_to")) fail(where + ": missing field 'deliver_to'");
  const auto& d = j.at("deliver_to");
  DeliverSet s;
  if (d.is_string() && d.get<std::string>() == "random") {
    s.random = true;
    return s;
  }
  if (!d.is_array()) fail(where + ": 'deliver_to' must be an array of process ids or \"random\"");
  for (const auto& p : d) s.members.push_back(ProcessId{p.get<std::uint32_t>()});
  return s;
}

ordered_json deliver_set_to_json(const DeliverSet& s) {
  if (s.random) return "random";
  ordered_json arr = ordered_json::array();
  for (auto p : s.members) arr.push_back(p.value);
  return arr;
}

const char* bound_key(NetKind k) {
  switch (k) {
    case NetKind::async: return "Dmax";
    case NetKind::bounded_delay: return "Delta";
    case NetKind::round_sync: return "delta";
  }
  return "?";
}

NetKind net_kind_from_string(const std::string& s) {
  if (s == "async") return NetKind::async;
  if (s == "bounded_delay") return NetKind::bounded_delay;
  if (s == "round_sync") return NetKind::round_sync;
  fail("unknown network kind: " + s);
}

DelayMode delay_mode_from_string(const std::string& s) {
  if (s == "uniform") return DelayMode::uniform;
  if (s == "max") return DelayMode::max;
  if (s == "extremes") return DelayMode::extremes;
  if (s == "increasing") return DelayMode::increasing;
  fail("unknown delay mode: " + s);
}

bool in_range(ProcessId p, std::uint32_t n) { return p.value >= 1 && p.value <= n; }

}  // namespace

const char* to_string(NetKind k) {
  switch (k) {
    case NetKind::async: return "async";
    case NetKind::bounded_delay: return "bounded_delay";
    case NetKind::round_sync: return "round_sync";
  }
  return "?";
}

const char* to_string(DelayMode m) {
  switch (m) {
    case DelayMode::uniform: return "uniform";
    case DelayMode::max: return "max";
    case DelayMode::extremes: return "extremes";
    case DelayMode::increasing: return "increasing";
  }
  return "?";
}

bool DelayRule::matches(ProcessId f, ProcessId d, const Message& m) const {
  if (from && *from != f) return false;
  if (to && *to != d) return false;
  if (tag && *tag != m.tag) return false;
  if (wsn && *wsn != m.wsn) return false;
  return true;
}

void validate(const ScenarioConfig& c) {
  if (c.n < 1) fail("n must be at least 1");
  if (2 * c.t >= c.n) fail("model requires 2t < n (got n=" + std::to_string(c.n) + ", t=" + std::to_string(c.t) + ")");
  if (!in_range(c.writer, c.n)) fail("writer out of range");
  if (c.network.bound < 1) fail(std::string("network ") + bound_key(c.network.kind) + " must be at least 1");
  if (c.network.mode == DelayMode::increasing && c.network.kind != NetKind::async) {
    fail("increasing delays are only meaningful in the async model");
  }
  if (c.network.kind == NetKind::round_sync && !c.network.schedule.empty()) {
    fail("round_sync delivers every message after exactly delta; delay rules are not allowed");
  }
  for (const auto& r : c.network.schedule) {
    if (r.delay < 1) fail("delay rules must give a delay of at least 1 tick");
    if (c.network.kind == NetKind::bounded_delay && r.delay > c.network.bound) {
      fail("delay rule exceeds Delta=" + std::to_string(c.network.bound));
    }
    if ((r.from && !in_range(*r.from, c.n)) || (r.to && !in_range(*r.to, c.n))) fail("delay rule process out of range");
  }

  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const auto& op = c.ops[i];
    const std::string where = "ops[" + std::to_string(i) + "]";
    if (!in_range(op.process, c.n)) fail(where + ": process out of range");
    if (op.time < 0) fail(where + ": negative time");
    if (op.kind == OpKind::write) {
      if (op.process != c.writer) fail(where + ": write by non-writer process p" + std::to_string(op.process.value));
      if (op.value.is_bottom()) fail(where + ": the initial value cannot be written");
    }
    if (c.network.kind == NetKind::round_sync && op.time % c.network.bound != 0) {
      fail(where + ": round_sync operations must start on a round boundary (multiple of delta)");
    }
  }

  if (c.crashes.size() > c.t) fail("crash schedule has more than t=" + std::to_string(c.t) + " crashes");
  std::set<ProcessId> seen;
  for (std::size_t i = 0; i < c.crashes.size(); ++i) {
    const auto& cr = c.crashes[i];
    const std::string where = "crashes[" + std::to_string(i) + "]";
    if (!in_range(cr.process, c.n)) fail(where + ": process out of range");
    if (!seen.insert(cr.process).second) fail(where + ": process crashes twice");
    auto check_set = [&](const DeliverSet& s) {
      for (auto p : s.members) {
        if (!in_range(p, c.n)) fail(where + ": deliver_to process out of range");
      }
    };
    if (const auto* at = std::get_if<CrashAt>(&cr.trigger)) {
      if (at->time < 0) fail(where + ": negative crash time");
    } else if (const auto* d = std::get_if<CrashDuringOp>(&cr.trigger)) {
      if (d->op_index >= c.ops.size()) fail(where + ": during_op index out of range");
      if (c.ops[d->op_index].process != cr.process) fail(where + ": during_op names another process's operation");
      check_set(d->deliver_to);
    } else {
      const auto& f = std::get<CrashDuringForward>(cr.trigger);
      if (f.wsn < 1) fail(where + ": during_forward needs a write sequence number >= 1");
      check_set(f.deliver_to);
    }
  }
}

ScenarioConfig scenario_from_json(const json& j) {
  if (!j.is_object()) fail("scenario must be a JSON object");
  ScenarioConfig c;
  c.n = get<std::uint32_t>(j, "n", "scenario");
  c.t = get<std::uint32_t>(j, "t", "scenario");
  c.writer = ProcessId{get_or<std::uint32_t>(j, "writer", 1, "scenario")};
  try {
    c.algorithm = algorithm_from_string(get<std::string>(j, "algorithm", "scenario"));
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  c.seed = get_or<std::uint64_t>(j, "seed", 0, "scenario");
  if (j.contains("initial")) c.initial = value_from_json(j.at("initial"));

  if (!j.contains("network")) fail("scenario: missing field 'network'");
  const auto& nj = j.at("network");
  c.network.kind = net_kind_from_string(get<std::string>(nj, "kind", "network"));
  c.network.bound = get<Ticks>(nj, bound_key(c.network.kind), "network");
  c.network.mode = delay_mode_from_string(get_or<std::string>(nj, "delays", "uniform", "network"));
  if (nj.contains("schedule")) {
    for (const auto& rj : nj.at("schedule")) {
      DelayRule r;
      if (rj.contains("from")) r.from = ProcessId{rj.at("from").get<std::uint32_t>()};
      if (rj.contains("to")) r.to = ProcessId{rj.at("to").get<std::uint32_t>()};
      if (rj.contains("tag")) {
        try {
          r.tag = msg_tag_from_string(rj.at("tag").get<std::string>());
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
      }
      if (rj.contains("wsn")) r.wsn = rj.at("wsn").get<SeqNo>();
      r.delay = get<Ticks>(rj, "delay", "network.schedule");
      c.network.schedule.push_back(r);
    }
  }

  if (j.contains("crashes")) {
    for (const auto& cj : j.at("crashes")) {
      CrashSpec cr;
      cr.process = ProcessId{get<std::uint32_t>(cj, "process", "crash")};
      if (cj.contains("at")) {
        cr.trigger = CrashAt{get<Ticks>(cj, "at", "crash")};
      } else if (cj.contains("during_op")) {
        cr.trigger = CrashDuringOp{get<std::size_t>(cj, "during_op", "crash"), deliver_set_from_json(cj, "crash")};
      } else if (cj.contains("during_forward")) {
        cr.trigger = CrashDuringForward{get<SeqNo>(cj, "during_forward", "crash"), deliver_set_from_json(cj, "crash")};
      } else {
        fail("crash: needs one of 'at', 'during_op', 'during_forward'");
      }
      c.crashes.push_back(std::move(cr));
    }
  }

  if (j.contains("ops")) {
    for (const auto& oj : j.at("ops")) {
      OpSpec op;
      op.time = get<Ticks>(oj, "time", "op");
      op.process = ProcessId{get<std::uint32_t>(oj, "process", "op")};
      const auto kind = get<std::string>(oj, "op", "op");
      if (kind == "write") {
        op.kind = OpKind::write;
        if (!oj.contains("value")) fail("op: write needs a 'value'");
        op.value = value_from_json(oj.at("value"));
      } else if (kind == "read") {
        op.kind = OpKind::read;
      } else {
        fail("op: unknown operation '" + kind + "'");
      }
      c.ops.push_back(std::move(op));
    }
  }

  if (j.contains("options")) {
    const auto& oj = j.at("options");
    c.options.writer_local_read = get_or<bool>(oj, "writer_local_read", false, "options");
    c.options.quorum_counts_state = get_or<bool>(oj, "quorum_counts_state", true, "options");
  }

  validate(c);
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open scenario file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const json::exception& e) {
    fail(path + ": " + e.what());
  }
}

ordered_json to_json(const ScenarioConfig& c) {
  ordered_json j;
  j["n"] = c.n;
  j["t"] = c.t;
  j["writer"] = c.writer.value;
  j["algorithm"] = to_string(c.algorithm);

  ordered_json nj;
  nj["kind"] = to_string(c.network.kind);
  nj[bound_key(c.network.kind)] = c.network.bound;
  nj["delays"] = to_string(c.network.mode);
  if (!c.network.schedule.empty()) {
    ordered_json rules = ordered_json::array();
    for (const auto& r : c.network.schedule) {
      ordered_json rj;
      if (r.from) rj["from"] = r.from->value;
      if (r.to) rj["to"] = r.to->value;
      if (r.tag) rj["tag"] = to_string(*r.tag);
      if (r.wsn) rj["wsn"] = *r.wsn;
      rj["delay"] = r.delay;
      rules.push_back(std::move(rj));
    }
    nj["schedule"] = std::move(rules);
  }
  j["network"] = std::move(nj);

  ordered_json crashes = ordered_json::array();
  for (const auto& cr : c.crashes) {
    ordered_json cj;
    cj["process"] = cr.process.value;
    if (const auto* at = std::get_if<CrashAt>(&cr.trigger)) {
      cj["at"] = at->time;
    } else if (const auto* d = std::get_if<CrashDuringOp>(&cr.trigger)) {
      cj["during_op"] = d->op_index;
      cj["deliver_to"] = deliver_set_to_json(d->deliver_to);
    } else {
      const auto& f = std::get<CrashDuringForward>(cr.trigger);
      cj["during_forward"] = f.wsn;
      cj["deliver_to"] = deliver_set_to_json(f.deliver_to);
    }
    crashes.push_back(std::move(cj));
  }
  j["crashes"] = std::move(crashes);

  ordered_json ops = ordered_json::array();
  for (const auto& op : c.ops) {
    ordered_json oj;
    oj["time"] = op.time;
    oj["process"] = op.process.value;
    oj["op"] = to_string(op.kind);
    if (op.kind == OpKind::write) oj["value"] = value_to_json(op.value);
    ops.push_back(std::move(oj));
  }
  j["ops"] = std::move(ops);
  j["seed"] = c.seed;
  j["options"] = {{"writer_local_read", c.options.writer_local_read},
                  {"quorum_counts_state", c.options.quorum_counts_state}};
  j["initial"] = value_to_json(c.initial);
  return j;
}

std::string scenario_digest(const ScenarioConfig& c) {
  const std::string text = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace regsim
