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

#include "regsim/trace.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace regsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json event_to_json(const TraceEvent& e) {
  ordered_json j;
  j["time"] = e.time;
  j["kind"] = to_string(e.kind);
  j["process"] = e.process.value;
  if (e.kind == EventKind::send || e.kind == EventKind::deliver) j["peer"] = e.peer.value;
  if (e.op >= 0) j["op"] = e.op;
  if (e.op_kind) j["op_kind"] = to_string(*e.op_kind);
  if (e.kind == EventKind::invoke) j["tag"] = e.tag;
  if (e.value) j["value"] = e.value->is_bottom() ? ordered_json(nullptr) : ordered_json(e.value->bytes());
  if (e.seq) j["seq"] = *e.seq;
  if (e.message) {
    j["msg"] = to_hex(encode_message(*e.message));
    j["msg_tag"] = to_string(e.message->tag);
  }
  return j;
}

EventKind event_kind_from_string(const std::string& s) {
  for (auto k : {EventKind::invoke, EventKind::respond, EventKind::send, EventKind::deliver, EventKind::crash,
                 EventKind::round_start}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown trace event kind: " + s);
}

TraceEvent event_from_json(const json& j) {
  TraceEvent e;
  e.time = j.at("time").get<Ticks>();
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  e.process = ProcessId{j.at("process").get<std::uint32_t>()};
  if (j.contains("peer")) e.peer = ProcessId{j.at("peer").get<std::uint32_t>()};
  if (j.contains("op")) e.op = j.at("op").get<std::int64_t>();
  if (j.contains("op_kind")) e.op_kind = j.at("op_kind").get<std::string>() == "write" ? OpKind::write : OpKind::read;
  if (j.contains("tag")) e.tag = j.at("tag").get<SeqNo>();
  if (j.contains("value")) {
    const auto& v = j.at("value");
    e.value = v.is_null() ? RegValue::bottom() : RegValue(v.get<std::string>());
  }
  if (j.contains("seq")) e.seq = j.at("seq").get<SeqNo>();
  if (j.contains("msg")) {
    // The sender of a send is its process; of a deliver, its peer.
    const ProcessId sender = e.kind == EventKind::send ? e.process : e.peer;
    try {
      e.message = decode_message(from_hex(j.at("msg").get<std::string>()), sender);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("bad message encoding in trace: ") + ex.what());
    }
  }
  return e;
}

}  // namespace

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::invoke: return "invoke";
    case EventKind::respond: return "respond";
    case EventKind::send: return "send";
    case EventKind::deliver: return "deliver";
    case EventKind::crash: return "crash";
    case EventKind::round_start: return "round_start";
  }
  return "?";
}

void write_jsonl(std::ostream& out, const Trace& trace) {
  ordered_json header;
  header["config"] = to_json(trace.config);
  out << header.dump() << '\n';
  for (const auto& e : trace.events) out << event_to_json(e).dump() << '\n';
}

std::string to_jsonl(const Trace& trace) {
  std::ostringstream out;
  write_jsonl(out, trace);
  return out.str();
}

Trace read_jsonl(std::istream& in) {
  Trace trace;
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (!have_header) {
        if (!j.contains("config")) throw ConfigError("trace must start with a {\"config\": ...} line");
        trace.config = scenario_from_json(j.at("config"));
        have_header = true;
        continue;
      }
      trace.events.push_back(event_from_json(j));
    } catch (const json::exception& e) {
      throw ConfigError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw ConfigError("empty trace");
  return trace;
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  return read_jsonl(in);
}

}  // namespace regsim
