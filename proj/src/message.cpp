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

#include "regsim/message.hpp"

#include <limits>
#include <stdexcept>

namespace regsim {

namespace {

constexpr std::uint64_t kBottomLength = std::numeric_limits<std::uint64_t>::max();

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_value(std::vector<std::uint8_t>& out, const RegValue& v) {
  if (v.is_bottom()) {
    put_u64(out, kBottomLength);
    return;
  }
  put_u64(out, v.bytes().size());
  out.insert(out.end(), v.bytes().begin(), v.bytes().end());
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : bytes_(b) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  RegValue value() {
    const std::uint64_t len = u64();
    if (len == kBottomLength) return RegValue::bottom();
    need(len);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
    pos_ += len;
    return RegValue(std::move(s));
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::uint64_t k) const {
    if (k > bytes_.size() - pos_) throw std::invalid_argument("truncated message encoding");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

bool has_rsn(MsgTag t) { return t != MsgTag::write; }
bool has_wsn(MsgTag t) {
  return t == MsgTag::write || t == MsgTag::state || t == MsgTag::abd_update || t == MsgTag::abd_report;
}
bool requires_value(MsgTag t) {
  return t == MsgTag::write || t == MsgTag::abd_update || t == MsgTag::abd_report;
}

}  // namespace

const char* to_string(MsgTag tag) {
  switch (tag) {
    case MsgTag::write: return "WRITE";
    case MsgTag::read: return "READ";
    case MsgTag::state: return "STATE";
    case MsgTag::abd_update: return "UPDATE";
    case MsgTag::abd_ack: return "ACK";
    case MsgTag::abd_query: return "QUERY";
    case MsgTag::abd_report: return "REPORT";
  }
  return "?";
}

MsgTag msg_tag_from_string(const std::string& s) {
  for (MsgTag t : {MsgTag::write, MsgTag::read, MsgTag::state, MsgTag::abd_update, MsgTag::abd_ack,
                   MsgTag::abd_query, MsgTag::abd_report}) {
    if (s == to_string(t)) return t;
  }
  throw std::invalid_argument("unknown message tag: " + s);
}

Message make_write(ProcessId sender, SeqNo wsn, RegValue v) {
  return Message{MsgTag::write, sender, 0, wsn, std::move(v)};
}

Message make_read(ProcessId sender, SeqNo rsn) { return Message{MsgTag::read, sender, rsn, 0, std::nullopt}; }

Message make_state(ProcessId sender, SeqNo rsn, SeqNo wsn, std::optional<RegValue> v) {
  return Message{MsgTag::state, sender, rsn, wsn, std::move(v)};
}

std::vector<std::uint8_t> encode_message(const Message& m) {
  std::vector<std::uint8_t> out;
  out.reserve(32);
  out.push_back(static_cast<std::uint8_t>(m.tag));
  if (has_rsn(m.tag)) put_u64(out, m.rsn);
  if (has_wsn(m.tag)) put_u64(out, m.wsn);
  if (m.value) put_value(out, *m.value);
  return out;
}

Message decode_message(std::span<const std::uint8_t> bytes, ProcessId sender) {
  if (bytes.empty()) throw std::invalid_argument("empty message encoding");
  Message m;
  m.sender = sender;
  const auto raw = bytes[0];
  switch (raw) {
    case 0x01: case 0x02: case 0x03: case 0x10: case 0x11: case 0x12: case 0x13:
      m.tag = static_cast<MsgTag>(raw);
      break;
    default:
      throw std::invalid_argument("unknown message tag byte");
  }
  Reader r(bytes.subspan(1));
  if (has_rsn(m.tag)) m.rsn = r.u64();
  if (has_wsn(m.tag)) m.wsn = r.u64();
  // STATE carries a value only in the modified variant; presence is implied
  // by trailing bytes.
  if (requires_value(m.tag) || (m.tag == MsgTag::state && !r.done())) m.value = r.value();
  if (!r.done()) throw std::invalid_argument("trailing bytes in message encoding");
  return m;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

std::vector<std::uint8_t> from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  std::vector<std::uint8_t> out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
  }
  return out;
}

std::string describe(const Message& m) {
  std::string s = to_string(m.tag);
  s += '(';
  bool first = true;
  auto add = [&](const std::string& part) {
    if (!first) s += ',';
    s += part;
    first = false;
  };
  if (has_rsn(m.tag)) add(std::to_string(m.rsn));
  if (has_wsn(m.tag)) add(std::to_string(m.wsn));
  if (m.value) add(m.value->is_bottom() ? "⊥" : "\"" + m.value->bytes() + "\"");
  s += ')';
  return s;
}

}  // namespace regsim
