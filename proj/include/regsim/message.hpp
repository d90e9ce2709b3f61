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

#ifndef REGSIM_MESSAGE_HPP
#define REGSIM_MESSAGE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regsim/types.hpp"

namespace regsim {

enum class MsgTag : std::uint8_t {
  write = 0x01,
  read = 0x02,
  state = 0x03,
  abd_update = 0x10,
  abd_ack = 0x11,
  abd_query = 0x12,
  abd_report = 0x13,
};

const char* to_string(MsgTag tag);
MsgTag msg_tag_from_string(const std::string& s);

/// A protocol message. Which fields are meaningful depends on the tag:
///
///   WRITE(wsn, v)              READ(rsn)
///   STATE(rsn, wsn)            STATE(rsn, wsn, v)   (modified variant)
///   ABD UPDATE(phase, wsn, v)  ABD ACK(phase)
///   ABD QUERY(phase)           ABD REPORT(phase, wsn, v)
///
/// For ABD messages `rsn` holds the phase id.
struct Message {
  MsgTag tag = MsgTag::write;
  ProcessId sender;
  SeqNo rsn = 0;
  SeqNo wsn = 0;
  std::optional<RegValue> value;

  bool operator==(const Message&) const = default;
  auto operator<=>(const Message&) const = default;
};

Message make_write(ProcessId sender, SeqNo wsn, RegValue v);
Message make_read(ProcessId sender, SeqNo rsn);
Message make_state(ProcessId sender, SeqNo rsn, SeqNo wsn, std::optional<RegValue> v);

/// Binary wire form used in traces: tag byte, then the tag's sequence numbers
/// as little-endian u64, then the value (if any) as a little-endian u64 length
/// followed by the bytes. Bottom is encoded as length 0xFFFFFFFFFFFFFFFF with
/// no bytes. The sender is not part of the encoding.
std::vector<std::uint8_t> encode_message(const Message& m);

/// Inverse of encode_message. Throws std::invalid_argument on malformed input.
Message decode_message(std::span<const std::uint8_t> bytes, ProcessId sender);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(const std::string& hex);

/// Human-readable rendering, e.g. "WRITE(3,\"c\")".
std::string describe(const Message& m);

/// A message emitted by a handler: to one process, or to all (kBroadcast).
struct Outgoing {
  ProcessId to;
  Message msg;

  bool is_broadcast() const { return to == kBroadcast; }
  bool operator==(const Outgoing&) const = default;
};

}  // namespace regsim

#endif  // REGSIM_MESSAGE_HPP
