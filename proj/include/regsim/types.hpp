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

#ifndef REGSIM_TYPES_HPP
#define REGSIM_TYPES_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace regsim {

using SeqNo = std::uint64_t;

/// Simulated time in integer ticks.
using Ticks = std::int64_t;

/// Identity of a process p_1..p_n. The value 0 is reserved as the broadcast
/// destination and never names a process.
struct ProcessId {
  std::uint32_t value = 0;

  constexpr ProcessId() = default;
  constexpr explicit ProcessId(std::uint32_t v) : value(v) {}

  constexpr auto operator<=>(const ProcessId&) const = default;
};

inline constexpr ProcessId kBroadcast{0};

/// Register value: an opaque byte string, or the distinguished initial value
/// (bottom), which compares unequal to every byte string including "".
class RegValue {
 public:
  RegValue() = default;
  explicit RegValue(std::string bytes) : bytes_(std::move(bytes)) {}

  static RegValue bottom() { return RegValue(); }

  bool is_bottom() const { return !bytes_.has_value(); }
  const std::string& bytes() const { return bytes_.value(); }

  /// Printable form: the bytes, or "⊥".
  std::string to_string() const { return bytes_ ? *bytes_ : std::string("⊥"); }

  auto operator<=>(const RegValue&) const = default;

 private:
  std::optional<std::string> bytes_;
};

enum class Variant : std::uint8_t { base, modified };

enum class Algorithm : std::uint8_t { teff, teff_modified, abd };

enum class OpKind : std::uint8_t { write, read };

const char* to_string(Algorithm a);
const char* to_string(OpKind k);
Algorithm algorithm_from_string(const std::string& s);

/// A precondition of a protocol handler was violated (e.g. a non-writer
/// invoked write, or a process started a second operation while one was
/// pending).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Result of an operation, as reported by the handler that completed it.
/// For writes `seq` is the written sequence number and `value` the written
/// value; for reads they are what the read returns.
struct Completion {
  OpKind kind = OpKind::read;
  RegValue value;
  SeqNo seq = 0;

  bool operator==(const Completion&) const = default;
};

}  // namespace regsim

template <>
struct std::hash<regsim::ProcessId> {
  std::size_t operator()(regsim::ProcessId p) const noexcept { return std::hash<std::uint32_t>{}(p.value); }
};

#endif  // REGSIM_TYPES_HPP
