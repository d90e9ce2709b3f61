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

#ifndef REGSIM_SCENARIO_HPP
#define REGSIM_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "regsim/message.hpp"
#include "regsim/protocol.hpp"
#include "regsim/types.hpp"

namespace regsim {

/// The scenario file is malformed or violates the system model.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NetKind : std::uint8_t { async, bounded_delay, round_sync };

/// How delays are drawn when no schedule rule matches.
enum class DelayMode : std::uint8_t {
  uniform,     // seeded, uniform in [1, bound]
  max,         // always the bound
  extremes,    // seeded, 1 or the bound with equal odds
  increasing,  // async only: each message takes one tick longer than the previous one
};

/// Explicit per-message delay. Unset fields match anything; the first
/// matching rule wins.
struct DelayRule {
  std::optional<ProcessId> from;
  std::optional<ProcessId> to;
  std::optional<MsgTag> tag;
  std::optional<SeqNo> wsn;
  Ticks delay = 1;

  bool matches(ProcessId f, ProcessId d, const Message& m) const;
};

struct NetworkModel {
  NetKind kind = NetKind::bounded_delay;
  /// D_max for async, Δ for bounded_delay, δ for round_sync.
  Ticks bound = 10;
  DelayMode mode = DelayMode::uniform;
  std::vector<DelayRule> schedule;
};

/// A subset of processes, or a seeded random subset chosen at run time.
struct DeliverSet {
  bool random = false;
  std::vector<ProcessId> members;
};

struct CrashAt {
  Ticks time = 0;
};
/// Crash while broadcasting during the invocation of ops[op_index].
struct CrashDuringOp {
  std::size_t op_index = 0;
  DeliverSet deliver_to;
};
/// Crash while forwarding WRITE(wsn, -) for the first time.
struct CrashDuringForward {
  SeqNo wsn = 0;
  DeliverSet deliver_to;
};

struct CrashSpec {
  ProcessId process;
  std::variant<CrashAt, CrashDuringOp, CrashDuringForward> trigger;
};

struct OpSpec {
  Ticks time = 0;
  ProcessId process;
  OpKind kind = OpKind::read;
  RegValue value;
};

struct ScenarioConfig {
  std::uint32_t n = 3;
  std::uint32_t t = 1;
  ProcessId writer{1};
  Algorithm algorithm = Algorithm::teff_modified;
  NetworkModel network;
  std::vector<CrashSpec> crashes;
  std::vector<OpSpec> ops;
  std::uint64_t seed = 0;
  ProtocolOptions options;
  RegValue initial;
};

/// Throws ConfigError describing the first problem found.
void validate(const ScenarioConfig& config);

ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);
nlohmann::ordered_json to_json(const ScenarioConfig& config);

/// FNV-1a digest of the canonical JSON form, as 16 hex digits.
std::string scenario_digest(const ScenarioConfig& config);

const char* to_string(NetKind k);
const char* to_string(DelayMode m);

}  // namespace regsim

#endif  // REGSIM_SCENARIO_HPP
