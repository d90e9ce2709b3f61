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

#ifndef REGSIM_EXPLORE_HPP
#define REGSIM_EXPLORE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "regsim/history.hpp"
#include "regsim/protocol.hpp"
#include "regsim/types.hpp"

namespace regsim {

struct ExploreOp {
  ProcessId process;
  OpKind kind = OpKind::read;
  RegValue value;
};

/// A small untimed instance. Each process runs its operations (in list
/// order) back to back; every interleaving of invocations and message
/// deliveries is explored.
struct ExploreConfig {
  std::uint32_t n = 3;
  std::uint32_t t = 1;
  ProcessId writer{1};
  Algorithm algorithm = Algorithm::teff_modified;
  ProtocolOptions options;
  std::vector<ExploreOp> ops;
  /// Also branch every write invocation into "writer crashes while
  /// broadcasting, reaching exactly S" for every subset S of processes.
  bool writer_crash_subsets = false;
  /// Also allow any process to crash between any two steps.
  bool crash_anywhere = false;
  /// Drop in-flight messages whose delivery can no longer have any effect.
  /// Sound (delivering them is a no-op) and much smaller; off only to
  /// cross-check that claim.
  bool prune_inert = true;
};

struct ExploreBounds {
  std::size_t max_states = 20'000'000;
};

struct ExploreResult {
  /// Distinct (world, history) states visited.
  std::size_t states = 0;
  /// Terminal states reached (no invocation or delivery left).
  std::size_t terminals = 0;
  /// One entry per distinct terminal history, in discovery order. Times are
  /// logical: the position of the event in the history.
  std::vector<History> histories;
  /// The state bound was hit; counts are partial.
  bool overflow = false;
};

/// Depth-first enumeration with canonical transition order. States are
/// deduplicated by a 128-bit fingerprint of (replica states, in-flight
/// message multiset, operation progress, history so far), so each distinct
/// terminal history is reported exactly once.
ExploreResult explore(const ExploreConfig& config, const ExploreBounds& bounds = {});

}  // namespace regsim

#endif  // REGSIM_EXPLORE_HPP
