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

#ifndef REGSIM_SIM_HPP
#define REGSIM_SIM_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "regsim/scenario.hpp"
#include "regsim/trace.hpp"

namespace regsim {

/// The run processed more events than its budget allows. Distinct from
/// protocol non-termination, which shows up as operations left pending in a
/// trace whose event queue drained.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t processed)
      : std::runtime_error(what), processed_(processed) {}
  std::uint64_t processed() const { return processed_; }

 private:
  std::uint64_t processed_;
};

/// An operation was scheduled at a process whose previous operation had not
/// yet returned.
class ScheduleError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

inline constexpr std::uint64_t kDefaultEventBudget = 5'000'000;

/// kDefaultEventBudget unless REGSIM_EVENT_BUDGET holds a positive integer.
std::uint64_t default_event_budget();

struct SimOptions {
  std::uint64_t event_budget = default_event_budget();
};

/// Executes the scenario and returns its complete trace. Deterministic in
/// (config, config.seed). Throws ConfigError, ScheduleError or
/// BudgetExceeded.
Trace run(const ScenarioConfig& config, const SimOptions& options = {});

/// Receivers of a broadcast among p_1..p_n: everyone, or, when the sender
/// crashes part-way, exactly the given subset.
std::vector<ProcessId> deliver_semantics(std::uint32_t n, const std::optional<std::vector<ProcessId>>& crash_subset);

}  // namespace regsim

#endif  // REGSIM_SIM_HPP
