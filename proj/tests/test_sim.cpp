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

#include <cstdlib>
#include <map>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "regsim/history.hpp"
#include "regsim/sim.hpp"
#include "regsim/trace.hpp"

using namespace regsim;

namespace {

const ProcessId p1{1}, p2{2}, p3{3};

ScenarioConfig scenario(std::uint32_t n, std::uint32_t t, Algorithm alg, NetKind net, Ticks bound) {
  ScenarioConfig c;
  c.n = n;
  c.t = t;
  c.algorithm = alg;
  c.network.kind = net;
  c.network.bound = bound;
  return c;
}

OpSpec write_op(Ticks at, std::string v) { return OpSpec{at, p1, OpKind::write, RegValue(std::move(v))}; }
OpSpec read_op(Ticks at, ProcessId p) { return OpSpec{at, p, OpKind::read, RegValue::bottom()}; }

const OpRecord& op(const History& h, std::size_t id) {
  for (const auto& o : h.ops) {
    if (o.id == id) return o;
  }
  FAIL("no such op");
  return h.ops.front();
}

using MsgKey = std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint8_t>>;

// Pairs every deliver with its send. Messages in these protocols are unique
// per (sender, receiver, content), which the pairing asserts.
std::vector<Ticks> latencies(const Trace& tr) {
  std::map<MsgKey, Ticks> sent;
  std::vector<Ticks> out;
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::send) {
      MsgKey k{e.process.value, e.peer.value, encode_message(*e.message)};
      CHECK(sent.emplace(k, e.time).second);
    } else if (e.kind == EventKind::deliver) {
      auto it = sent.find(MsgKey{e.peer.value, e.process.value, encode_message(*e.message)});
      REQUIRE(it != sent.end());
      out.push_back(e.time - it->second);
      sent.erase(it);
    }
  }
  // Undelivered sends only to processes that crashed.
  std::map<std::uint32_t, bool> crashed;
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::crash) crashed[e.process.value] = true;
  }
  for (const auto& [k, t] : sent) CHECK(crashed[std::get<1>(k)]);
  return out;
}

void check_crash_conformance(const Trace& tr) {
  std::map<std::uint32_t, Ticks> crashed_at;
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::round_start) continue;
    if (e.kind == EventKind::crash) {
      CHECK(crashed_at.emplace(e.process.value, e.time).second);
      continue;
    }
    CHECK_FALSE(crashed_at.contains(e.process.value));
  }
}

void check_time_order(const Trace& tr) {
  for (std::size_t i = 1; i < tr.events.size(); ++i) CHECK(tr.events[i - 1].time <= tr.events[i].time);
}

}  // namespace

TEST_CASE("write then read after quiescence returns the value") {
  for (auto alg : {Algorithm::teff, Algorithm::teff_modified, Algorithm::abd}) {
    auto c = scenario(3, 1, alg, NetKind::bounded_delay, 10);
    c.ops = {write_op(0, "a"), read_op(100, p2)};
    const auto h = history_from_trace(run(c));
    REQUIRE(op(h, 1).completed());
    CHECK(op(h, 1).value == RegValue("a"));
    CHECK(op(h, 1).seq == 1);
  }
}

TEST_CASE("writer crashes mid-broadcast") {
  for (auto alg : {Algorithm::teff, Algorithm::teff_modified, Algorithm::abd}) {
    CAPTURE(to_string(alg));
    SUBCASE("reaching nobody") {
      auto c = scenario(3, 1, alg, NetKind::bounded_delay, 10);
      c.ops = {write_op(0, "a"), read_op(5, p2)};
      c.crashes = {CrashSpec{p1, CrashDuringOp{0, DeliverSet{false, {}}}}};
      const auto tr = run(c);
      const auto h = history_from_trace(tr);
      CHECK_FALSE(op(h, 0).completed());
      REQUIRE(op(h, 1).completed());
      CHECK(op(h, 1).value.is_bottom());
      CHECK(check_termination(h).pass);
      CHECK(check_claims(h).pass);
      CHECK(check_linearizable(h).pass);
      std::size_t sends_by_writer = 0;
      for (const auto& e : tr.events) sends_by_writer += e.kind == EventKind::send && e.process == p1;
      CHECK(sends_by_writer == 0);
    }
    SUBCASE("reaching one process: forwarding heals the gap") {
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto c = scenario(3, 1, alg, NetKind::bounded_delay, 10);
        c.seed = seed;
        c.ops = {write_op(0, "a"), read_op(1, p2), read_op(40, p3)};
        c.crashes = {CrashSpec{p1, CrashDuringOp{0, DeliverSet{false, {p2}}}}};
        const auto tr = run(c);
        const auto h = history_from_trace(tr);
        CHECK(check_termination(h).pass);
        CHECK(check_claims(h).pass);
        CHECK(check_linearizable(h).pass);
        check_crash_conformance(tr);
        if (alg != Algorithm::abd) {
          // p2 forwards WRITE(1) to everyone, so the late read sees it.
          CHECK(op(h, 2).value == RegValue("a"));
        }
      }
    }
  }
}

TEST_CASE("deliver_semantics") {
  CHECK(deliver_semantics(3, std::nullopt) == std::vector<ProcessId>{p1, p2, p3});
  CHECK(deliver_semantics(3, std::vector<ProcessId>{}).empty());
  CHECK(deliver_semantics(3, std::vector<ProcessId>{p3, p2}) == std::vector<ProcessId>{p2, p3});
}

TEST_CASE("determinism") {
  auto c = scenario(5, 2, Algorithm::teff_modified, NetKind::async, 50);
  c.seed = 42;
  c.ops = {write_op(0, "a"), read_op(1, p2), read_op(3, p3), write_op(80, "b"), read_op(81, ProcessId{4})};
  c.crashes = {CrashSpec{p1, CrashDuringOp{3, DeliverSet{true, {}}}}, CrashSpec{ProcessId{5}, CrashAt{30}}};
  const auto a = to_jsonl(run(c));
  const auto b = to_jsonl(run(c));
  CHECK(a == b);
  c.seed = 43;
  CHECK(to_jsonl(run(c)) != a);
}

TEST_CASE("trace JSONL round trip") {
  auto c = scenario(3, 1, Algorithm::teff_modified, NetKind::bounded_delay, 7);
  c.seed = 3;
  c.ops = {write_op(0, "a"), read_op(2, p2), write_op(30, ""), read_op(31, p3)};
  const auto tr = run(c);
  const auto text = to_jsonl(tr);
  std::istringstream in(text);
  const auto back = read_jsonl(in);
  CHECK(back.events == tr.events);
  CHECK(to_jsonl(back) == text);

  std::istringstream junk("{\"config\": 3}\n");
  CHECK_THROWS_AS(read_jsonl(junk), ConfigError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_jsonl(empty), ConfigError);
}

TEST_CASE("bounded-delay conformance and reliability") {
  for (auto mode : {DelayMode::uniform, DelayMode::max, DelayMode::extremes}) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto c = scenario(5, 2, Algorithm::teff_modified, NetKind::bounded_delay, 10);
      c.network.mode = mode;
      c.seed = seed;
      c.ops = {write_op(0, "a"), read_op(3, p2), read_op(9, p3), write_op(25, "b"), read_op(26, ProcessId{4})};
      c.crashes = {CrashSpec{ProcessId{5}, CrashAt{static_cast<Ticks>(seed % 20)}}};
      const auto tr = run(c);
      for (auto d : latencies(tr)) {
        CHECK(d >= 1);
        CHECK(d <= 10);
        if (mode == DelayMode::max) CHECK(d == 10);
      }
      check_crash_conformance(tr);
      check_time_order(tr);
    }
  }
}

TEST_CASE("delay schedule rules override the mode") {
  auto c = scenario(3, 1, Algorithm::teff, NetKind::bounded_delay, 10);
  c.network.mode = DelayMode::max;
  DelayRule r;
  r.tag = MsgTag::read;
  r.delay = 2;
  c.network.schedule = {r};
  c.ops = {read_op(0, p2)};
  const auto tr = run(c);
  for (const auto& e : tr.events) {
    if (e.kind != EventKind::deliver) continue;
    CHECK(e.time == (e.message->tag == MsgTag::read ? 2 : 12));
  }
}

TEST_CASE("round conformance") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto c = scenario(5, 2, Algorithm::teff_modified, NetKind::round_sync, 3);
    c.seed = seed;
    c.ops = {write_op(0, "a"), read_op(0, p2), read_op(3, p3), write_op(9, "b"), read_op(12, ProcessId{4})};
    const auto tr = run(c);
    for (auto d : latencies(tr)) CHECK(d == 3);
    std::size_t rounds = 0;
    for (const auto& e : tr.events) {
      if (e.kind == EventKind::round_start) {
        ++rounds;
        CHECK(e.time % 3 == 0);
      }
      if (e.kind == EventKind::send) CHECK(e.time % 3 == 0);
    }
    CHECK(rounds > 0);
    const auto h = history_from_trace(tr);
    CHECK(*op(h, 0).respond - op(h, 0).invoke == 6);
    CHECK(*op(h, 3).respond - op(h, 3).invoke == 6);
  }
}

TEST_CASE("async increasing delays") {
  auto c = scenario(3, 1, Algorithm::teff, NetKind::async, 50);
  c.network.mode = DelayMode::increasing;
  c.ops = {write_op(0, "a"), read_op(0, p2)};
  const auto tr = run(c);
  // Delays in send order are 1, 2, 3, ...
  Ticks last = 0;
  std::map<MsgKey, Ticks> delivered;
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::deliver) delivered[{e.peer.value, e.process.value, encode_message(*e.message)}] = e.time;
  }
  for (const auto& e : tr.events) {
    if (e.kind != EventKind::send) continue;
    MsgKey k{e.process.value, e.peer.value, encode_message(*e.message)};
    const Ticks d = delivered.at(k) - e.time;
    CHECK(d == last + 1);
    last = d;
  }
  CHECK(last > 0);
}

TEST_CASE("crash at a time stops all activity") {
  auto c = scenario(3, 1, Algorithm::teff_modified, NetKind::bounded_delay, 10);
  c.network.mode = DelayMode::max;
  c.ops = {write_op(0, "a"), read_op(0, p2)};
  c.crashes = {CrashSpec{p3, CrashAt{0}}};
  const auto tr = run(c);
  check_crash_conformance(tr);
  const auto h = history_from_trace(tr);
  CHECK(h.crashes.at(p3) == 0);
  CHECK(check_termination(h).pass);
}

TEST_CASE("crash while forwarding") {
  auto c = scenario(5, 2, Algorithm::teff, NetKind::bounded_delay, 10);
  c.network.mode = DelayMode::max;
  c.ops = {write_op(0, "a")};
  c.crashes = {CrashSpec{p1, CrashDuringOp{0, DeliverSet{false, {p2}}}},
               CrashSpec{p2, CrashDuringForward{1, DeliverSet{false, {p3}}}}};
  const auto tr = run(c);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> write_sends;
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::send && e.message->tag == MsgTag::write && e.process.value <= 2) {
      write_sends.emplace_back(e.process.value, e.peer.value);
    }
  }
  CHECK(write_sends == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{1, 2}, {2, 3}});
  check_crash_conformance(tr);
  const auto h = history_from_trace(tr);
  CHECK(h.crashes.at(p1) == 0);
  CHECK(h.crashes.at(p2) == 10);
}

TEST_CASE("schedule errors") {
  auto c = scenario(3, 1, Algorithm::teff, NetKind::bounded_delay, 10);
  c.network.mode = DelayMode::max;
  c.ops = {read_op(0, p2), read_op(5, p2)};
  CHECK_THROWS_AS(run(c), ScheduleError);
  c.ops = {read_op(0, p2), read_op(20, p2)};  // the first read ends at exactly 20
  CHECK_NOTHROW(run(c));
  c.t = 2;
  CHECK_THROWS_AS(run(c), ConfigError);
}

TEST_CASE("ops of a crashed process are skipped") {
  auto c = scenario(3, 1, Algorithm::teff, NetKind::bounded_delay, 10);
  c.ops = {read_op(10, p2), read_op(50, p2)};
  c.crashes = {CrashSpec{p2, CrashAt{0}}};
  const auto h = history_from_trace(run(c));
  CHECK(h.ops.empty());
}

TEST_CASE("event budget") {
  auto c = scenario(3, 1, Algorithm::teff, NetKind::bounded_delay, 10);
  c.ops = {write_op(0, "a")};
  CHECK_THROWS_AS(run(c, SimOptions{5}), BudgetExceeded);
  CHECK_NOTHROW(run(c, SimOptions{1000}));

  ::setenv("REGSIM_EVENT_BUDGET", "123", 1);
  CHECK(default_event_budget() == 123);
  ::setenv("REGSIM_EVENT_BUDGET", "lots", 1);
  CHECK(default_event_budget() == kDefaultEventBudget);
  ::unsetenv("REGSIM_EVENT_BUDGET");
  CHECK(default_event_budget() == kDefaultEventBudget);
}

TEST_CASE("empty schedule yields an empty trace") {
  const auto tr = run(scenario(3, 1, Algorithm::teff, NetKind::async, 10));
  CHECK(tr.events.empty());
}
