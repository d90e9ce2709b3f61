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

#include <map>
#include <random>

#include "doctest.h"
#include "regsim/metrics.hpp"
#include "regsim/sim.hpp"

using namespace regsim;

namespace {

const ProcessId p1{1}, p2{2};

OpRecord rec(std::size_t id, ProcessId p, OpKind k, Ticks inv, std::optional<Ticks> resp, SeqNo seq = 0) {
  OpRecord o;
  o.id = id;
  o.process = p;
  o.kind = k;
  o.invoke = inv;
  o.respond = resp;
  o.seq = seq;
  return o;
}

ScenarioConfig failure_free(std::uint32_t n, Algorithm alg, std::vector<OpSpec> ops) {
  ScenarioConfig c;
  c.n = n;
  c.t = (n - 1) / 2;
  c.algorithm = alg;
  c.network.kind = NetKind::bounded_delay;
  c.network.bound = 10;
  c.ops = std::move(ops);
  return c;
}

}  // namespace

TEST_CASE("classify_read examples") {
  History h;
  h.ops = {rec(0, p1, OpKind::write, 0, 15, 1), rec(1, p2, OpKind::read, 100, 120)};
  CHECK(classify_read(h, h.ops[1], 10).cls == ReadClass::wlf);

  h.ops = {rec(0, p1, OpKind::write, 95, 98, 1), rec(1, p2, OpKind::read, 100, 120)};
  auto c = classify_read(h, h.ops[1], 10);
  CHECK(c.cls == ReadClass::interfering_no_crash);
  CHECK_FALSE(c.concurrent);
  CHECK(c.tau_w == 95);

  // Boundary: τ_w = τ_r − Δ is interfering, one tick earlier is not.
  h.ops = {rec(0, p1, OpKind::write, 90, 95, 1), rec(1, p2, OpKind::read, 100, 120)};
  CHECK(classify_read(h, h.ops[1], 10).cls == ReadClass::interfering_no_crash);
  h.ops = {rec(0, p1, OpKind::write, 89, 95, 1), rec(1, p2, OpKind::read, 100, 120)};
  CHECK(classify_read(h, h.ops[1], 10).cls == ReadClass::wlf);

  // Concurrent, completed write.
  h.ops = {rec(0, p1, OpKind::write, 105, 125, 1), rec(1, p2, OpKind::read, 100, 120)};
  c = classify_read(h, h.ops[1], 10);
  CHECK(c.cls == ReadClass::interfering_no_crash);
  CHECK(c.concurrent);

  // Writer crashes during a write concurrent with the read.
  h.ops = {rec(0, p1, OpKind::write, 99, std::nullopt, 1), rec(1, p2, OpKind::read, 100, 120)};
  h.crashes[p1] = 103;
  CHECK(classify_read(h, h.ops[1], 10).cls == ReadClass::interfering_writer_crash);

  // The crashed write ended (at the crash) long before the read started: still the crash class.
  h.ops = {rec(0, p1, OpKind::write, 0, std::nullopt, 1), rec(1, p2, OpKind::read, 100, 120)};
  h.crashes[p1] = 3;
  c = classify_read(h, h.ops[1], 10);
  CHECK(c.cls == ReadClass::interfering_writer_crash);
  CHECK_FALSE(c.concurrent);

  // No writes at all.
  h.ops = {rec(0, p2, OpKind::read, 0, 20)};
  h.crashes.clear();
  CHECK(classify_read(h, h.ops[0], 10).cls == ReadClass::wlf);

  // The latest of several writes decides.
  h.ops = {rec(0, p1, OpKind::write, 0, 10, 1), rec(1, p1, OpKind::write, 50, 60, 2), rec(2, p2, OpKind::read, 58, 80)};
  CHECK(classify_read(h, h.ops[2], 10).cls == ReadClass::interfering_no_crash);
  CHECK(classify_read(h, h.ops[2], 10).write_op == std::size_t{1});
}

TEST_CASE("bound table is total and matches the proven bounds") {
  for (auto alg : {Algorithm::teff, Algorithm::teff_modified, Algorithm::abd}) {
    for (auto net : {NetKind::async, NetKind::bounded_delay, NetKind::round_sync}) {
      for (auto kind : {OpKind::write, OpKind::read}) {
        for (std::optional<ReadClass> cls : {std::optional<ReadClass>{}, std::optional(ReadClass::wlf),
                                             std::optional(ReadClass::interfering_no_crash),
                                             std::optional(ReadClass::interfering_writer_crash)}) {
          const auto r = bound_for(alg, net, kind, cls);
          if (net == NetKind::async) {
            CHECK(r.cmp == Comparison::informational);
          } else if (r.cmp != Comparison::informational) {
            CHECK(r.units >= 2);
            CHECK(r.units <= 4);
          }
        }
      }
    }
  }
  using enum Comparison;
  auto is = [](BoundRule r, Comparison c, Ticks u) { return r.cmp == c && (c == informational || r.units == u); };
  const auto B = NetKind::bounded_delay, R = NetKind::round_sync;
  const auto M = Algorithm::teff_modified;
  CHECK(is(bound_for(M, B, OpKind::write, {}), at_most, 2));
  CHECK(is(bound_for(M, B, OpKind::read, ReadClass::wlf), at_most, 2));
  CHECK(is(bound_for(M, B, OpKind::read, ReadClass::interfering_no_crash), at_most, 3));
  CHECK(is(bound_for(M, B, OpKind::read, ReadClass::interfering_writer_crash), at_most, 4));
  CHECK(is(bound_for(Algorithm::teff, B, OpKind::read, ReadClass::interfering_writer_crash), informational, 0));
  CHECK(is(bound_for(Algorithm::teff, B, OpKind::read, ReadClass::interfering_no_crash), at_most, 3));
  for (auto a : {Algorithm::teff, M}) {
    CHECK(is(bound_for(a, R, OpKind::write, {}), exactly, 2));
    CHECK(is(bound_for(a, R, OpKind::read, ReadClass::wlf), exactly, 2));
    CHECK(is(bound_for(a, R, OpKind::read, ReadClass::interfering_no_crash), exactly, 2));
    CHECK(is(bound_for(a, R, OpKind::read, ReadClass::interfering_writer_crash), at_most, 3));
  }
  CHECK(is(bound_for(Algorithm::abd, B, OpKind::write, {}), at_most, 2));
  CHECK(is(bound_for(Algorithm::abd, B, OpKind::read, ReadClass::interfering_writer_crash), at_most, 4));
  CHECK(is(bound_for(M, B, OpKind::read, ReadClass::wlf, true), exactly, 0));
}

TEST_CASE("failure-free message counts") {
  for (std::uint32_t n : {3u, 5u, 7u}) {
    CAPTURE(n);
    const std::vector<OpSpec> ops = {{0, p1, OpKind::write, RegValue("a")}, {100, p2, OpKind::read, {}}};
    for (auto alg : {Algorithm::teff, Algorithm::teff_modified}) {
      const auto counts = count_messages(run(failure_free(n, alg, ops)));
      CHECK(counts.at(0) == n * n);
      CHECK(counts.at(1) == 2 * n);
      CHECK_FALSE(counts.contains(-1));
    }
    const auto counts = count_messages(run(failure_free(n, Algorithm::abd, ops)));
    CHECK(counts.at(0) == 2 * n);
    CHECK(counts.at(1) == 4 * n);
  }
  // n = 3 by hand: 3 broadcasts of WRITE(1) x 3 receivers; 3 READ + 3 STATE; ABD 3+3+3+3.
  const std::vector<OpSpec> ops = {{0, p1, OpKind::write, RegValue("a")}, {100, p2, OpKind::read, {}}};
  CHECK(count_messages(run(failure_free(3, Algorithm::teff, ops))).at(0) == 9);
  CHECK(count_messages(run(failure_free(3, Algorithm::teff, ops))).at(1) == 6);
  CHECK(count_messages(run(failure_free(3, Algorithm::abd, ops))).at(1) == 12);
}

TEST_CASE("forwards triggered through STATE are charged to the write") {
  // Modified variant, concurrent read and write: total traffic is still n²
  // for the write and 2n for the read.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto c = failure_free(5, Algorithm::teff_modified,
                          {{0, p1, OpKind::write, RegValue("a")}, {1, p2, OpKind::read, {}}});
    c.seed = seed;
    const auto counts = count_messages(run(c));
    CHECK(counts.at(0) == 25);
    CHECK(counts.at(1) == 10);
  }
}

TEST_CASE("assert_bounds on a failure-free run") {
  auto c = failure_free(5, Algorithm::teff_modified,
                        {{0, p1, OpKind::write, RegValue("a")}, {100, p2, OpKind::read, {}}, {5, ProcessId{3}, OpKind::read, {}}});
  c.network.mode = DelayMode::max;
  const auto r = assert_bounds(run(c));
  CHECK(r.violations == 0);
  REQUIRE(r.ops.size() == 3);
  CHECK(r.max_duration.at("write") == 20);
  CHECK(r.max_duration.at("read/wlf") == 20);
  CHECK(r.max_duration.at("read/interfering_no_crash") == 20);
}

TEST_CASE("async runs are informational") {
  auto c = failure_free(3, Algorithm::teff, {{0, p1, OpKind::write, RegValue("a")}});
  c.network.kind = NetKind::async;
  c.network.bound = 50;
  const auto r = assert_bounds(run(c));
  CHECK(r.informational);
  CHECK(r.violations == 0);
  CHECK(r.ops.at(0).cmp == Comparison::informational);
}

TEST_CASE("each process sees at most one read beyond the failure-free bound per writer crash") {
  std::mt19937_64 rng(5);
  for (auto net : {NetKind::bounded_delay, NetKind::round_sync}) {
    for (int run_no = 0; run_no < 300; ++run_no) {
      ScenarioConfig c;
      c.n = 5;
      c.t = 2;
      c.algorithm = Algorithm::teff_modified;
      c.network.kind = net;
      c.network.bound = net == NetKind::round_sync ? 1 : 10;
      c.network.mode = DelayMode::uniform;
      c.seed = rng();
      const Ticks unit = c.network.bound;
      c.ops.push_back({0, p1, OpKind::write, RegValue("a")});
      c.ops.push_back({unit * static_cast<Ticks>(3 + rng() % 2), p1, OpKind::write, RegValue("b")});
      for (std::uint32_t p = 2; p <= 5; ++p) {
        Ticks at = unit * static_cast<Ticks>(rng() % 4);
        for (int k = 0; k < 3; ++k) {
          c.ops.push_back({at, ProcessId{p}, OpKind::read, {}});
          at += unit * 5;
        }
      }
      c.crashes.push_back({p1, CrashDuringOp{1, DeliverSet{true, {}}}});
      const auto r = assert_bounds(run(c));
      CHECK(r.violations == 0);
      const Ticks failure_free_bound = (net == NetKind::round_sync ? 2 : 3) * unit;
      std::map<std::uint32_t, int> slow;
      for (const auto& b : r.ops) {
        if (b.kind == OpKind::read && b.duration > failure_free_bound) ++slow[b.process.value];
      }
      for (const auto& [p, k] : slow) CHECK(k <= 1);
    }
  }
}

TEST_CASE("bound report json") {
  auto c = failure_free(3, Algorithm::abd, {{0, p1, OpKind::write, RegValue("a")}});
  const auto j = to_json(assert_bounds(run(c)));
  CHECK(j["algorithm"] == "abd");
  CHECK(j["ops"][0]["kind"] == "write");
  CHECK(j["ops"][0]["messages"] == 6);
}
