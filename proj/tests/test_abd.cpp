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

#include "doctest.h"
#include "regsim/abd.hpp"

using namespace regsim;

namespace {

const ProcessId p1{1}, p2{2}, p3{3};

Message report(ProcessId from, SeqNo phase, SeqNo wsn, RegValue v) {
  return Message{MsgTag::abd_report, from, phase, wsn, std::move(v)};
}
Message ack(ProcessId from, SeqNo phase) { return Message{MsgTag::abd_ack, from, phase, 0, std::nullopt}; }

}  // namespace

TEST_CASE("abd write: one update round, n-t acks") {
  auto out = abd_begin_write(abd_init(p1, 3, 1, RegValue::bottom()), RegValue("a"));
  REQUIRE(out.outgoing.size() == 1);
  CHECK(out.outgoing[0].is_broadcast());
  CHECK(out.outgoing[0].msg.tag == MsgTag::abd_update);
  CHECK(out.outgoing[0].msg.wsn == 1);
  CHECK(out.outgoing[0].msg.value == RegValue("a"));
  const SeqNo phase = out.outgoing[0].msg.rsn;
  CHECK(phase == abd_phase_id(1, 0));

  auto o = abd_on_message(out.state, ack(p1, phase));
  CHECK_FALSE(o.completion);
  o = abd_on_message(o.state, ack(p1, phase));  // duplicate sender
  CHECK_FALSE(o.completion);
  o = abd_on_message(o.state, ack(p3, phase));
  REQUIRE(o.completion);
  CHECK(*o.completion == Completion{OpKind::write, RegValue("a"), 1});
  CHECK_FALSE(o.state.pending);

  CHECK_THROWS_AS(abd_begin_write(abd_init(p2, 3, 1, RegValue::bottom()), RegValue("x")), ProtocolError);
  CHECK_THROWS_AS(abd_begin_write(out.state, RegValue("b")), ProtocolError);
}

TEST_CASE("abd read: query, max, unconditional write-back") {
  auto out = abd_begin_read(abd_init(p2, 3, 1, RegValue::bottom()));
  REQUIRE(out.outgoing.size() == 1);
  CHECK(out.outgoing[0].msg.tag == MsgTag::abd_query);
  const SeqNo q = out.outgoing[0].msg.rsn;

  SUBCASE("all bottom") {
    auto o = abd_on_message(out.state, report(p1, q, 0, RegValue::bottom()));
    CHECK(o.outgoing.empty());
    o = abd_on_message(o.state, report(p3, q, 0, RegValue::bottom()));
    REQUIRE(o.outgoing.size() == 1);
    CHECK(o.outgoing[0].msg.tag == MsgTag::abd_update);
    CHECK(o.outgoing[0].msg.wsn == 0);
    const SeqNo wb = o.outgoing[0].msg.rsn;
    CHECK(wb == q + 1);
    o = abd_on_message(o.state, ack(p1, wb));
    o = abd_on_message(o.state, ack(p2, wb));
    REQUIRE(o.completion);
    CHECK(o.completion->value.is_bottom());
  }
  SUBCASE("maximum wins") {
    auto o = abd_on_message(out.state, report(p1, q, 1, RegValue("a")));
    o = abd_on_message(o.state, report(p3, q, 2, RegValue("b")));
    REQUIRE(o.outgoing.size() == 1);
    CHECK(o.outgoing[0].msg.wsn == 2);
    CHECK(o.outgoing[0].msg.value == RegValue("b"));
    const SeqNo wb = o.outgoing[0].msg.rsn;
    // Late report for the finished query phase is ignored.
    CHECK(abd_is_inert(o.state, report(p2, q, 3, RegValue("c"))));
    o = abd_on_message(o.state, ack(p3, wb));
    o = abd_on_message(o.state, ack(p1, wb));
    REQUIRE(o.completion);
    CHECK(*o.completion == Completion{OpKind::read, RegValue("b"), 2});
  }
}

TEST_CASE("abd server side") {
  auto s = abd_init(p2, 3, 1, RegValue::bottom());
  s.wsn = 1;
  s.reg = RegValue("a");
  auto o = abd_on_message(s, Message{MsgTag::abd_update, p1, 6, 3, RegValue("c")});
  CHECK(o.state.wsn == 3);
  CHECK(o.state.reg == RegValue("c"));
  REQUIRE(o.outgoing.size() == 1);
  CHECK(o.outgoing[0] == Outgoing{p1, ack(p2, 6)});

  o = abd_on_message(o.state, Message{MsgTag::abd_update, p1, 2, 1, RegValue("a")});
  CHECK(o.state.wsn == 3);
  CHECK(o.state.reg == RegValue("c"));
  CHECK(o.outgoing.size() == 1);

  o = abd_on_message(o.state, Message{MsgTag::abd_query, p3, 4, 0, std::nullopt});
  REQUIRE(o.outgoing.size() == 1);
  CHECK(o.outgoing[0] == Outgoing{p3, report(p2, 4, 3, RegValue("c"))});
}
