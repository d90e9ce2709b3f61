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

#include "regsim/sim.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <queue>
#include <random>
#include <string>
#include <variant>

#include "regsim/replica.hpp"

namespace regsim {

namespace {

struct InvokeEv {
  std::size_t op;
};
struct DeliverEv {
  ProcessId from;
  ProcessId to;
  Message msg;
};
struct CrashEv {
  ProcessId process;
};

struct QueueItem {
  Ticks time;
  std::uint64_t seq;
  std::variant<InvokeEv, DeliverEv, CrashEv> ev;

  bool operator>(const QueueItem& o) const { return time != o.time ? time > o.time : seq > o.seq; }
};

class World {
 public:
  World(const ScenarioConfig& config, const SimOptions& options)
      : cfg_(config),
        budget_(options.event_budget),
        delay_rng_(config.seed),
        crash_rng_(config.seed ^ 0x9e3779b97f4a7c15ULL),
        crashed_(config.n + 1, false),
        pending_(config.n + 1),
        later_ops_(config.n + 1) {
    trace_.config = config;
    for (std::uint32_t i = 1; i <= cfg_.n; ++i) {
      replicas_.push_back(
          make_replica(cfg_.algorithm, ProcessId{i}, cfg_.n, cfg_.t, cfg_.initial, cfg_.writer, cfg_.options));
    }
    for (const auto& cr : cfg_.crashes) {
      if (const auto* at = std::get_if<CrashAt>(&cr.trigger)) {
        push(at->time, CrashEv{cr.process});
      } else if (const auto* d = std::get_if<CrashDuringOp>(&cr.trigger)) {
        crash_on_op_[d->op_index] = resolve(d->deliver_to);
      } else {
        const auto& f = std::get<CrashDuringForward>(cr.trigger);
        crash_on_forward_[{cr.process, f.wsn}] = resolve(f.deliver_to);
      }
    }
    // Processes are sequential: each process's next operation is queued only
    // once its previous one has responded, so an invocation at the same tick
    // as that response runs after it.
    std::vector<std::size_t> order(cfg_.ops.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [this](std::size_t a, std::size_t b) { return cfg_.ops[a].time < cfg_.ops[b].time; });
    for (std::size_t k : order) later_ops_[cfg_.ops[k].process.value].push_back(k);
    std::vector<bool> started(cfg_.n + 1, false);
    for (std::size_t k : order) {
      const auto p = cfg_.ops[k].process.value;
      if (started[p]) continue;
      started[p] = true;
      later_ops_[p].pop_front();
      push(cfg_.ops[k].time, InvokeEv{k});
    }
  }

  Trace run() {
    std::uint64_t processed = 0;
    while (!queue_.empty()) {
      if (++processed > budget_) {
        throw BudgetExceeded("event budget of " + std::to_string(budget_) + " exceeded at t=" +
                                 std::to_string(queue_.top().time) + " with " + std::to_string(queue_.size()) +
                                 " queued events (livelock or runaway scenario; raise REGSIM_EVENT_BUDGET)",
                             processed);
      }
      QueueItem item = queue_.top();
      queue_.pop();
      now_ = item.time;
      std::visit([this](auto& ev) { handle(ev); }, item.ev);
    }
    return std::move(trace_);
  }

 private:
  Replica& replica(ProcessId p) { return replicas_[p.value - 1]; }

  void push(Ticks at, std::variant<InvokeEv, DeliverEv, CrashEv> ev) {
    queue_.push(QueueItem{at, next_seq_++, std::move(ev)});
  }

  std::vector<ProcessId> resolve(const DeliverSet& s) {
    if (!s.random) return s.members;
    std::vector<ProcessId> out;
    for (std::uint32_t i = 1; i <= cfg_.n; ++i) {
      if (crash_rng_() & 1) out.push_back(ProcessId{i});
    }
    return out;
  }

  std::uint64_t draw(std::uint64_t bound) { return 1 + delay_rng_() % bound; }

  Ticks delay_for(ProcessId from, ProcessId to, const Message& m) {
    const auto& net = cfg_.network;
    if (net.kind == NetKind::round_sync) return net.bound;
    for (const auto& rule : net.schedule) {
      if (rule.matches(from, to, m)) return rule.delay;
    }
    switch (net.mode) {
      case DelayMode::uniform: return static_cast<Ticks>(draw(static_cast<std::uint64_t>(net.bound)));
      case DelayMode::max: return net.bound;
      case DelayMode::extremes: return (delay_rng_() & 1) ? net.bound : 1;
      case DelayMode::increasing: return ++last_increasing_;
    }
    return net.bound;
  }

  void record(TraceEvent e) {
    e.time = now_;
    trace_.events.push_back(std::move(e));
  }

  void send(ProcessId from, ProcessId to, const Message& msg) {
    if (cfg_.network.kind == NetKind::round_sync && now_ != last_round_start_) {
      // Every send happens at a round boundary: ops start on boundaries and
      // every delivery lands on one.
      last_round_start_ = now_;
      record(TraceEvent{.kind = EventKind::round_start});
    }
    record(TraceEvent{.kind = EventKind::send, .process = from, .peer = to, .message = msg});
    push(now_ + delay_for(from, to, msg), DeliverEv{from, to, msg});
  }

  void crash(ProcessId p) {
    if (crashed_[p.value]) return;
    crashed_[p.value] = true;
    record(TraceEvent{.kind = EventKind::crash, .process = p});
  }

  // Emits the handler's messages and result. `cut` truncates the first
  // broadcast to a subset and crashes the process right after it.
  void apply(ProcessId p, Step& step, std::optional<std::vector<ProcessId>> cut) {
    for (const auto& o : step.outgoing) {
      std::optional<std::vector<ProcessId>> subset;
      if (o.is_broadcast()) {
        if (cut) {
          subset = std::move(cut);
          cut.reset();
        } else if (o.msg.tag == MsgTag::write) {
          auto it = crash_on_forward_.find({p, o.msg.wsn});
          if (it != crash_on_forward_.end()) subset = it->second;
        }
        for (auto d : deliver_semantics(cfg_.n, subset)) send(p, d, o.msg);
        if (subset) {
          crash(p);
          return;
        }
      } else {
        send(p, o.to, o.msg);
      }
    }
    if (cut) {
      // The operation emitted no broadcast to interrupt; crash right after it.
      crash(p);
      return;
    }
    if (step.completion) {
      const auto op = *pending_[p.value];
      pending_[p.value].reset();
      record(TraceEvent{.kind = EventKind::respond,
                        .process = p,
                        .op = static_cast<std::int64_t>(op),
                        .op_kind = step.completion->kind,
                        .value = step.completion->value,
                        .seq = step.completion->seq});
      queue_next_op(p, op);
    }
  }

  void queue_next_op(ProcessId p, std::size_t done) {
    auto& q = later_ops_[p.value];
    if (q.empty()) return;
    const std::size_t k = q.front();
    q.pop_front();
    if (cfg_.ops[k].time < now_) {
      throw ScheduleError("ops[" + std::to_string(k) + "] invoked at t=" + std::to_string(cfg_.ops[k].time) +
                          " on p" + std::to_string(p.value) + " while ops[" + std::to_string(done) +
                          "] was still pending until t=" + std::to_string(now_) + " (processes are sequential)");
    }
    push(cfg_.ops[k].time, InvokeEv{k});
  }

  void handle(const InvokeEv& ev) {
    const auto& op = cfg_.ops[ev.op];
    const ProcessId p = op.process;
    if (crashed_[p.value]) return;
    if (pending_[p.value]) {
      throw ScheduleError("ops[" + std::to_string(ev.op) + "] invoked at t=" + std::to_string(now_) + " on p" +
                          std::to_string(p.value) + " while ops[" + std::to_string(*pending_[p.value]) +
                          "] is still pending (processes are sequential)");
    }
    Step step = invoke(replica(p), op.kind, op.value);
    pending_[p.value] = ev.op;
    TraceEvent e{.kind = EventKind::invoke, .process = p, .op = static_cast<std::int64_t>(ev.op), .op_kind = op.kind,
                 .tag = step.tag};
    if (op.kind == OpKind::write) {
      e.value = op.value;
      e.seq = step.write_seq;
    }
    record(std::move(e));

    std::optional<std::vector<ProcessId>> cut;
    if (auto it = crash_on_op_.find(ev.op); it != crash_on_op_.end()) cut = it->second;
    apply(p, step, std::move(cut));
  }

  void handle(const DeliverEv& ev) {
    if (crashed_[ev.to.value]) return;
    record(TraceEvent{.kind = EventKind::deliver, .process = ev.to, .peer = ev.from, .message = ev.msg});
    Step step = deliver(replica(ev.to), ev.msg);
    apply(ev.to, step, std::nullopt);
  }

  void handle(const CrashEv& ev) { crash(ev.process); }

  const ScenarioConfig& cfg_;
  std::uint64_t budget_;
  std::mt19937_64 delay_rng_;
  std::mt19937_64 crash_rng_;
  Ticks last_increasing_ = 0;
  Ticks last_round_start_ = -1;
  Ticks now_ = 0;
  std::uint64_t next_seq_ = 0;

  std::vector<Replica> replicas_;
  std::vector<bool> crashed_;
  std::vector<std::optional<std::size_t>> pending_;
  std::vector<std::deque<std::size_t>> later_ops_;
  std::map<std::size_t, std::vector<ProcessId>> crash_on_op_;
  std::map<std::pair<ProcessId, SeqNo>, std::vector<ProcessId>> crash_on_forward_;

  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue_;
  Trace trace_;
};

}  // namespace

std::uint64_t default_event_budget() {
  if (const char* env = std::getenv("REGSIM_EVENT_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultEventBudget;
}

Trace run(const ScenarioConfig& config, const SimOptions& options) {
  validate(config);
  return World(config, options).run();
}

std::vector<ProcessId> deliver_semantics(std::uint32_t n, const std::optional<std::vector<ProcessId>>& crash_subset) {
  std::vector<ProcessId> out;
  if (!crash_subset) {
    for (std::uint32_t i = 1; i <= n; ++i) out.push_back(ProcessId{i});
    return out;
  }
  for (auto p : *crash_subset) {
    if (p.value >= 1 && p.value <= n) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace regsim
