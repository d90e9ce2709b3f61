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

#include "regsim/explore.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_set>

#include "regsim/replica.hpp"
#include "regsim/sim.hpp"

namespace regsim {

namespace {

struct InFlight {
  ProcessId to;
  Message msg;

  auto operator<=>(const InFlight&) const = default;
};

struct HistEvent {
  enum Kind : std::uint8_t { invoke, respond, crash } kind;
  std::uint32_t who = 0;  // op index, or process id for crashes
  SeqNo seq = 0;
  RegValue value;
};

struct World {
  std::vector<Replica> replicas;
  std::vector<std::uint8_t> crashed;
  std::vector<std::size_t> next_op;  // per process, index into its op list
  std::vector<std::int64_t> pending;  // per process, global op index or -1
  std::vector<InFlight> in_flight;    // sorted
  std::vector<HistEvent> hist;
  std::uint32_t crashes = 0;
  // Abstract history: real-time precedence and results only. Two concrete
  // histories with equal abstractions are indistinguishable to the checkers.
  std::uint64_t responded = 0;                // bitmask of responded ops
  std::vector<std::uint64_t> invoked_after;   // per op: responded mask at invoke, or ~0 if not invoked
  std::vector<std::uint64_t> crashed_after;   // per process: responded mask at crash, or ~0
  std::vector<std::pair<SeqNo, RegValue>> results;  // per op
};

struct Fingerprint {
  std::uint64_t a;
  std::uint64_t b;
  bool operator==(const Fingerprint&) const = default;
};

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const noexcept { return f.a ^ (f.b * 0x9e3779b97f4a7c15ULL); }
};

void put(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void serialize_abstract(const World& w, std::string& out) {
  put(out, w.responded);
  for (auto m : w.invoked_after) put(out, m);
  for (auto m : w.crashed_after) put(out, m);
  for (const auto& r : w.results) {
    put(out, r.first);
    if (r.second.is_bottom()) {
      put(out, ~std::uint64_t{0});
    } else {
      put(out, r.second.bytes().size());
      out += r.second.bytes();
    }
  }
}

class Explorer {
 public:
  Explorer(const ExploreConfig& cfg, const ExploreBounds& bounds) : cfg_(cfg), bounds_(bounds) {
    per_process_.resize(cfg.n + 1);
    for (std::size_t k = 0; k < cfg.ops.size(); ++k) {
      const auto& op = cfg.ops[k];
      if (op.process.value < 1 || op.process.value > cfg.n) throw ConfigError("explore: op process out of range");
      if (op.kind == OpKind::write && op.process != cfg.writer) throw ConfigError("explore: write by non-writer");
      per_process_[op.process.value].push_back(k);
    }
  }

  ExploreResult run() {
    World w;
    for (std::uint32_t i = 1; i <= cfg_.n; ++i) {
      w.replicas.push_back(
          make_replica(cfg_.algorithm, ProcessId{i}, cfg_.n, cfg_.t, RegValue::bottom(), cfg_.writer, cfg_.options));
    }
    w.crashed.assign(cfg_.n + 1, 0);
    w.next_op.assign(cfg_.n + 1, 0);
    w.pending.assign(cfg_.n + 1, -1);
    w.invoked_after.assign(cfg_.ops.size(), ~std::uint64_t{0});
    w.crashed_after.assign(cfg_.n + 1, ~std::uint64_t{0});
    w.results.assign(cfg_.ops.size(), {0, RegValue::bottom()});
    visit(w);
    result_.states = seen_.size();
    return std::move(result_);
  }

 private:
  Fingerprint fingerprint(const World& w) const {
    std::string buf;
    buf.reserve(1024);
    for (const auto& r : w.replicas) serialize(r, buf);
    buf.append(reinterpret_cast<const char*>(w.crashed.data()), w.crashed.size());
    for (auto k : w.next_op) put(buf, k);
    for (auto k : w.pending) put(buf, static_cast<std::uint64_t>(k));
    for (const auto& f : w.in_flight) {
      put(buf, f.to.value);
      put(buf, f.msg.sender.value);
      buf.push_back(static_cast<char>(f.msg.tag));
      put(buf, f.msg.rsn);
      put(buf, f.msg.wsn);
      if (!f.msg.value) {
        buf.push_back(0);
      } else if (f.msg.value->is_bottom()) {
        buf.push_back(1);
      } else {
        buf.push_back(2);
        put(buf, f.msg.value->bytes().size());
        buf += f.msg.value->bytes();
      }
    }
    serialize_abstract(w, buf);
    std::uint64_t fnv = 0xcbf29ce484222325ULL;
    for (unsigned char c : buf) {
      fnv ^= c;
      fnv *= 0x100000001b3ULL;
    }
    return Fingerprint{std::hash<std::string_view>{}(buf), fnv};
  }

  void crash(World& w, ProcessId p) const {
    w.crashed[p.value] = 1;
    ++w.crashes;
    std::erase_if(w.in_flight, [&](const InFlight& f) { return f.to == p; });
    w.hist.push_back(HistEvent{HistEvent::crash, p.value, 0, {}});
    w.crashed_after[p.value] = w.responded;
  }

  void enqueue(World& w, ProcessId to, const Message& m) const {
    if (w.crashed[to.value] || (cfg_.prune_inert && is_inert(w.replicas[to.value - 1], m))) return;
    InFlight f{to, m};
    w.in_flight.insert(std::upper_bound(w.in_flight.begin(), w.in_flight.end(), f), std::move(f));
  }

  // Messages that can no longer affect their receiver are dropped: delivering
  // them is a no-op, so keeping them only multiplies equivalent states.
  void drop_inert(World& w, ProcessId p) const {
    if (!cfg_.prune_inert) return;
    const auto& r = w.replicas[p.value - 1];
    std::erase_if(w.in_flight, [&](const InFlight& f) { return f.to == p && is_inert(r, f.msg); });
  }

  void apply(World& w, ProcessId p, Step& step, std::optional<std::vector<ProcessId>> cut) const {
    drop_inert(w, p);
    for (const auto& o : step.outgoing) {
      if (!o.is_broadcast()) {
        enqueue(w, o.to, o.msg);
        continue;
      }
      const bool crashing = cut.has_value();
      for (auto d : deliver_semantics(cfg_.n, cut)) enqueue(w, d, o.msg);
      if (crashing) {
        crash(w, p);
        return;
      }
    }
    if (cut) {
      crash(w, p);
      return;
    }
    if (step.completion) {
      const auto op = w.pending[p.value];
      w.pending[p.value] = -1;
      w.responded |= std::uint64_t{1} << op;
      w.results[static_cast<std::size_t>(op)] = {step.completion->seq, step.completion->value};
      w.hist.push_back(HistEvent{HistEvent::respond, static_cast<std::uint32_t>(op), step.completion->seq,
                                 step.completion->value});
    }
  }

  void do_invoke(World& w, ProcessId p, std::optional<std::vector<ProcessId>> cut) const {
    const std::size_t k = per_process_[p.value][w.next_op[p.value]++];
    const auto& op = cfg_.ops[k];
    Step step = invoke(w.replicas[p.value - 1], op.kind, op.value);
    w.pending[p.value] = static_cast<std::int64_t>(k);
    w.invoked_after[k] = w.responded;
    w.hist.push_back(HistEvent{HistEvent::invoke, static_cast<std::uint32_t>(k), step.write_seq, {}});
    apply(w, p, step, std::move(cut));
  }

  void record_terminal(const World& w) {
    ++result_.terminals;
    std::string key;
    serialize_abstract(w, key);
    if (!histories_seen_.insert(key).second) return;

    History h;
    std::map<std::size_t, std::size_t> index;
    for (std::size_t pos = 0; pos < w.hist.size(); ++pos) {
      const auto& e = w.hist[pos];
      const auto time = static_cast<Ticks>(pos);
      if (e.kind == HistEvent::crash) {
        h.crashes.emplace(ProcessId{e.who}, time);
      } else if (e.kind == HistEvent::invoke) {
        const auto& spec = cfg_.ops[e.who];
        OpRecord op;
        op.id = e.who;
        op.process = spec.process;
        op.kind = spec.kind;
        op.invoke = time;
        if (spec.kind == OpKind::write) {
          op.value = spec.value;
          op.seq = e.seq;
        }
        index[e.who] = h.ops.size();
        h.ops.push_back(std::move(op));
      } else {
        auto& op = h.ops[index.at(e.who)];
        op.respond = time;
        if (op.kind == OpKind::read) {
          op.value = e.value;
          op.seq = e.seq;
        }
      }
    }
    result_.histories.push_back(std::move(h));
  }

  void visit(const World& w) {
    if (result_.overflow) return;
    if (!seen_.insert(fingerprint(w)).second) return;
    if (seen_.size() >= bounds_.max_states) {
      result_.overflow = true;
      return;
    }

    bool progressed = false;
    const bool may_crash = w.crashes < cfg_.t;
    for (std::uint32_t i = 1; i <= cfg_.n; ++i) {
      if (w.crashed[i] || w.pending[i] >= 0 || w.next_op[i] >= per_process_[i].size()) continue;
      progressed = true;
      const ProcessId p{i};
      {
        World next = w;
        do_invoke(next, p, std::nullopt);
        visit(next);
      }
      const auto& op = cfg_.ops[per_process_[i][w.next_op[i]]];
      if (op.kind == OpKind::write && cfg_.writer_crash_subsets && may_crash) {
        for (std::uint32_t mask = 0; mask < (1u << cfg_.n); ++mask) {
          std::vector<ProcessId> subset;
          for (std::uint32_t j = 0; j < cfg_.n; ++j) {
            if (mask & (1u << j)) subset.push_back(ProcessId{j + 1});
          }
          World next = w;
          do_invoke(next, p, std::move(subset));
          visit(next);
        }
      }
    }

    for (std::size_t idx = 0; idx < w.in_flight.size(); ++idx) {
      if (idx > 0 && w.in_flight[idx] == w.in_flight[idx - 1]) continue;
      progressed = true;
      World next = w;
      InFlight f = next.in_flight[idx];
      next.in_flight.erase(next.in_flight.begin() + static_cast<std::ptrdiff_t>(idx));
      Step step = deliver(next.replicas[f.to.value - 1], f.msg);
      apply(next, f.to, step, std::nullopt);
      visit(next);
    }

    if (cfg_.crash_anywhere && may_crash) {
      for (std::uint32_t i = 1; i <= cfg_.n; ++i) {
        if (w.crashed[i]) continue;
        World next = w;
        crash(next, ProcessId{i});
        visit(next);
      }
    }

    if (!progressed) record_terminal(w);
  }

  const ExploreConfig& cfg_;
  ExploreBounds bounds_;
  std::vector<std::vector<std::size_t>> per_process_;
  std::unordered_set<Fingerprint, FingerprintHash> seen_;
  std::unordered_set<std::string> histories_seen_;
  ExploreResult result_;
};

}  // namespace

ExploreResult explore(const ExploreConfig& config, const ExploreBounds& bounds) {
  if (config.n < 1 || 2 * config.t >= config.n) throw ConfigError("explore: model requires 2t < n");
  if (config.n > 3) throw ConfigError("explore: instances are limited to n <= 3");
  if (config.ops.size() > 63) throw ConfigError("explore: too many operations");
  return Explorer(config, bounds).run();
}

}  // namespace regsim
