// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Deterministic discrete-event simulation of one cluster's shared channel,
/// and composition of per-cluster runs into a scenario run.
///
/// Channel model:
///  - backoff countdowns only advance after DIFS of continuous idle and
///    freeze while any frame is on air;
///  - a delivered request opens a transaction: all request countdowns stay
///    frozen and only reply countdowns run until a reply is delivered or the
///    channel stays idle for DIFS + T (reply timeout);
///  - each completed transaction starts a new contention round in which every
///    UAV with wanted packets draws afresh from its current subwindow;
///  - countdowns expiring in the same microsecond collide: all frames are
///    lost and each collider redraws with its unchanged packet count.

#ifndef UAVEX_SIMULATOR_HPP
#define UAVEX_SIMULATOR_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavex/clustering.hpp"
#include "uavex/core.hpp"
#include "uavex/mac.hpp"
#include "uavex/protocol.hpp"

namespace uavex {

/// Ordered so that, at equal timestamps, frame completions are seen before new
/// transmissions start.
enum class EventKind { tx_end = 0, channel_idle_check = 1, backoff_expired = 2, tx_start = 3, timeout = 4 };

struct Event {
  Micros time_us = 0;
  EventKind kind = EventKind::tx_end;
  UavId subject = 0;
  std::uint64_t token = 0;  ///< generation stamp; stale events are dropped
  std::uint64_t seq = 0;

  /// Heap order: earliest first, then kind, then UAV, then insertion.
  friend bool operator>(const Event& a, const Event& b) {
    if (a.time_us != b.time_us) return a.time_us > b.time_us;
    if (a.kind != b.kind) return a.kind > b.kind;
    if (a.subject != b.subject) return a.subject > b.subject;
    return a.seq > b.seq;
  }
};

struct ClusterResult {
  std::size_t exchange_count = 0;
  Micros delay_us = 0;
  bool completed = false;
  std::size_t collision_count = 0;
  std::size_t timeout_count = 0;
  IndicatorVector unobtainable;  ///< union over members

  friend bool operator==(const ClusterResult&, const ClusterResult&) = default;
};

struct RunResult {
  ClusterAssignment assignment;
  std::vector<ClusterResult> clusters;
  std::size_t reported_exchanges = 0;
  Micros reported_delay_us = 0;
  bool all_completed = false;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// One completed request-reply transaction as seen by the audit hook.
struct ExchangeRecord {
  Micros request_start_us = 0;
  UavId requester = 0;
  std::size_t requester_wanted = 0;
  std::size_t max_wanted = 0;  ///< largest wanted count among members when the request went out
  UavId replier = 0;
  std::size_t carried = 0;
  std::size_t max_supply = 0;  ///< best supply any member could have offered
  std::size_t missing_before = 0;
  std::size_t missing_after = 0;
  std::size_t replies_delivered = 0;
  bool after_collision = false;  ///< a collision in this round may have reordered access
};

/// Optional instrumentation filled by run_cluster_exchange.
struct SimAudit {
  std::vector<ExchangeRecord> exchanges;
  std::vector<Micros> event_times;
  std::vector<std::pair<Micros, Micros>> air_intervals;  ///< delivered frames only
  std::size_t initial_missing = 0;
  std::size_t holdings_regressions = 0;
  std::size_t state_violations = 0;
  std::string first_violation;
};

struct SimHooks {
  TraceLog* trace = nullptr;
  SimAudit* audit = nullptr;
  std::size_t max_events = 50'000'000;
};

inline std::vector<IndicatorVector> sample_initial_receipts(std::size_t num_uavs, std::size_t num_packets,
                                                            double delivery_rate, Rng& rng) {
  if (!(delivery_rate >= 0.0 && delivery_rate <= 1.0)) throw InvalidInput("delivery rate must lie in [0,1]");
  std::vector<IndicatorVector> out(num_uavs, IndicatorVector(num_packets));
  for (auto& v : out) {
    for (std::size_t m = 0; m < num_packets; ++m) {
      if (rng.bernoulli(delivery_rate)) v.set(m);
    }
  }
  return out;
}

namespace detail {

class ClusterChannel {
public:
  ClusterChannel(std::span<const UavId> members, std::span<const IndicatorVector> holdings,
                 const TimingConfig& timing, Scheme scheme, Rng& rng, SimHooks hooks)
      : timing_(timing), rng_(rng), hooks_(hooks) {
    if (members.empty()) throw InvalidInput("cluster has no members");
    const std::size_t m = holdings[members.front()].size();
    timing_.validate(m);
    policy_ = DrawPolicy::for_scheme(scheme, m, timing_);
    for (UavId id : members) {
      if (id >= holdings.size()) throw InvalidInput("member id outside holdings table");
      states_.emplace_back(id, holdings[id]);
    }
    gen_.assign(states_.size(), 0);
    result_.unobtainable = IndicatorVector(m);
  }

  ClusterResult run() {
    if (hooks_.audit) hooks_.audit->initial_missing = total_missing();
    begin_round(0);
    std::size_t processed = 0;
    while (!finished_ && !queue_.empty()) {
      Event e = queue_.top();
      queue_.pop();
      if (++processed > hooks_.max_events) throw std::runtime_error("cluster simulation exceeded its event budget");
      if (hooks_.audit) hooks_.audit->event_times.push_back(e.time_us);
      now_ = e.time_us;
      switch (e.kind) {
        case EventKind::tx_end: on_tx_end(); break;
        case EventKind::channel_idle_check: on_idle_check(e); break;
        case EventKind::backoff_expired: on_backoff_expired(e); break;
        case EventKind::tx_start: on_tx_start(); break;
        case EventKind::timeout: on_timeout(e); break;
      }
      audit_states();
    }
    if (!finished_) throw std::logic_error("event queue drained before the cluster finished");
    for (const auto& s : states_) result_.unobtainable |= s.unobtainable;
    result_.completed = std::all_of(states_.begin(), states_.end(), [](const auto& s) { return s.holdings.all(); });
    return result_;
  }

private:
  void push(Micros t, EventKind k, std::size_t local, std::uint64_t token) {
    queue_.push(Event{t, k, local, token, seq_++});
  }

  void trace(UavId uav, std::string_view what, const std::string& details = {}) {
    if (hooks_.trace) hooks_.trace->add(now_, uav, what, details);
  }

  void trace_draw(const UavProtocolState& s, const BackoffDraw& d, std::string_view role) {
    if (!hooks_.trace) return;
    std::string details = std::string(role);
    if (d.subwindow) details += " k=" + std::to_string(*d.subwindow);
    details += " us=" + std::to_string(d.duration_us);
    if (role == "reply" && s.active_request) details += " to=" + uav_label(s.active_request->sender);
    trace(s.id, "backoff", details);
  }

  std::size_t total_missing() const {
    std::size_t n = 0;
    for (const auto& s : states_) n += s.holdings.size() - s.holdings.count();
    return n;
  }

  std::optional<BackoffDraw>& counting_draw(UavProtocolState& s) {
    return transaction_ ? s.reply_backoff : s.request_backoff;
  }

  void begin_round(Micros t) {
    collided_in_round_ = false;
    for (auto& s : states_) {
      s.request_backoff.reset();
      if (auto d = decide_request(s, policy_, rng_)) trace_draw(s, *d, "request");
    }
    if (std::all_of(states_.begin(), states_.end(), [](const auto& s) { return s.done(); })) {
      finished_ = true;
      result_.delay_us = t;
      return;
    }
    go_idle(t);
  }

  void go_idle(Micros t) {
    busy_ = false;
    ++epoch_;
    push(t + timing_.difs_us, EventKind::channel_idle_check, 0, epoch_);
  }

  void on_idle_check(const Event& e) {
    if (busy_ || e.token != epoch_) return;
    count_start_ = now_;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      auto& s = states_[i];
      if (auto& d = counting_draw(s)) {
        ++gen_[i];
        push(now_ + d->duration_us, EventKind::backoff_expired, i, gen_[i]);
        if (!transaction_) s.phase = Phase::request_backoff;
      }
    }
    if (transaction_) push(now_ + timing_.cw_total_us, EventKind::timeout, 0, epoch_);
  }

  void on_backoff_expired(const Event& e) {
    if (busy_ || e.token != gen_[e.subject]) return;
    ready_.push_back(e.subject);
    push(now_, EventKind::tx_start, e.subject, 0);
  }

  void on_tx_start() {
    if (ready_.empty()) return;  // batch already started by an earlier tx_start at this instant
    const Micros elapsed = now_ - count_start_;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      auto& s = states_[i];
      auto& d = counting_draw(s);
      if (!d) continue;
      ++gen_[i];
      if (std::find(ready_.begin(), ready_.end(), i) != ready_.end()) {
        d->duration_us = 0;
      } else {
        d->duration_us -= elapsed;
        if (!transaction_) s.phase = Phase::suspended;
      }
    }
    busy_ = true;
    ++epoch_;

    air_.clear();
    Micros longest = 0;
    for (std::size_t i : ready_) {
      auto& s = states_[i];
      Frame f = transaction_ ? build_reply(s, *transaction_) : build_request(s);
      const Micros dur = frame_duration(f.kind, f.packets.count(), timing_);
      longest = std::max(longest, dur);
      std::string details = std::string(to_string(f.kind));
      if (f.in_reply_to) details += " to=" + uav_label(*f.in_reply_to);
      trace(s.id, "tx_start", details + " " + packet_labels(f.packets));
      s.phase = Phase::transmitting;
      air_.push_back({i, std::move(f)});
    }
    if (air_.size() == 1 && !transaction_ && hooks_.audit) {
      pending_record_ = ExchangeRecord{};
      pending_record_.request_start_us = now_;
      pending_record_.requester = states_[air_.front().local].id;
      pending_record_.requester_wanted = air_.front().frame.packets.count();
      for (const auto& s : states_) pending_record_.max_wanted = std::max(pending_record_.max_wanted, s.wanted().count());
    }
    air_start_ = now_;
    ready_.clear();
    push(now_ + longest, EventKind::tx_end, 0, 0);
  }

  void on_tx_end() {
    if (air_.size() > 1) {
      handle_collision();
      return;
    }
    const auto [local, frame] = air_.front();
    air_.clear();
    if (hooks_.audit) hooks_.audit->air_intervals.emplace_back(air_start_, now_);
    trace(frame.sender, "tx_end", std::string(to_string(frame.kind)));
    if (frame.kind == FrameKind::request) {
      open_transaction(local, frame);
    } else {
      close_transaction(local, frame);
    }
  }

  void handle_collision() {
    ++result_.collision_count;
    collided_in_round_ = true;
    for (auto& [local, frame] : air_) {
      auto& s = states_[local];
      trace(s.id, "collision", std::string(to_string(frame.kind)));
      if (frame.kind == FrameKind::request) {
        if (auto d = decide_request(s, policy_, rng_)) trace_draw(s, *d, "request");
      } else {
        s.reply_backoff = policy_.draw(frame.packets.count(), rng_, s.id);
        s.settle();
        trace_draw(s, *s.reply_backoff, "reply");
      }
    }
    air_.clear();
    go_idle(now_);
  }

  void open_transaction(std::size_t requester, const Frame& request) {
    auto& r = states_[requester];
    r.request_backoff.reset();
    r.settle();
    if (!r.done()) r.phase = Phase::suspended;
    transaction_ = request;
    replies_in_transaction_ = 0;
    if (hooks_.audit) {
      pending_record_.missing_before = total_missing();
      for (const auto& s : states_) {
        if (s.id != r.id) pending_record_.max_supply = std::max(pending_record_.max_supply, (request.packets & s.holdings).count());
      }
    }
    for (auto& s : states_) {
      if (auto d = decide_reply(s, request, policy_, rng_)) trace_draw(s, *d, "reply");
      if (!s.reply_backoff && s.request_backoff) s.phase = Phase::suspended;
    }
    go_idle(now_);
  }

  void close_transaction(std::size_t replier, const Frame& reply) {
    ++result_.exchange_count;
    ++replies_in_transaction_;
    std::vector<IndicatorVector> before;
    if (hooks_.audit) {
      for (const auto& s : states_) before.push_back(s.holdings);
    }
    for (auto& s : states_) {
      s.request_backoff.reset();  // round ends; everyone redraws below
      const bool was_full = s.holdings.all();
      const IndicatorVector gained = absorb_reply(s, reply, policy_, rng_);
      if (!gained.none()) trace(s.id, "absorb", packet_labels(gained));
      if (cancel_reply_if_answered(s, reply)) trace(s.id, "cancel", "to=" + uav_label(*reply.in_reply_to));
      if (!was_full && s.holdings.all()) trace(s.id, "full_set");
    }
    auto& p = states_[replier];
    p.reply_backoff.reset();
    p.active_request.reset();
    p.settle();
    if (hooks_.audit) {
      auto& a = *hooks_.audit;
      for (std::size_t i = 0; i < states_.size(); ++i) {
        if (!before[i].is_subset_of(states_[i].holdings)) ++a.holdings_regressions;
      }
      pending_record_.replier = p.id;
      pending_record_.carried = reply.packets.count();
      pending_record_.missing_after = total_missing();
      pending_record_.replies_delivered = replies_in_transaction_;
      pending_record_.after_collision = collided_in_round_;
      a.exchanges.push_back(pending_record_);
    }
    transaction_.reset();
    begin_round(now_);
  }

  void on_timeout(const Event& e) {
    if (busy_ || !transaction_ || e.token != epoch_) return;
    ++result_.timeout_count;
    const UavId requester = transaction_->sender;
    for (auto& s : states_) {
      if (s.id != requester) continue;
      const IndicatorVector lost = mark_unobtainable(s, *transaction_);
      trace(s.id, "timeout", packet_labels(transaction_->packets));
      trace(s.id, "unobtainable", packet_labels(lost));
    }
    transaction_.reset();
    begin_round(now_);
  }

  void audit_states() {
    if (!hooks_.audit) return;
    for (const auto& s : states_) {
      std::string v = check_state(s);
      if (!v.empty()) {
        if (hooks_.audit->state_violations++ == 0) hooks_.audit->first_violation = uav_label(s.id) + ": " + v;
      }
    }
  }

  struct OnAir {
    std::size_t local;
    Frame frame;
  };

  TimingConfig timing_;
  Rng& rng_;
  SimHooks hooks_;
  DrawPolicy policy_;
  std::vector<UavProtocolState> states_;
  std::vector<std::uint64_t> gen_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  std::uint64_t epoch_ = 0;
  Micros now_ = 0;
  Micros count_start_ = 0;
  Micros air_start_ = 0;
  bool busy_ = false;
  bool finished_ = false;
  std::vector<std::size_t> ready_;
  std::vector<OnAir> air_;
  std::optional<Frame> transaction_;
  std::size_t replies_in_transaction_ = 0;
  bool collided_in_round_ = false;
  ExchangeRecord pending_record_;
  ClusterResult result_;
};

}  // namespace detail

/// Simulates data exchange among `members` on one channel until every member
/// either holds all packets or has declared its residual packets unobtainable.
/// `holdings` is indexed by UavId.
inline ClusterResult run_cluster_exchange(std::span<const UavId> members, std::span<const IndicatorVector> holdings,
                                          const TimingConfig& timing, Scheme scheme, Rng& rng, SimHooks hooks = {}) {
  return detail::ClusterChannel(members, holdings, timing, scheme, rng, hooks).run();
}

inline std::string cluster_stream_label(ClusterId c) { return std::string(streams::backoff) + "/cluster-" + std::to_string(c); }

/// Partition used by a scheme: the clustering for `proposed`, one cluster of
/// every UAV otherwise.
inline ClusterAssignment assign_clusters(const ScenarioConfig& config, std::span<const IndicatorVector> receipts,
                                         std::uint64_t run_index) {
  Rng tie_break(config.seed, run_index, streams::tie_break);
  const std::size_t n = config.scheme == Scheme::proposed ? config.num_clusters : 1;
  return cluster_network(receipts, n, tie_break);
}

inline std::vector<IndicatorVector> scenario_receipts(const ScenarioConfig& config, std::uint64_t run_index) {
  Rng rng(config.seed, run_index, streams::bs_delivery);
  return sample_initial_receipts(config.num_uavs, config.num_packets, config.delivery_rate, rng);
}

/// Runs every cluster of an already-sampled scenario. Clusters use disjoint
/// frequencies, so each is simulated independently and the run reports the
/// worst cluster. When `traces` is given it receives one log per cluster.
inline RunResult run_scenario_with(const ScenarioConfig& config, std::uint64_t run_index,
                                   std::span<const IndicatorVector> receipts,
                                   std::vector<TraceLog>* traces = nullptr) {
  RunResult out;
  out.assignment = assign_clusters(config, receipts, run_index);
  out.all_completed = true;
  if (traces) traces->assign(out.assignment.num_clusters(), TraceLog{});
  for (ClusterId c = 0; c < out.assignment.num_clusters(); ++c) {
    Rng rng(config.seed, run_index, cluster_stream_label(c));
    SimHooks hooks;
    hooks.trace = traces ? &(*traces)[c] : nullptr;
    const auto& members = out.assignment.members[c];
    ClusterResult r = run_cluster_exchange(members, receipts, config.timing, config.scheme, rng, hooks);
    out.reported_exchanges = std::max(out.reported_exchanges, r.exchange_count);
    out.reported_delay_us = std::max(out.reported_delay_us, r.delay_us);
    out.all_completed = out.all_completed && r.completed;
    out.clusters.push_back(std::move(r));
  }
  return out;
}

inline RunResult run_scenario(const ScenarioConfig& config, std::uint64_t run_index,
                              std::vector<TraceLog>* traces = nullptr) {
  config.validate();
  const auto receipts = scenario_receipts(config, run_index);
  return run_scenario_with(config, run_index, receipts, traces);
}

}  // namespace uavex

#endif  // UAVEX_SIMULATOR_HPP
