// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Per-UAV request/reply state machine.
///
/// A UAV with obtainable lost packets contends to broadcast a request listing
/// them; priority rises with the number of lost packets. Every other cluster
/// member holding at least one requested packet contends to reply, with
/// priority rising with how many of the requested packets it can supply. The
/// first reply on air answers the request; all members absorb whatever it
/// carries and the remaining repliers stand down.

#ifndef UAVEX_PROTOCOL_HPP
#define UAVEX_PROTOCOL_HPP

#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uavex/core.hpp"
#include "uavex/mac.hpp"

namespace uavex {

struct Frame {
  FrameKind kind = FrameKind::request;
  UavId sender = 0;
  IndicatorVector packets;             ///< wanted ids (request) or carried ids (reply)
  std::optional<UavId> in_reply_to;    ///< requester, replies only

  friend bool operator==(const Frame&, const Frame&) = default;
};

enum class Phase { idle, request_backoff, suspended, reply_backoff, transmitting, done };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::idle: return "idle";
    case Phase::request_backoff: return "request_backoff";
    case Phase::suspended: return "suspended";
    case Phase::reply_backoff: return "reply_backoff";
    case Phase::transmitting: return "transmitting";
    case Phase::done: return "done";
  }
  return "?";
}

/// Selects the backoff rule: subwindow priority draws, or uniform draws over
/// the whole window for the CSMA/CA baseline.
struct DrawPolicy {
  std::size_t num_packets = 0;
  Micros window_us = 0;
  bool prioritized = true;

  static DrawPolicy for_scheme(Scheme s, std::size_t num_packets, const TimingConfig& t) {
    return {num_packets, t.cw_total_us, s != Scheme::baseline_csma};
  }

  BackoffDraw draw(std::size_t m_prime, Rng& rng, UavId owner) const {
    if (prioritized) return draw_backoff(num_packets, m_prime, window_us, rng, owner);
    return draw_baseline_backoff(window_us, rng, owner);
  }
};

struct UavProtocolState {
  UavId id = 0;
  IndicatorVector holdings;
  IndicatorVector unobtainable;
  Phase phase = Phase::idle;
  std::optional<BackoffDraw> request_backoff;  ///< duration_us holds the remaining count
  std::optional<BackoffDraw> reply_backoff;
  std::optional<Frame> active_request;          ///< request this UAV is contending to answer

  UavProtocolState() = default;
  UavProtocolState(UavId uav, IndicatorVector held)
      : id(uav), holdings(std::move(held)), unobtainable(holdings.size()) {
    settle();
  }

  /// Lost packets still worth requesting.
  IndicatorVector wanted() const { return ~holdings & ~unobtainable; }
  bool done() const { return wanted().none(); }

  /// Recomputes phase from the pending draws after a transition.
  void settle() {
    if (reply_backoff) {
      phase = Phase::reply_backoff;
    } else if (done()) {
      phase = Phase::done;
    } else if (request_backoff) {
      phase = Phase::request_backoff;
    } else {
      phase = Phase::idle;
    }
  }
};

/// Draws a request backoff for the current number of wanted packets, or
/// returns nothing (and marks the UAV done) when nothing is left to request.
inline std::optional<BackoffDraw> decide_request(UavProtocolState& state, const DrawPolicy& policy, Rng& rng) {
  const std::size_t m_prime = state.wanted().count();
  if (m_prime == 0) {
    state.request_backoff.reset();
    state.settle();
    return std::nullopt;
  }
  state.request_backoff = policy.draw(m_prime, rng, state.id);
  state.settle();
  return state.request_backoff;
}

/// Request frames are built from the wanted set at transmission time.
inline Frame build_request(const UavProtocolState& state) {
  Frame f{FrameKind::request, state.id, state.wanted(), std::nullopt};
  if (f.packets.none()) throw std::logic_error("UAV " + std::to_string(state.id) + " has nothing to request");
  return f;
}

inline std::optional<BackoffDraw> decide_reply(UavProtocolState& state, const Frame& request, const DrawPolicy& policy,
                                               Rng& rng) {
  if (request.kind != FrameKind::request || request.sender == state.id) return std::nullopt;
  const std::size_t supply = (request.packets & state.holdings).count();
  if (supply == 0) return std::nullopt;
  state.reply_backoff = policy.draw(supply, rng, state.id);
  state.active_request = request;
  state.settle();
  return state.reply_backoff;
}

inline Frame build_reply(const UavProtocolState& state, const Frame& request) {
  IndicatorVector carried = request.packets & state.holdings;
  if (carried.none()) {
    throw std::logic_error("UAV " + std::to_string(state.id) + " holds none of the requested packets");
  }
  return {FrameKind::reply, state.id, std::move(carried), request.sender};
}

/// Takes every carried packet into holdings. A pending request draw is
/// replaced when the number of wanted packets changed.
inline IndicatorVector absorb_reply(UavProtocolState& state, const Frame& reply, const DrawPolicy& policy, Rng& rng) {
  if (reply.kind != FrameKind::reply || reply.sender == state.id) return IndicatorVector(state.holdings.size());
  const std::size_t before = state.wanted().count();
  const IndicatorVector gained = reply.packets & ~state.holdings;
  state.holdings |= reply.packets;
  state.unobtainable &= ~reply.packets;
  const std::size_t after = state.wanted().count();
  if (state.request_backoff && after != before) {
    if (after == 0) {
      state.request_backoff.reset();
    } else {
      state.request_backoff = policy.draw(after, rng, state.id);
    }
  }
  state.settle();
  return gained;
}

/// Abandons a pending reply once another UAV's reply to the same request is
/// observed. Returns true when the reply was cancelled.
inline bool cancel_reply_if_answered(UavProtocolState& state, const Frame& observed) {
  if (!state.reply_backoff || !state.active_request) return false;
  if (observed.kind != FrameKind::reply || observed.sender == state.id) return false;
  if (observed.in_reply_to != state.active_request->sender) return false;
  state.reply_backoff.reset();
  state.active_request.reset();
  state.settle();
  return true;
}

/// Called when a request met DIFS + T of silence: nobody in the cluster holds
/// any of its packets, so they are excluded from further requests.
inline IndicatorVector mark_unobtainable(UavProtocolState& state, const Frame& request_sent) {
  const IndicatorVector lost = request_sent.packets & ~state.holdings;
  state.unobtainable |= lost;
  state.request_backoff.reset();
  state.settle();
  return lost;
}

/// Empty when the state invariants hold, otherwise a description.
inline std::string check_state(const UavProtocolState& s) {
  if (s.phase == Phase::done && !s.done()) return "phase done with obtainable packets missing";
  if (!s.reply_backoff && s.phase != Phase::transmitting && s.done() && s.phase != Phase::done) {
    return "nothing left to request but phase is " + std::string(to_string(s.phase));
  }
  if (s.phase == Phase::request_backoff && (!s.request_backoff || s.request_backoff->duration_us <= 0)) {
    return "request backoff phase without a positive pending count";
  }
  if (s.phase == Phase::reply_backoff && (!s.reply_backoff || s.reply_backoff->duration_us <= 0)) {
    return "reply backoff phase without a positive pending count";
  }
  if ((s.holdings & s.unobtainable).count() != 0) return "held packet marked unobtainable";
  return {};
}

inline std::string uav_label(UavId id) { return "U" + std::to_string(id + 1); }

/// Event trace, one line per event: "<time_us> U<uav> <event> <details>".
/// UAVs and packets are printed 1-indexed.
class TraceLog {
public:
  void add(Micros time_us, UavId uav, std::string_view event, std::string_view details = {}) {
    std::ostringstream os;
    os << std::setw(8) << time_us << ' ' << uav_label(uav) << ' ' << event;
    if (!details.empty()) os << ' ' << details;
    lines_.push_back(os.str());
  }

  const std::vector<std::string>& lines() const { return lines_; }

  std::string str() const {
    std::string out;
    for (const auto& l : lines_) out += l + '\n';
    return out;
  }

private:
  std::vector<std::string> lines_;
};

}  // namespace uavex

#endif  // UAVEX_PROTOCOL_HPP
