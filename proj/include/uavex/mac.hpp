// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Contention window model. The window (0, T] is cut into M subwindows; a node
/// with m' relevant packets (lost packets for a requester, requested packets it
/// holds for a replier) draws its backoff uniformly from subwindow M - m' + 1.
/// Time is discretised to integer microseconds, so subwindow k covers the
/// integers floor((k-1)T/M)+1 .. floor(kT/M).

#ifndef UAVEX_MAC_HPP
#define UAVEX_MAC_HPP

#include <cstddef>
#include <optional>
#include <string>

#include "uavex/core.hpp"

namespace uavex {

struct BackoffDraw {
  UavId owner = 0;
  Micros duration_us = 0;
  std::optional<std::size_t> subwindow;  ///< 1..M; empty for baseline draws

  friend bool operator==(const BackoffDraw&, const BackoffDraw&) = default;
};

/// Half-open integer range (lo_us, hi_us].
struct SubwindowBounds {
  Micros lo_us = 0;
  Micros hi_us = 0;

  friend bool operator==(const SubwindowBounds&, const SubwindowBounds&) = default;
};

inline std::size_t subwindow_for_count(std::size_t num_packets, std::size_t m_prime) {
  if (m_prime < 1 || m_prime > num_packets) {
    throw InvalidInput("packet count " + std::to_string(m_prime) + " outside 1.." + std::to_string(num_packets));
  }
  return num_packets - m_prime + 1;
}

inline SubwindowBounds subwindow_bounds(std::size_t num_packets, std::size_t k, Micros window_us) {
  if (num_packets == 0 || k < 1 || k > num_packets) throw InvalidInput("subwindow index out of range");
  if (window_us < static_cast<Micros>(num_packets)) throw InvalidInput("window shorter than subwindow count");
  const auto m = static_cast<Micros>(num_packets);
  const auto kk = static_cast<Micros>(k);
  return {(kk - 1) * window_us / m, kk * window_us / m};
}

inline BackoffDraw draw_backoff(std::size_t num_packets, std::size_t m_prime, Micros window_us, Rng& rng,
                                UavId owner = 0) {
  const std::size_t k = subwindow_for_count(num_packets, m_prime);
  const auto [lo, hi] = subwindow_bounds(num_packets, k, window_us);
  return {owner, rng.uniform_int(lo + 1, hi), k};
}

inline BackoffDraw draw_baseline_backoff(Micros window_us, Rng& rng, UavId owner = 0) {
  if (window_us < 1) throw InvalidInput("window must be at least 1 us");
  return {owner, rng.uniform_int(1, window_us), std::nullopt};
}

enum class FrameKind { request, reply };

inline std::string_view to_string(FrameKind k) { return k == FrameKind::request ? "request" : "reply"; }

/// Air time of a frame: preamble plus 2 ms per carried data packet for
/// replies, preamble plus the configured request payload for requests.
inline Micros frame_duration(FrameKind kind, std::size_t carried_packets, const TimingConfig& timing = {}) {
  if (kind == FrameKind::request) return timing.preamble_us + timing.request_payload_us;
  if (carried_packets == 0) throw InvalidInput("a reply must carry at least one packet");
  return timing.preamble_us + static_cast<Micros>(carried_packets) * timing.payload_us_per_packet;
}

}  // namespace uavex

#endif  // UAVEX_MAC_HPP
