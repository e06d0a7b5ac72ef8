// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Domain types shared by every uavex module: packet indicator vectors,
/// identifiers, scenario configuration and labelled random streams.

#ifndef UAVEX_CORE_HPP
#define UAVEX_CORE_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uavex {

using UavId = std::size_t;
using ClusterId = std::size_t;
using PacketId = std::size_t;  ///< 0-indexed; printed as w1..wM
using Micros = std::int64_t;

/// Raised when an argument violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a scenario cannot be realised (e.g. more clusters than UAVs).
class Infeasible : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Fixed-length binary vector over the M broadcast packets. Bit m is set iff
/// packet m is held. Also used as a packet-id mask for frame contents.
class IndicatorVector {
public:
  IndicatorVector() = default;

  explicit IndicatorVector(std::size_t length, bool value = false)
      : words_((length + 63) / 64, value ? ~std::uint64_t{0} : 0), size_(length) {
    trim();
  }

  /// Parses a string of '0'/'1' characters, position 0 first.
  static IndicatorVector from_string(std::string_view bits) {
    IndicatorVector v(bits.size());
    for (std::size_t m = 0; m < bits.size(); ++m) {
      if (bits[m] == '1') {
        v.set(m);
      } else if (bits[m] != '0') {
        throw InvalidInput("indicator vector string must contain only '0' and '1'");
      }
    }
    return v;
  }

  static IndicatorVector from_ids(std::size_t length, const std::vector<PacketId>& ids) {
    IndicatorVector v(length);
    for (PacketId id : ids) {
      if (id >= length) throw InvalidInput("packet id out of range");
      v.set(id);
    }
    return v;
  }

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t m) const {
    if (m >= size_) throw InvalidInput("packet index out of range");
    return (words_[m / 64] >> (m % 64)) & 1U;
  }
  bool operator[](std::size_t m) const { return test(m); }

  IndicatorVector& set(std::size_t m, bool value = true) {
    if (m >= size_) throw InvalidInput("packet index out of range");
    const std::uint64_t bit = std::uint64_t{1} << (m % 64);
    if (value) {
      words_[m / 64] |= bit;
    } else {
      words_[m / 64] &= ~bit;
    }
    return *this;
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool all() const noexcept { return count() == size_; }
  bool none() const noexcept { return count() == 0; }

  /// Positions of the set bits in ascending order.
  std::vector<PacketId> ids() const {
    std::vector<PacketId> out;
    out.reserve(count());
    for (std::size_t m = 0; m < size_; ++m) {
      if (test(m)) out.push_back(m);
    }
    return out;
  }

  IndicatorVector operator~() const {
    IndicatorVector r(*this);
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  IndicatorVector& operator|=(const IndicatorVector& o) { return combine(o, [](auto a, auto b) { return a | b; }); }
  IndicatorVector& operator&=(const IndicatorVector& o) { return combine(o, [](auto a, auto b) { return a & b; }); }
  IndicatorVector& operator^=(const IndicatorVector& o) { return combine(o, [](auto a, auto b) { return a ^ b; }); }

  friend IndicatorVector operator|(IndicatorVector a, const IndicatorVector& b) { return a |= b; }
  friend IndicatorVector operator&(IndicatorVector a, const IndicatorVector& b) { return a &= b; }
  friend IndicatorVector operator^(IndicatorVector a, const IndicatorVector& b) { return a ^= b; }

  /// True when every set bit of *this is also set in `other`.
  bool is_subset_of(const IndicatorVector& other) const {
    require_same_length(other);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

  /// Hamming distance (number of differing positions).
  std::size_t distance(const IndicatorVector& other) const {
    require_same_length(other);
    std::size_t n = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      n += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
    }
    return n;
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t m = 0; m < size_; ++m) {
      if (test(m)) s[m] = '1';
    }
    return s;
  }

  friend bool operator==(const IndicatorVector&, const IndicatorVector&) = default;

private:
  template <class Op>
  IndicatorVector& combine(const IndicatorVector& o, Op op) {
    require_same_length(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = op(words_[i], o.words_[i]);
    return *this;
  }

  void require_same_length(const IndicatorVector& o) const {
    if (o.size_ != size_) throw InvalidInput("indicator vectors differ in length");
  }

  void trim() noexcept {
    if (size_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }
  }

  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Element-wise OR of a cluster vector with a newly merged UAV vector.
inline IndicatorVector or_update(const IndicatorVector& cluster_vec, const IndicatorVector& uav_vec) {
  return cluster_vec | uav_vec;
}

/// Packet ids whose bit is 0, ascending.
inline std::vector<PacketId> missing_set(const IndicatorVector& v) { return (~v).ids(); }

/// "{w1,w3}" style label for a packet set (1-indexed).
inline std::string packet_labels(const IndicatorVector& mask) {
  std::string s = "{";
  bool first = true;
  for (PacketId id : mask.ids()) {
    if (!first) s += ',';
    s += 'w' + std::to_string(id + 1);
    first = false;
  }
  return s + '}';
}

enum class Scheme { proposed, mechanism_only, baseline_csma };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::mechanism_only: return "mechanism_only";
    case Scheme::baseline_csma: return "baseline_csma";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "proposed") return Scheme::proposed;
  if (name == "mechanism_only") return Scheme::mechanism_only;
  if (name == "baseline_csma" || name == "baseline") return Scheme::baseline_csma;
  throw InvalidInput("unknown scheme '" + std::string(name) + "'");
}

/// Contention and air-time constants, all integer microseconds.
struct TimingConfig {
  Micros difs_us = 34;
  Micros cw_total_us = 9207;  ///< T; DIFS + T spans the 34..9241 us sensing range
  Micros preamble_us = 20;    ///< 8 short training + 8 long training + 4 signal
  Micros payload_us_per_packet = 2000;
  Micros request_payload_us = 0;  ///< requests carry no data packets by default

  void validate(std::size_t num_packets) const {
    if (difs_us <= 0 || cw_total_us <= 0 || preamble_us <= 0 || payload_us_per_packet <= 0 ||
        request_payload_us < 0) {
      throw InvalidInput("timing values must be positive integers (us)");
    }
    if (cw_total_us < static_cast<Micros>(num_packets)) {
      throw InvalidInput("contention window must be at least one microsecond per subwindow");
    }
  }
};

struct ScenarioConfig {
  std::size_t num_uavs = 10;
  std::size_t num_packets = 6;
  double delivery_rate = 0.7;
  std::size_t num_clusters = 3;
  Scheme scheme = Scheme::proposed;
  std::uint64_t seed = 42;
  std::size_t runs = 500;
  TimingConfig timing{};

  void validate() const {
    if (num_uavs == 0) throw InvalidInput("num_uavs must be positive");
    if (num_packets == 0) throw InvalidInput("num_packets must be positive");
    if (!(delivery_rate >= 0.0 && delivery_rate <= 1.0)) throw InvalidInput("delivery_rate must lie in [0,1]");
    if (num_clusters == 0) throw InvalidInput("num_clusters must be positive");
    if (runs == 0) throw InvalidInput("runs must be positive");
    timing.validate(num_packets);
  }
};

/// Deterministic stream keyed by (master seed, run index, label). Streams with
/// different labels are decorrelated so consumers cannot perturb each other.
/// Single owner; not thread-safe.
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t run_index, std::string_view label) {
    const std::uint64_t h = fnv1a(label);
    std::seed_seq seq{lo(seed), hi(seed), lo(run_index), hi(run_index), lo(h), hi(h)};
    engine_.seed(seq);
  }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw InvalidInput("empty integer range");
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  std::size_t index(std::size_t n) {
    if (n == 0) throw InvalidInput("cannot pick from an empty range");
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return std::bernoulli_distribution(p)(engine_);
  }

  std::uint64_t next() { return engine_(); }

private:
  static std::uint32_t lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
  static std::uint32_t hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::mt19937_64 engine_;
};

namespace streams {
inline constexpr std::string_view bs_delivery = "bs-delivery";
inline constexpr std::string_view backoff = "backoff";
inline constexpr std::string_view tie_break = "tie-break";
}  // namespace streams

}  // namespace uavex

#endif  // UAVEX_CORE_HPP
