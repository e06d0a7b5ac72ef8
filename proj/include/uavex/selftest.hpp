// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Randomised invariant checks over clustering, backoff and the exchange
/// simulation. Used by `uavex selftest`.

#ifndef UAVEX_SELFTEST_HPP
#define UAVEX_SELFTEST_HPP

#include <string>
#include <vector>

#include "uavex/clustering.hpp"
#include "uavex/mac.hpp"
#include "uavex/simulator.hpp"

namespace uavex {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string detail;  ///< first violation, if any

  void fail(std::string what) {
    if (passed) detail = std::move(what);
    passed = false;
  }
};

/// A random clustering instance: U in [1, max_uavs], M in [1, max_packets],
/// rho in [0.3, 0.9], N in [1, U].
struct RandomInstance {
  std::vector<IndicatorVector> vectors;
  std::size_t num_clusters = 1;
};

inline RandomInstance random_instance(Rng& rng, std::size_t max_uavs, std::size_t max_packets) {
  RandomInstance inst;
  const auto u = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_uavs)));
  const auto m = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_packets)));
  const double rho = 0.3 + 0.6 * static_cast<double>(rng.uniform_int(0, 1000)) / 1000.0;
  inst.vectors = sample_initial_receipts(u, m, rho, rng);
  inst.num_clusters = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(u)));
  return inst;
}

inline bool clustering_feasible(std::size_t u, std::size_t n) {
  return n >= 1 && n <= u && !(n > 1 && n % 2 == 1 && n + 1 > u);
}

inline CheckResult check_clustering_invariants(std::uint64_t seed, std::size_t instances) {
  CheckResult r;
  r.name = "clustering invariants";
  Rng gen(seed, 0, "selftest/clustering");
  for (std::size_t k = 0; k < instances; ++k) {
    const auto inst = random_instance(gen, 30, 16);
    const std::size_t u = inst.vectors.size();
    if (!clustering_feasible(u, inst.num_clusters)) {
      Rng tb(seed, k, streams::tie_break);
      try {
        cluster_network(inst.vectors, inst.num_clusters, tb);
        r.fail("instance " + std::to_string(k) + ": infeasible N accepted");
      } catch (const Infeasible&) {
      }
      ++r.cases;
      continue;
    }
    Rng a(seed, k, streams::tie_break);
    Rng b(seed, k, streams::tie_break);
    const auto first = cluster_network(inst.vectors, inst.num_clusters, a);
    const auto second = cluster_network(inst.vectors, inst.num_clusters, b);
    if (first != second) r.fail("instance " + std::to_string(k) + ": not deterministic");
    if (first.num_clusters() != inst.num_clusters) r.fail("instance " + std::to_string(k) + ": wrong cluster count");
    const std::string v = check_assignment(first, inst.vectors);
    if (!v.empty()) r.fail("instance " + std::to_string(k) + ": " + v);
    ++r.cases;
  }
  return r;
}

inline CheckResult check_backoff_priority(std::uint64_t seed, std::size_t pairs, Micros window_us = 9207) {
  CheckResult r;
  r.name = "backoff priority";
  Rng rng(seed, 0, "selftest/backoff");
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto m = static_cast<std::size_t>(rng.uniform_int(2, 32));
    auto a = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(m)));
    auto b = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(m) - 1));
    if (b >= a) ++b;
    const Micros window = std::max<Micros>(window_us, static_cast<Micros>(m));
    const auto da = draw_backoff(m, a, window, rng);
    const auto db = draw_backoff(m, b, window, rng);
    const bool ok = a > b ? da.duration_us < db.duration_us : db.duration_us < da.duration_us;
    if (!ok) r.fail("M=" + std::to_string(m) + " counts " + std::to_string(a) + "/" + std::to_string(b));
    ++r.cases;
  }
  return r;
}

inline CheckResult check_subwindow_tiling(std::size_t max_packets = 32) {
  CheckResult r;
  r.name = "subwindow tiling";
  for (std::size_t m = 1; m <= max_packets; ++m) {
    for (Micros t : {Micros(m), Micros(m) + 1, Micros(2 * m + 3), Micros(97), Micros(1000), Micros(9207),
                     Micros(9241), Micros(10000)}) {
      if (t < static_cast<Micros>(m)) continue;
      Micros expect_lo = 0;
      for (std::size_t k = 1; k <= m; ++k) {
        const auto b = subwindow_bounds(m, k, t);
        if (b.lo_us != expect_lo || b.hi_us <= b.lo_us) {
          r.fail("M=" + std::to_string(m) + " T=" + std::to_string(t) + " k=" + std::to_string(k));
        }
        expect_lo = b.hi_us;
      }
      if (expect_lo != t) r.fail("M=" + std::to_string(m) + " T=" + std::to_string(t) + " does not end at T");
      ++r.cases;
    }
  }
  return r;
}

/// Simulates random clusters under every scheme and checks the audit trail.
inline CheckResult check_protocol_invariants(std::uint64_t seed, std::size_t clusters) {
  CheckResult r;
  r.name = "protocol invariants";
  Rng gen(seed, 0, "selftest/protocol");
  const Scheme schemes[] = {Scheme::mechanism_only, Scheme::baseline_csma};
  for (std::size_t k = 0; k < clusters; ++k) {
    const auto inst = random_instance(gen, 12, 12);
    std::vector<UavId> members(inst.vectors.size());
    for (UavId i = 0; i < members.size(); ++i) members[i] = i;
    const Scheme scheme = schemes[k % 2];
    SimAudit audit;
    Rng rng(seed, k, streams::backoff);
    ClusterResult res;
    const std::string tag = "cluster " + std::to_string(k) + ": ";
    try {
      res = run_cluster_exchange(members, inst.vectors, TimingConfig{}, scheme, rng, {nullptr, &audit, 5'000'000});
    } catch (const std::exception& e) {
      r.fail(tag + "did not terminate (" + e.what() + ")");
      continue;
    }
    if (audit.holdings_regressions) r.fail(tag + "holdings lost a packet");
    if (audit.state_violations) r.fail(tag + audit.first_violation);
    if (res.exchange_count > audit.initial_missing) r.fail(tag + "more exchanges than initially missing packets");
    for (const auto& x : audit.exchanges) {
      if (x.replies_delivered != 1) r.fail(tag + "request answered by more than one reply");
      if (x.missing_after + 1 > x.missing_before) r.fail(tag + "transaction recovered nothing");
      if (scheme != Scheme::baseline_csma && !x.after_collision) {
        if (x.carried < x.max_supply) r.fail(tag + "winning reply was not supply-maximal");
        if (x.requester_wanted < x.max_wanted) r.fail(tag + "requester did not have the most wanted packets");
      }
    }
    for (std::size_t i = 1; i < audit.event_times.size(); ++i) {
      if (audit.event_times[i] < audit.event_times[i - 1]) r.fail(tag + "event time went backwards");
    }
    for (std::size_t i = 1; i < audit.air_intervals.size(); ++i) {
      if (audit.air_intervals[i].first < audit.air_intervals[i - 1].second) r.fail(tag + "frames overlapped on air");
    }
    IndicatorVector all(inst.vectors.front().size());
    for (const auto& v : inst.vectors) all |= v;
    if (res.completed != all.all()) r.fail(tag + "completion flag disagrees with the cluster union");
    ++r.cases;
  }
  return r;
}

inline std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  return {check_clustering_invariants(seed, 1000), check_backoff_priority(seed, 10000), check_subwindow_tiling(),
          check_protocol_invariants(seed, 1000)};
}

}  // namespace uavex

#endif  // UAVEX_SELFTEST_HPP
