// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Balanced agglomerative clustering of UAVs over packet indicator vectors.
///
/// Initialization extracts minimum-distance UAV pairs and splits each pair
/// across two new singleton clusters, so UAVs holding similar packets start
/// apart. Merging then grows every cluster by at most one UAV per iteration,
/// always taking the remaining cluster-UAV pair with the largest Hamming
/// distance. Cluster vectors are OR-updated only when an iteration finishes.
///
/// Ties in every argmin/argmax resolve to the lexicographically smallest
/// pair, so the result depends on the Rng only for odd cluster counts.

#ifndef UAVEX_CLUSTERING_HPP
#define UAVEX_CLUSTERING_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavex/core.hpp"

namespace uavex {

inline std::size_t hamming_distance(const IndicatorVector& a, const IndicatorVector& b) { return a.distance(b); }

struct ClusterAssignment {
  std::vector<std::vector<UavId>> members;      ///< indexed by ClusterId
  std::vector<IndicatorVector> cluster_vectors;  ///< OR of member vectors

  std::size_t num_clusters() const { return members.size(); }

  friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

/// Result of the initialization stage: N singleton clusters and the UAVs left
/// in the pool, ascending.
struct InitialClusters {
  ClusterAssignment assignment;
  std::vector<UavId> pool;
};

namespace detail {

inline void check_feasible(std::size_t num_uavs, std::size_t num_clusters) {
  if (num_clusters == 0) throw InvalidInput("number of clusters must be at least 1");
  if (num_clusters > num_uavs) {
    throw Infeasible("cannot form " + std::to_string(num_clusters) + " clusters from " + std::to_string(num_uavs) +
                     " UAVs");
  }
  if (num_clusters > 1 && num_clusters % 2 == 1 && num_clusters + 1 > num_uavs) {
    throw Infeasible("odd cluster count " + std::to_string(num_clusters) + " needs at least " +
                     std::to_string(num_clusters + 1) + " UAVs for pair extraction");
  }
}

inline void check_lengths(std::span<const IndicatorVector> vectors) {
  for (const auto& v : vectors) {
    if (v.size() != vectors.front().size()) throw InvalidInput("UAV indicator vectors differ in length");
  }
}

}  // namespace detail

/// Pair-extraction initialization. For N = 1 every UAV is placed directly into
/// the single cluster and the pool is empty.
inline InitialClusters initialize_clusters(std::span<const IndicatorVector> vectors, std::size_t num_clusters,
                                           Rng& rng) {
  detail::check_feasible(vectors.size(), num_clusters);
  detail::check_lengths(vectors);

  InitialClusters out;
  if (num_clusters == 1) {
    IndicatorVector all(vectors.front().size());
    std::vector<UavId> everyone;
    for (UavId i = 0; i < vectors.size(); ++i) {
      everyone.push_back(i);
      all |= vectors[i];
    }
    out.assignment.members.push_back(std::move(everyone));
    out.assignment.cluster_vectors.push_back(std::move(all));
    return out;
  }

  std::vector<bool> in_pool(vectors.size(), true);
  std::vector<UavId> seeds;
  const std::size_t wanted = num_clusters + (num_clusters % 2);
  while (seeds.size() < wanted) {
    std::optional<std::pair<UavId, UavId>> best;
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    for (UavId i = 0; i < vectors.size(); ++i) {
      if (!in_pool[i]) continue;
      for (UavId j = i + 1; j < vectors.size(); ++j) {
        if (!in_pool[j]) continue;
        const std::size_t d = hamming_distance(vectors[i], vectors[j]);
        if (d < best_dist) {
          best_dist = d;
          best = {i, j};
        }
      }
    }
    in_pool[best->first] = false;
    in_pool[best->second] = false;
    seeds.push_back(best->first);
    seeds.push_back(best->second);
  }

  if (seeds.size() > num_clusters) {
    const std::size_t back = rng.index(seeds.size());
    in_pool[seeds[back]] = true;
    seeds.erase(seeds.begin() + static_cast<std::ptrdiff_t>(back));
  }

  for (UavId s : seeds) {
    out.assignment.members.push_back({s});
    out.assignment.cluster_vectors.push_back(vectors[s]);
  }
  for (UavId i = 0; i < vectors.size(); ++i) {
    if (in_pool[i]) out.pool.push_back(i);
  }
  return out;
}

/// One merging iteration. Every cluster receives at most one UAV; distances use
/// the cluster vectors as they stood when the iteration began.
inline void merge_iteration(ClusterAssignment& assignment, std::vector<UavId>& pool,
                            std::span<const IndicatorVector> vectors) {
  if (pool.empty()) throw InvalidInput("merge_iteration requires a non-empty pool");

  const std::size_t n_clusters = assignment.num_clusters();
  std::vector<bool> open(n_clusters, true);
  std::vector<std::pair<ClusterId, UavId>> picks;

  // Distance table is fixed for the whole iteration.
  std::vector<std::vector<std::size_t>> dist(n_clusters, std::vector<std::size_t>(pool.size()));
  for (ClusterId n = 0; n < n_clusters; ++n) {
    for (std::size_t p = 0; p < pool.size(); ++p) {
      dist[n][p] = hamming_distance(assignment.cluster_vectors[n], vectors[pool[p]]);
    }
  }

  std::vector<bool> taken(pool.size(), false);
  std::size_t remaining = pool.size();
  std::size_t open_count = n_clusters;
  while (open_count > 0 && remaining > 0) {
    ClusterId best_n = 0;
    std::size_t best_p = 0;
    bool found = false;
    for (ClusterId n = 0; n < n_clusters; ++n) {
      if (!open[n]) continue;
      // pool is ascending, so scanning positions in order preserves the
      // smallest-(cluster, UAV) tie-break
      for (std::size_t p = 0; p < pool.size(); ++p) {
        if (taken[p]) continue;
        if (!found || dist[n][p] > dist[best_n][best_p]) {
          best_n = n;
          best_p = p;
          found = true;
        }
      }
    }
    open[best_n] = false;
    taken[best_p] = true;
    --open_count;
    --remaining;
    picks.emplace_back(best_n, pool[best_p]);
  }

  for (const auto& [n, uav] : picks) {
    assignment.members[n].push_back(uav);
    assignment.cluster_vectors[n] = or_update(assignment.cluster_vectors[n], vectors[uav]);
  }

  std::vector<UavId> rest;
  for (std::size_t p = 0; p < pool.size(); ++p) {
    if (!taken[p]) rest.push_back(pool[p]);
  }
  pool = std::move(rest);
}

/// Full clustering: initialization followed by merging iterations until the
/// pool is empty.
inline ClusterAssignment cluster_network(std::span<const IndicatorVector> vectors, std::size_t num_clusters,
                                         Rng& rng) {
  auto [assignment, pool] = initialize_clusters(vectors, num_clusters, rng);
  while (!pool.empty()) merge_iteration(assignment, pool, vectors);
  return assignment;
}

/// Fraction of clusters, across all assignments, whose union vector holds
/// every packet.
inline double full_set_rate(std::span<const ClusterAssignment> assignments) {
  if (assignments.empty()) throw InvalidInput("full_set_rate needs at least one assignment");
  std::size_t full = 0;
  std::size_t total = 0;
  for (const auto& a : assignments) {
    for (const auto& v : a.cluster_vectors) {
      full += v.all() ? 1 : 0;
      ++total;
    }
  }
  if (total == 0) throw InvalidInput("full_set_rate needs at least one cluster");
  return static_cast<double>(full) / static_cast<double>(total);
}

inline double full_set_rate(const ClusterAssignment& assignment) {
  return full_set_rate(std::span<const ClusterAssignment>(&assignment, 1));
}

/// Checks the partition, balance and union-consistency invariants. Returns an
/// empty string when all hold, otherwise a description of the first violation.
inline std::string check_assignment(const ClusterAssignment& a, std::span<const IndicatorVector> vectors) {
  if (a.members.size() != a.cluster_vectors.size()) return "member and vector counts differ";
  std::vector<int> seen(vectors.size(), 0);
  std::size_t lo = std::numeric_limits<std::size_t>::max();
  std::size_t hi = 0;
  for (ClusterId n = 0; n < a.members.size(); ++n) {
    if (a.members[n].empty()) return "cluster " + std::to_string(n) + " is empty";
    IndicatorVector u(vectors.front().size());
    for (UavId i : a.members[n]) {
      if (i >= vectors.size()) return "unknown UAV id " + std::to_string(i);
      ++seen[i];
      u |= vectors[i];
    }
    if (u != a.cluster_vectors[n]) return "cluster " + std::to_string(n) + " vector is not the OR of its members";
    lo = std::min(lo, a.members[n].size());
    hi = std::max(hi, a.members[n].size());
  }
  for (UavId i = 0; i < seen.size(); ++i) {
    if (seen[i] != 1) return "UAV " + std::to_string(i) + " appears " + std::to_string(seen[i]) + " times";
  }
  if (hi - lo > 1) return "cluster sizes differ by " + std::to_string(hi - lo);
  return {};
}

}  // namespace uavex

#endif  // UAVEX_CLUSTERING_HPP
