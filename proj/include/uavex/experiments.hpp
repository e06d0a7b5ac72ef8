// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Monte-Carlo sweeps over the clustering and exchange simulations, and the
/// CSV writer for their aggregate rows.

#ifndef UAVEX_EXPERIMENTS_HPP
#define UAVEX_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "uavex/clustering.hpp"
#include "uavex/core.hpp"
#include "uavex/simulator.hpp"

namespace uavex {

enum class SweepParameter { num_clusters, delivery_rate, scheme };

struct SweepSpec {
  ScenarioConfig base;
  SweepParameter parameter = SweepParameter::num_clusters;
  std::vector<double> values;                                   ///< cluster counts or delivery rates
  std::vector<double> crossed_rates;                            ///< optional rho grid crossed with cluster counts
  std::vector<Scheme> schemes{Scheme::proposed, Scheme::mechanism_only, Scheme::baseline_csma};
  std::size_t runs = 500;
  std::size_t threads = 0;  ///< 0 = hardware concurrency

  void validate() const {
    if (runs == 0) throw InvalidInput("runs must be at least 1");
    if (parameter != SweepParameter::scheme && values.empty()) throw InvalidInput("sweep value list is empty");
    if (parameter == SweepParameter::scheme && schemes.empty()) throw InvalidInput("scheme list is empty");
  }
};

/// Per-run outcome kept so aggregates can be recomputed.
struct RunSample {
  std::size_t run = 0;
  std::size_t exchanges = 0;
  Micros delay_us = 0;
  bool completed = false;
  std::size_t full_clusters = 0;
  std::size_t clusters = 0;
};

struct AggregateRow {
  std::string param;
  Scheme scheme = Scheme::proposed;
  std::size_t num_clusters = 0;
  double delivery_rate = 0.0;
  bool infeasible = false;
  double mean_exchanges = std::numeric_limits<double>::quiet_NaN();
  double sd_exchanges = std::numeric_limits<double>::quiet_NaN();
  double mean_delay_us = std::numeric_limits<double>::quiet_NaN();
  double sd_delay_us = std::numeric_limits<double>::quiet_NaN();
  double full_set_rate = std::numeric_limits<double>::quiet_NaN();
  double sd_full_set_rate = std::numeric_limits<double>::quiet_NaN();  ///< per-run rate spread
  double completion_rate = std::numeric_limits<double>::quiet_NaN();
  std::size_t runs = 0;
  std::size_t incomplete_runs = 0;
  std::uint64_t seed = 0;
  std::vector<RunSample> samples;

  double se_exchanges() const { return sd_exchanges / std::sqrt(static_cast<double>(runs)); }
  double se_delay_us() const { return sd_delay_us / std::sqrt(static_cast<double>(runs - incomplete_runs)); }
  double se_full_set_rate() const { return sd_full_set_rate / std::sqrt(static_cast<double>(runs)); }
};

namespace detail {

/// Runs body(i) for i in [0, n) across worker threads. Each index writes only
/// its own output slot, so results do not depend on scheduling.
inline void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline double sample_sd(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

inline double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline std::string format_rate(double r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace detail

/// Fills the statistics of `row` from its samples. Delay statistics use
/// completed runs only; exchange and rate statistics use every run.
inline void aggregate(AggregateRow& row) {
  std::vector<double> ex;
  std::vector<double> delay;
  std::vector<double> rates;
  std::size_t full = 0;
  std::size_t clusters = 0;
  std::size_t completed = 0;
  for (const auto& s : row.samples) {
    ex.push_back(static_cast<double>(s.exchanges));
    rates.push_back(s.clusters ? static_cast<double>(s.full_clusters) / static_cast<double>(s.clusters) : 0.0);
    full += s.full_clusters;
    clusters += s.clusters;
    if (s.completed) {
      ++completed;
      delay.push_back(static_cast<double>(s.delay_us));
    }
  }
  row.runs = row.samples.size();
  row.incomplete_runs = row.runs - completed;
  row.mean_exchanges = detail::mean_of(ex);
  row.sd_exchanges = detail::sample_sd(ex, row.mean_exchanges);
  row.mean_delay_us = detail::mean_of(delay);
  row.sd_delay_us = delay.empty() ? std::numeric_limits<double>::quiet_NaN() : detail::sample_sd(delay, row.mean_delay_us);
  row.full_set_rate = clusters ? static_cast<double>(full) / static_cast<double>(clusters) : 0.0;
  const double mean_rate = detail::mean_of(rates);
  row.sd_full_set_rate = detail::sample_sd(rates, mean_rate);
  row.completion_rate = row.runs ? static_cast<double>(completed) / static_cast<double>(row.runs) : 0.0;
}

/// Clustering-only sweep: for each (N, rho) point, the fraction of clusters
/// whose union holds every packet. `completion_rate` is the fraction of runs
/// in which every cluster is full. Infeasible N yields a row flagged
/// `infeasible` with no statistics.
inline std::vector<AggregateRow> sweep_full_set_rate(const SweepSpec& spec) {
  spec.validate();
  if (spec.parameter == SweepParameter::scheme) throw InvalidInput("full-set-rate sweeps cluster counts or rates");

  std::vector<std::pair<std::size_t, double>> grid;
  if (spec.parameter == SweepParameter::num_clusters) {
    const std::vector<double> rates = spec.crossed_rates.empty() ? std::vector<double>{spec.base.delivery_rate}
                                                                 : spec.crossed_rates;
    for (double rho : rates) {
      for (double n : spec.values) grid.emplace_back(static_cast<std::size_t>(n), rho);
    }
  } else {
    for (double rho : spec.values) grid.emplace_back(spec.base.num_clusters, rho);
  }

  std::vector<AggregateRow> rows;
  for (const auto& [n, rho] : grid) {
    ScenarioConfig cfg = spec.base;
    cfg.num_clusters = n;
    cfg.delivery_rate = rho;
    cfg.scheme = Scheme::proposed;
    cfg.runs = spec.runs;
    cfg.validate();

    AggregateRow row;
    row.param = "clusters=" + std::to_string(n) + ";rho=" + detail::format_rate(rho);
    row.scheme = Scheme::proposed;
    row.num_clusters = n;
    row.delivery_rate = rho;
    row.seed = cfg.seed;
    try {
      detail::check_feasible(cfg.num_uavs, n);
    } catch (const Infeasible&) {
      row.infeasible = true;
      rows.push_back(std::move(row));
      continue;
    }

    row.samples.resize(spec.runs);
    detail::parallel_for(spec.runs, spec.threads, [&](std::size_t k) {
      const auto receipts = scenario_receipts(cfg, k);
      const auto a = assign_clusters(cfg, receipts, k);
      RunSample s;
      s.run = k;
      s.clusters = a.num_clusters();
      for (const auto& v : a.cluster_vectors) s.full_clusters += v.all() ? 1 : 0;
      s.completed = s.full_clusters == s.clusters;
      row.samples[k] = s;
    });
    aggregate(row);
    row.mean_exchanges = row.sd_exchanges = std::numeric_limits<double>::quiet_NaN();
    row.mean_delay_us = row.sd_delay_us = std::numeric_limits<double>::quiet_NaN();
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Runs every scheme on the same per-run receipt samples and reports the
/// worst-cluster exchange count and delay.
inline std::vector<AggregateRow> compare_schemes(const SweepSpec& spec) {
  spec.validate();
  ScenarioConfig base = spec.base;
  base.runs = spec.runs;
  base.validate();

  std::vector<ScenarioConfig> configs;
  for (Scheme s : spec.schemes) {
    ScenarioConfig c = base;
    c.scheme = s;
    detail::check_feasible(c.num_uavs, s == Scheme::proposed ? c.num_clusters : 1);
    configs.push_back(c);
  }

  std::vector<std::vector<RunSample>> per_scheme(configs.size(), std::vector<RunSample>(spec.runs));
  detail::parallel_for(spec.runs, spec.threads, [&](std::size_t k) {
    const auto receipts = scenario_receipts(base, k);
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const RunResult r = run_scenario_with(configs[i], k, receipts);
      RunSample s;
      s.run = k;
      s.exchanges = r.reported_exchanges;
      s.delay_us = r.reported_delay_us;
      s.completed = r.all_completed;
      s.clusters = r.assignment.num_clusters();
      for (const auto& v : r.assignment.cluster_vectors) s.full_clusters += v.all() ? 1 : 0;
      per_scheme[i][k] = s;
    }
  });

  std::vector<AggregateRow> rows;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    AggregateRow row;
    row.scheme = configs[i].scheme;
    row.num_clusters = configs[i].scheme == Scheme::proposed ? configs[i].num_clusters : 1;
    row.delivery_rate = base.delivery_rate;
    row.param = "clusters=" + std::to_string(row.num_clusters) + ";rho=" + detail::format_rate(base.delivery_rate);
    row.seed = base.seed;
    row.samples = std::move(per_scheme[i]);
    aggregate(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline constexpr std::string_view csv_header =
    "param,scheme,mean_exchanges,sd_exchanges,mean_delay_us,sd_delay_us,full_set_rate,completion_rate,runs,seed";

namespace detail {
inline void csv_number(std::ostream& os, double v) {
  if (std::isnan(v)) return;
  std::ostringstream tmp;
  tmp << std::fixed << std::setprecision(6) << v;
  os << tmp.str();
}
}  // namespace detail

inline void write_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << csv_header << '\n';
  for (const auto& r : rows) {
    os << r.param << ',' << to_string(r.scheme) << ',';
    detail::csv_number(os, r.mean_exchanges);
    os << ',';
    detail::csv_number(os, r.sd_exchanges);
    os << ',';
    detail::csv_number(os, r.mean_delay_us);
    os << ',';
    detail::csv_number(os, r.sd_delay_us);
    os << ',';
    detail::csv_number(os, r.full_set_rate);
    os << ',';
    detail::csv_number(os, r.completion_rate);
    os << ',' << r.runs << ',' << r.seed << '\n';
  }
}

/// Per-run CSV, from which every aggregate column can be recomputed.
inline void write_samples_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "param,scheme,run,exchanges,delay_us,completed,full_clusters,clusters\n";
  for (const auto& r : rows) {
    for (const auto& s : r.samples) {
      os << r.param << ',' << to_string(r.scheme) << ',' << s.run << ',' << s.exchanges << ',' << s.delay_us << ','
         << (s.completed ? 1 : 0) << ',' << s.full_clusters << ',' << s.clusters << '\n';
    }
  }
}

}  // namespace uavex

#endif  // UAVEX_EXPERIMENTS_HPP
