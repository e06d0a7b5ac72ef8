// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Exit codes: 0 ok, 1 usage/config error or failed
// selftest, 2 infeasible scenario.

#ifndef UAVEX_TOOLS_CLI_HPP
#define UAVEX_TOOLS_CLI_HPP

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavex/config.hpp"
#include "uavex/experiments.hpp"
#include "uavex/scenarios.hpp"
#include "uavex/selftest.hpp"
#include "uavex/simulator.hpp"

namespace uavex::cli {

enum ExitCode : int { ok = 0, usage_error = 1, infeasible = 2 };

/// "1..10" or "1,3,5" (or a single value).
inline std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const long lo = std::stol(text.substr(0, dots));
      const long hi = std::stol(text.substr(dots + 2));
      if (lo > hi) throw InvalidInput("empty range '" + text + "'");
      for (long v = lo; v <= hi; ++v) out.push_back(static_cast<double>(v));
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw InvalidInput("bad number '" + item + "'");
    }
  } catch (const std::logic_error&) {
    throw InvalidInput("cannot parse value list '" + text + "'");
  }
  if (out.empty()) throw InvalidInput("empty value list");
  return out;
}

/// Applies "key=value,key=value" timing overrides.
inline void apply_timing_overrides(const std::vector<std::string>& items, ScenarioConfig& cfg) {
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw InvalidInput("timing override '" + kv + "' is not key=value");
      const std::string key = kv.substr(0, eq);
      const std::string value = kv.substr(eq + 1);
      long long v = 0;
      try {
        std::size_t used = 0;
        v = std::stoll(value, &used);
        if (used != value.size()) throw InvalidInput("");
      } catch (const std::logic_error&) {
        throw InvalidInput("timing override '" + kv + "' needs an integer value");
      }
      if (key == "difs_us") {
        cfg.timing.difs_us = v;
      } else if (key == "cw_total_us") {
        cfg.timing.cw_total_us = v;
      } else if (key == "preamble_us") {
        cfg.timing.preamble_us = v;
      } else if (key == "payload_us_per_packet") {
        cfg.timing.payload_us_per_packet = v;
      } else if (key == "request_payload_us") {
        cfg.timing.request_payload_us = v;
      } else {
        throw InvalidInput("unknown timing key '" + key + "'");
      }
    }
  }
}

struct CommonOptions {
  std::string config_path;
  std::size_t uavs = 0;
  std::size_t packets = 0;
  std::string rho;
  std::string clusters;
  std::string scheme;
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  std::vector<std::string> timing;
  std::string out_path;
  std::string samples_path;
  std::size_t threads = 0;

  CLI::Option* uavs_opt = nullptr;
  CLI::Option* packets_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* runs_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON scenario file");
    uavs_opt = app->add_option("--uavs", uavs, "Number of UAVs");
    packets_opt = app->add_option("--packets", packets, "Number of packets M");
    app->add_option("--rho", rho, "Delivery rate (list allowed for full-set-rate)");
    app->add_option("--clusters", clusters, "Cluster count N (range a..b or list for full-set-rate)");
    app->add_option("--scheme", scheme, "proposed | mechanism_only | baseline_csma");
    seed_opt = app->add_option("--seed", seed, "Master seed");
    runs_opt = app->add_option("--runs", runs, "Monte-Carlo runs per point");
    app->add_option("--timing", timing, "Timing overrides key=value[,key=value]");
    app->add_option("--out", out_path, "Write output here instead of stdout");
    app->add_option("--samples-out", samples_path, "Also write per-run samples CSV");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
  }

  /// Defaults, then config file, then flags. List-valued flags contribute
  /// their first value.
  ScenarioConfig scenario() const {
    ScenarioConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    if (uavs_opt->count()) cfg.num_uavs = uavs;
    if (packets_opt->count()) cfg.num_packets = packets;
    if (!rho.empty()) cfg.delivery_rate = parse_value_list(rho).front();
    if (!clusters.empty()) cfg.num_clusters = static_cast<std::size_t>(parse_value_list(clusters).front());
    if (!scheme.empty()) cfg.scheme = parse_scheme(scheme);
    if (seed_opt->count()) cfg.seed = seed;
    if (runs_opt->count()) cfg.runs = runs;
    apply_timing_overrides(timing, cfg);
    cfg.validate();
    return cfg;
  }
};

class OutputSink {
public:
  OutputSink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidInput("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

inline void write_samples(const CommonOptions& o, const std::vector<AggregateRow>& rows) {
  if (o.samples_path.empty()) return;
  std::ofstream f(o.samples_path);
  if (!f) throw InvalidInput("cannot open samples file '" + o.samples_path + "'");
  write_samples_csv(f, rows);
}

inline int run_full_set_rate(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  spec.base = o.scenario();
  spec.runs = spec.base.runs;
  spec.threads = o.threads;
  spec.parameter = SweepParameter::num_clusters;
  spec.values = o.clusters.empty() ? std::vector<double>{double(spec.base.num_clusters)} : parse_value_list(o.clusters);
  if (!o.rho.empty()) spec.crossed_rates = parse_value_list(o.rho);
  const auto rows = sweep_full_set_rate(spec);
  for (const auto& r : rows) {
    if (r.infeasible) err << "warning: " << r.param << " is infeasible for " << spec.base.num_uavs << " UAVs; skipped\n";
  }
  OutputSink sink(o.out_path, out);
  write_csv(sink.get(), rows);
  write_samples(o, rows);
  return ok;
}

inline int run_compare(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  spec.base = o.scenario();
  spec.parameter = SweepParameter::scheme;
  spec.runs = spec.base.runs;
  spec.threads = o.threads;
  const auto rows = compare_schemes(spec);
  for (const auto& r : rows) {
    if (r.incomplete_runs) {
      err << "note: " << to_string(r.scheme) << ": " << r.incomplete_runs
          << " incomplete runs excluded from delay statistics\n";
    }
  }
  OutputSink sink(o.out_path, out);
  write_csv(sink.get(), rows);
  write_samples(o, rows);
  return ok;
}

inline void print_cluster_summary(std::ostream& os, ClusterId c, const std::vector<UavId>& members,
                                  const ClusterResult& r) {
  os << "# cluster " << c << " members";
  for (UavId m : members) os << ' ' << uav_label(m);
  os << " exchanges=" << r.exchange_count << " delay_us=" << r.delay_us << " completed=" << (r.completed ? 1 : 0)
     << " collisions=" << r.collision_count << " unobtainable=" << packet_labels(r.unobtainable) << '\n';
}

inline int run_trace(const CommonOptions& o, bool walkthrough, std::uint64_t run_index, std::ostream& out) {
  OutputSink sink(o.out_path, out);
  std::ostream& os = sink.get();
  if (walkthrough) {
    ScenarioConfig cfg;
    cfg.num_uavs = 4;
    cfg.num_packets = 6;
    cfg.num_clusters = 1;
    cfg.scheme = Scheme::proposed;
    cfg.seed = o.seed_opt->count() ? o.seed : walkthrough_seed;
    if (!o.scheme.empty()) cfg.scheme = parse_scheme(o.scheme);
    apply_timing_overrides(o.timing, cfg);
    cfg.validate();
    const auto holdings = walkthrough_holdings();
    std::vector<TraceLog> traces;
    const RunResult r = run_scenario_with(cfg, 0, holdings, &traces);
    os << "# walkthrough scheme=" << to_string(cfg.scheme) << " seed=" << cfg.seed << '\n';
    for (UavId i = 0; i < holdings.size(); ++i) {
      os << "# " << uav_label(i) << " holds " << packet_labels(holdings[i]) << '\n';
    }
    os << traces.front().str();
    print_cluster_summary(os, 0, r.assignment.members.front(), r.clusters.front());
    return ok;
  }

  const ScenarioConfig cfg = o.scenario();
  const auto receipts = scenario_receipts(cfg, run_index);
  std::vector<TraceLog> traces;
  const RunResult r = run_scenario_with(cfg, run_index, receipts, &traces);
  os << "# scenario scheme=" << to_string(cfg.scheme) << " uavs=" << cfg.num_uavs << " packets=" << cfg.num_packets
     << " rho=" << cfg.delivery_rate << " seed=" << cfg.seed << " run=" << run_index << '\n';
  for (UavId i = 0; i < receipts.size(); ++i) os << "# " << uav_label(i) << " holds " << packet_labels(receipts[i]) << '\n';
  for (ClusterId c = 0; c < r.clusters.size(); ++c) {
    print_cluster_summary(os, c, r.assignment.members[c], r.clusters[c]);
    os << traces[c].str();
  }
  os << "# reported exchanges=" << r.reported_exchanges << " delay_us=" << r.reported_delay_us
     << " all_completed=" << (r.all_completed ? 1 : 0) << '\n';
  return ok;
}

inline int run_selftest_cmd(const CommonOptions& o, std::ostream& out) {
  const std::uint64_t seed = o.seed_opt->count() ? o.seed : 42;
  bool all = true;
  for (const auto& r : run_selftest(seed)) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases)";
    if (!r.passed) out << ": " << r.detail;
    out << '\n';
    all = all && r.passed;
  }
  return all ? ok : usage_error;
}

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"UAV cluster data-exchange simulator"};
  app.require_subcommand(1);

  CommonOptions fsr_opts;
  auto* fsr = app.add_subcommand("full-set-rate", "Clustering-only full-set-of-packets rate sweep");
  fsr_opts.attach(fsr);

  CommonOptions cmp_opts;
  auto* cmp = app.add_subcommand("compare", "Exchange count and delay for each scheme on matched samples");
  cmp_opts.attach(cmp);

  CommonOptions trace_opts;
  bool walkthrough = false;
  std::uint64_t run_index = 0;
  auto* trace = app.add_subcommand("trace", "Event trace of a single run");
  trace_opts.attach(trace);
  trace->add_flag("--fig1", walkthrough, "Built-in four-UAV walkthrough instance");
  trace->add_option("--run-index", run_index, "Run index within the seed's stream");

  CommonOptions self_opts;
  auto* self = app.add_subcommand("selftest", "Randomised invariant suite");
  self_opts.attach(self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? ok : usage_error;
  }

  try {
    if (*fsr) return run_full_set_rate(fsr_opts, out, err);
    if (*cmp) return run_compare(cmp_opts, out, err);
    if (*trace) return run_trace(trace_opts, walkthrough, run_index, out);
    if (*self) return run_selftest_cmd(self_opts, out);
  } catch (const Infeasible& e) {
    err << "infeasible scenario: " << e.what() << '\n';
    return infeasible;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  }
  return usage_error;
}

}  // namespace uavex::cli

#endif  // UAVEX_TOOLS_CLI_HPP
