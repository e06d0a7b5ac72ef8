// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "uavex/config.hpp"

namespace uavex {
namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  args.insert(args.begin(), "uavex");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Config, ParsesShortAndLongKeys) {
  const auto c = parse_config(R"({"uavs": 20, "packets": 10, "rho": 0.6, "clusters": 6, "scheme": "baseline_csma",
                                  "seed": 9, "runs": 50, "cw_total_us": 5000})");
  EXPECT_EQ(c.num_uavs, 20U);
  EXPECT_EQ(c.num_packets, 10U);
  EXPECT_DOUBLE_EQ(c.delivery_rate, 0.6);
  EXPECT_EQ(c.num_clusters, 6U);
  EXPECT_EQ(c.scheme, Scheme::baseline_csma);
  EXPECT_EQ(c.seed, 9U);
  EXPECT_EQ(c.runs, 50U);
  EXPECT_EQ(c.timing.cw_total_us, 5000);
  EXPECT_EQ(parse_config(R"({"num_uavs": 12})").num_uavs, 12U);
}

TEST(Config, RejectsBadDocuments) {
  EXPECT_THROW(parse_config(R"({"uavz": 3})"), InvalidInput);
  EXPECT_THROW(parse_config(R"({"uavs": "ten"})"), InvalidInput);
  EXPECT_THROW(parse_config(R"({"rho": 1.5})").validate(), InvalidInput);
  EXPECT_THROW(parse_config("{not json"), InvalidInput);
  EXPECT_THROW(parse_config("[1,2]"), InvalidInput);
  EXPECT_THROW(load_config("/nonexistent/uavex.json"), InvalidInput);
}

TEST(Cli, CompareWritesOneRowPerScheme) {
  const auto r = run({"compare", "--runs", "20", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines_of(r.out);
  ASSERT_EQ(l.size(), 4U);
  EXPECT_EQ(l[0], csv_header);
  EXPECT_EQ(l[1].rfind("clusters=3;rho=0.7,proposed,", 0), 0U);
  EXPECT_EQ(l[2].rfind("clusters=1;rho=0.7,mechanism_only,", 0), 0U);
  EXPECT_EQ(l[3].rfind("clusters=1;rho=0.7,baseline_csma,", 0), 0U);
}

TEST(Cli, FullSetRateRangeIsNonIncreasing) {
  const auto r = run({"full-set-rate", "--clusters", "1..10", "--runs", "300"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines_of(r.out);
  ASSERT_EQ(l.size(), 11U);
  double prev = 2.0;
  for (std::size_t i = 1; i < l.size(); ++i) {
    std::vector<std::string> f;
    std::istringstream is(l[i]);
    for (std::string x; std::getline(is, x, ',');) f.push_back(x);
    ASSERT_GE(f.size(), 7U);
    const double rate = std::stod(f[6]);
    EXPECT_LE(rate, prev + 0.03) << l[i];
    prev = rate;
  }
}

TEST(Cli, SameSeedSameBytes) {
  const auto a = run({"compare", "--runs", "15", "--seed", "11", "--threads", "3"});
  const auto b = run({"compare", "--runs", "15", "--seed", "11", "--threads", "1"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"compare", "--rho", "2"}).code, 1);
  EXPECT_EQ(run({"compare", "--timing", "difs_us"}).code, 1);
  EXPECT_EQ(run({"compare", "--config", "/nonexistent.json"}).code, 1);
  EXPECT_EQ(run({"compare", "--uavs", "4", "--clusters", "5", "--runs", "2"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, FlagsOverrideConfigFile) {
  const std::string path = ::testing::TempDir() + "uavex_cfg.json";
  {
    std::ofstream f(path);
    f << R"({"uavs": 8, "clusters": 2, "runs": 5, "seed": 4})";
  }
  const auto a = run({"compare", "--config", path});
  const auto b = run({"compare", "--config", path, "--clusters", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(a.out.find("clusters=2;"), std::string::npos);
  EXPECT_NE(b.out.find("clusters=4;"), std::string::npos);
  EXPECT_NE(a.out.find(",5,4\n"), std::string::npos);
}

TEST(Cli, OutFileMatchesStdout) {
  const std::string path = ::testing::TempDir() + "uavex_out.csv";
  const auto a = run({"compare", "--runs", "5"});
  const auto b = run({"compare", "--runs", "5", "--out", path});
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(read_file(path), a.out);
}

TEST(Cli, WalkthroughTraceMatchesGolden) {
  const auto r = run({"trace", "--fig1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read_file(UAVEX_GOLDEN_DIR "/fig1_trace.txt"));
}

TEST(Cli, ScenarioTracePrintsEveryCluster) {
  const auto r = run({"trace", "--run-index", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t summaries = 0;
  for (const auto& l : lines_of(r.out)) summaries += l.rfind("# cluster ", 0) == 0 ? 1 : 0;
  EXPECT_EQ(summaries, 3U);
}

TEST(Cli, SelftestPasses) {
  const auto r = run({"selftest"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

}  // namespace
}  // namespace uavex
