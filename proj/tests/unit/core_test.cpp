// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "uavex/core.hpp"

namespace uavex {
namespace {

IndicatorVector bits(const char* s) { return IndicatorVector::from_string(s); }

IndicatorVector random_vector(Rng& rng, std::size_t m) {
  IndicatorVector v(m);
  for (std::size_t i = 0; i < m; ++i) v.set(i, rng.bernoulli(0.5));
  return v;
}

TEST(OrUpdate, MergesClusterAndUavVectors) {
  EXPECT_EQ(or_update(bits("100100"), bits("010010")), bits("110110"));
}

TEST(OrUpdate, ZeroVectorIsIdentity) {
  const auto v = bits("101101");
  EXPECT_EQ(or_update(v, IndicatorVector(6)), v);
}

TEST(OrUpdate, Idempotent) {
  const auto v = bits("011010");
  EXPECT_EQ(or_update(v, v), v);
}

TEST(OrUpdate, LengthMismatchIsInvalidInput) {
  EXPECT_THROW(or_update(bits("1010"), bits("10101")), InvalidInput);
}

TEST(OrUpdate, AlgebraicProperties) {
  Rng rng(7, 0, "test/or");
  for (int k = 0; k < 500; ++k) {
    const std::size_t m = 1 + rng.index(130);
    const auto a = random_vector(rng, m);
    const auto b = random_vector(rng, m);
    const auto c = random_vector(rng, m);
    EXPECT_EQ(or_update(a, b), or_update(b, a));
    EXPECT_EQ(or_update(or_update(a, b), c), or_update(a, or_update(b, c)));
    EXPECT_EQ(or_update(a, a), a);
    const auto ab = or_update(a, b);
    EXPECT_TRUE(a.is_subset_of(ab));
    EXPECT_TRUE(b.is_subset_of(ab));
    // missing set can only shrink
    const auto before = missing_set(a);
    for (PacketId id : missing_set(ab)) {
      EXPECT_NE(std::find(before.begin(), before.end(), id), before.end());
    }
  }
}

TEST(MissingSet, ComplementOfHoldings) {
  EXPECT_EQ(missing_set(bits("110110")), (std::vector<PacketId>{2, 5}));
  EXPECT_TRUE(missing_set(bits("111111")).empty());
  EXPECT_EQ(missing_set(bits("0000")), (std::vector<PacketId>{0, 1, 2, 3}));
}

TEST(MissingSet, SizeAddsUpToM) {
  Rng rng(3, 0, "test/missing");
  for (int k = 0; k < 100; ++k) {
    const auto v = random_vector(rng, 1 + rng.index(200));
    EXPECT_EQ(missing_set(v).size() + v.count(), v.size());
  }
}

TEST(IndicatorVector, WordBoundaries) {
  IndicatorVector v(130, true);
  EXPECT_EQ(v.count(), 130U);
  EXPECT_TRUE(v.all());
  EXPECT_EQ((~v).count(), 0U);
  v.set(64, false);
  EXPECT_EQ(missing_set(v), (std::vector<PacketId>{64}));
  EXPECT_THROW(v.set(130), InvalidInput);
  EXPECT_THROW(IndicatorVector::from_string("10x"), InvalidInput);
}

TEST(IndicatorVector, PacketLabelsAreOneIndexed) {
  EXPECT_EQ(packet_labels(bits("110101")), "{w1,w2,w4,w6}");
  EXPECT_EQ(packet_labels(IndicatorVector(3)), "{}");
}

TEST(Rng, SameKeyReplaysSameStream) {
  Rng a(42, 5, "backoff");
  Rng b(42, 5, "backoff");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, RunIndexAndLabelSeparateStreams) {
  Rng base(42, 5, "backoff");
  Rng other_run(42, 6, "backoff");
  Rng other_label(42, 5, "tie-break");
  const auto x = base.next();
  EXPECT_NE(x, other_run.next());
  EXPECT_NE(x, other_label.next());
}

TEST(ScenarioConfig, RejectsOutOfRangeValues) {
  ScenarioConfig c;
  c.delivery_rate = 1.5;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.num_clusters = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.timing.cw_total_us = 5;  // fewer microseconds than subwindows
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(Scheme, ParsesNames) {
  EXPECT_EQ(parse_scheme("proposed"), Scheme::proposed);
  EXPECT_EQ(parse_scheme("mechanism_only"), Scheme::mechanism_only);
  EXPECT_EQ(parse_scheme("baseline_csma"), Scheme::baseline_csma);
  EXPECT_THROW(parse_scheme("aloha"), InvalidInput);
}

}  // namespace
}  // namespace uavex
