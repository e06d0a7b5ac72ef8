// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "uavex/mac.hpp"

namespace uavex {
namespace {

TEST(Subwindow, MoreLostPacketsMeansEarlierSubwindow) {
  EXPECT_EQ(subwindow_for_count(6, 4), 3U);
  EXPECT_EQ(subwindow_for_count(6, 6), 1U);
  EXPECT_EQ(subwindow_for_count(6, 1), 6U);
  EXPECT_EQ(subwindow_for_count(1, 1), 1U);
  EXPECT_THROW(subwindow_for_count(6, 0), InvalidInput);
  EXPECT_THROW(subwindow_for_count(6, 7), InvalidInput);
}

TEST(Subwindow, BoundsForSixPackets) {
  EXPECT_EQ(subwindow_bounds(6, 1, 9207), (SubwindowBounds{0, 1534}));
  EXPECT_EQ(subwindow_bounds(6, 3, 9207), (SubwindowBounds{3069, 4603}));
  EXPECT_EQ(subwindow_bounds(6, 6, 9207), (SubwindowBounds{7672, 9207}));
  EXPECT_EQ(subwindow_bounds(1, 1, 9207), (SubwindowBounds{0, 9207}));
  EXPECT_THROW(subwindow_bounds(6, 0, 9207), InvalidInput);
  EXPECT_THROW(subwindow_bounds(6, 7, 9207), InvalidInput);
  EXPECT_THROW(subwindow_bounds(6, 1, 5), InvalidInput);
}

TEST(Subwindow, BoundsTileTheWindow) {
  for (std::size_t m = 1; m <= 40; ++m) {
    for (Micros t : {static_cast<Micros>(m), Micros{97}, Micros{9207}}) {
      if (t < static_cast<Micros>(m)) continue;
      Micros prev = 0;
      for (std::size_t k = 1; k <= m; ++k) {
        const auto b = subwindow_bounds(m, k, t);
        EXPECT_EQ(b.lo_us, prev);
        EXPECT_GT(b.hi_us, b.lo_us);
        prev = b.hi_us;
      }
      EXPECT_EQ(prev, t);
    }
  }
}

TEST(DrawBackoff, StaysInsideItsSubwindow) {
  Rng rng(1, 0, "test/draw");
  for (int i = 0; i < 20000; ++i) {
    const std::size_t m = 1 + rng.index(12);
    const std::size_t mp = 1 + rng.index(m);
    const auto d = draw_backoff(m, mp, 9207, rng, 3);
    const auto b = subwindow_bounds(m, subwindow_for_count(m, mp), 9207);
    ASSERT_GT(d.duration_us, b.lo_us);
    ASSERT_LE(d.duration_us, b.hi_us);
    EXPECT_EQ(d.owner, 3U);
    EXPECT_EQ(d.subwindow, subwindow_for_count(m, mp));
  }
}

TEST(DrawBackoff, LargerCountAlwaysDrawsSmaller) {
  Rng rng(2, 0, "test/priority");
  for (int i = 0; i < 20000; ++i) {
    const std::size_t m = 2 + rng.index(10);
    const std::size_t a = 1 + rng.index(m);
    const std::size_t b = 1 + rng.index(m);
    if (a == b) continue;
    const auto da = draw_backoff(m, a, 9207, rng).duration_us;
    const auto db = draw_backoff(m, b, 9207, rng).duration_us;
    EXPECT_EQ(a > b, da < db);
  }
}

TEST(DrawBaseline, CoversWholeWindow) {
  Rng rng(3, 0, "test/baseline");
  EXPECT_EQ(draw_baseline_backoff(1, rng).duration_us, 1);
  EXPECT_FALSE(draw_baseline_backoff(10, rng).subwindow.has_value());
  Micros lo = 1 << 30, hi = 0;
  for (int i = 0; i < 5000; ++i) {
    const Micros d = draw_baseline_backoff(50, rng).duration_us;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  EXPECT_EQ(lo, 1);
  EXPECT_EQ(hi, 50);
  EXPECT_THROW(draw_baseline_backoff(0, rng), InvalidInput);
}

// Pearson chi-squared against the uniform law on the subwindow; critical value
// at alpha = 0.01 from the Wilson-Hilferty approximation.
double chi2_critical_99(double dof) {
  const double z = 2.326347874;
  const double a = 2.0 / (9.0 * dof);
  return dof * std::pow(1.0 - a + z * std::sqrt(a), 3);
}

TEST(DrawBackoff, UniformWithinSubwindow) {
  Rng rng(4, 0, "test/chi2");
  const std::size_t m = 6;
  const Micros t = 60;  // ten slots per subwindow
  const auto b = subwindow_bounds(m, 2, t);
  const auto width = static_cast<std::size_t>(b.hi_us - b.lo_us);
  std::vector<double> counts(width, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[draw_backoff(m, 5, t, rng).duration_us - b.lo_us - 1] += 1;
  const double expected = static_cast<double>(n) / width;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, chi2_critical_99(static_cast<double>(width - 1)));
}

TEST(DrawBaseline, UniformOverWindow) {
  Rng rng(5, 0, "test/chi2b");
  const Micros t = 40;
  std::vector<double> counts(t, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[draw_baseline_backoff(t, rng).duration_us - 1] += 1;
  const double expected = static_cast<double>(n) / t;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, chi2_critical_99(t - 1.0));
}

TEST(FrameDuration, PreamblePlusPayload) {
  EXPECT_EQ(frame_duration(FrameKind::reply, 4), 8020);
  EXPECT_EQ(frame_duration(FrameKind::reply, 1), 2020);
  EXPECT_EQ(frame_duration(FrameKind::request, 0), 20);
  EXPECT_EQ(frame_duration(FrameKind::request, 5), 20);
  EXPECT_THROW(frame_duration(FrameKind::reply, 0), InvalidInput);
  TimingConfig t;
  t.request_payload_us = 100;
  EXPECT_EQ(frame_duration(FrameKind::request, 0, t), 120);
}

}  // namespace
}  // namespace uavex
