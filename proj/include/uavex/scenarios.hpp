// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef UAVEX_SCENARIOS_HPP
#define UAVEX_SCENARIOS_HPP

#include <vector>

#include "uavex/core.hpp"

namespace uavex {

/// Four-UAV, six-packet walkthrough instance. UAV 3 (index 2) has the most
/// losses and is answered by UAV 4; UAV 1 then needs {w3,w5}, which the two
/// UAVs completed by the first reply can supply.
inline std::vector<IndicatorVector> walkthrough_holdings() {
  return {
      IndicatorVector::from_string("110100"),  // U1: w1 w2 w4
      IndicatorVector::from_string("011111"),  // U2: w2 w3 w4 w5 w6
      IndicatorVector::from_string("001010"),  // U3: w3 w5
      IndicatorVector::from_string("111101"),  // U4: w1 w2 w3 w4 w6
  };
}

inline constexpr std::uint64_t walkthrough_seed = 1;

}  // namespace uavex

#endif  // UAVEX_SCENARIOS_HPP
