// Copyright 2026 The uavex Authors.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Flat JSON scenario files. Every key is optional and overrides the default
/// ScenarioConfig / TimingConfig value:
///
///   { "uavs": 10, "packets": 6, "rho": 0.7, "clusters": 3,
///     "scheme": "proposed", "seed": 42, "runs": 500,
///     "difs_us": 34, "cw_total_us": 9207, "preamble_us": 20,
///     "payload_us_per_packet": 2000, "request_payload_us": 0 }

#ifndef UAVEX_CONFIG_HPP
#define UAVEX_CONFIG_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "uavex/core.hpp"

namespace uavex {

namespace detail {

template <class T>
T json_number(const nlohmann::json& v, const std::string& key) {
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw InvalidInput("config key '" + key + "' must be a number");
  } else {
    if (!v.is_number_integer()) throw InvalidInput("config key '" + key + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.get<long long>() < 0) throw InvalidInput("config key '" + key + "' must be non-negative");
    }
  }
  return v.get<T>();
}

}  // namespace detail

/// Applies the keys of a parsed JSON object on top of `base`.
inline ScenarioConfig apply_config(const nlohmann::json& doc, ScenarioConfig base = {}) {
  if (!doc.is_object()) throw InvalidInput("scenario config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "uavs" || key == "num_uavs") {
      base.num_uavs = detail::json_number<std::size_t>(v, key);
    } else if (key == "packets" || key == "num_packets") {
      base.num_packets = detail::json_number<std::size_t>(v, key);
    } else if (key == "rho" || key == "delivery_rate") {
      base.delivery_rate = detail::json_number<double>(v, key);
    } else if (key == "clusters" || key == "num_clusters") {
      base.num_clusters = detail::json_number<std::size_t>(v, key);
    } else if (key == "scheme") {
      if (!v.is_string()) throw InvalidInput("config key 'scheme' must be a string");
      base.scheme = parse_scheme(v.get<std::string>());
    } else if (key == "seed") {
      base.seed = detail::json_number<std::uint64_t>(v, key);
    } else if (key == "runs") {
      base.runs = detail::json_number<std::size_t>(v, key);
    } else if (key == "difs_us") {
      base.timing.difs_us = detail::json_number<Micros>(v, key);
    } else if (key == "cw_total_us") {
      base.timing.cw_total_us = detail::json_number<Micros>(v, key);
    } else if (key == "preamble_us") {
      base.timing.preamble_us = detail::json_number<Micros>(v, key);
    } else if (key == "payload_us_per_packet") {
      base.timing.payload_us_per_packet = detail::json_number<Micros>(v, key);
    } else if (key == "request_payload_us") {
      base.timing.request_payload_us = detail::json_number<Micros>(v, key);
    } else {
      throw InvalidInput("unknown config key '" + key + "'");
    }
  }
  return base;
}

inline ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("malformed scenario config: ") + e.what());
  }
  return apply_config(doc, std::move(base));
}

inline ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

}  // namespace uavex

#endif  // UAVEX_CONFIG_HPP
