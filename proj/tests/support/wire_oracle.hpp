// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "protokb/definition.hpp"

namespace protokb::testing {

/// Canonical encoding built through nlohmann's insertion-ordered JSON with
/// hand sorting; shares no code with the library encoder.
inline std::string oracle_encode(const PrototypeDefinition& d) {
  auto values = [](const PropertyValues& pv) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, std::vector<std::string>>> rows;
    for (const auto& [p, vs] : pv) {
      std::vector<std::string> vals;
      for (const auto& v : vs) vals.push_back(v.str());
      std::sort(vals.begin(), vals.end());
      rows.emplace_back(p.str(), vals);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [k, vals] : rows) o[k] = vals;
    return o;
  };
  nlohmann::ordered_json j;
  j["id"] = d.id().str();
  j["base"] = d.base().str();
  j["add"] = values(d.add().additions());
  j["rem"] = values(d.remove().removals());
  std::vector<std::string> all;
  for (const auto& p : d.remove().removed_properties()) all.push_back(p.str());
  std::sort(all.begin(), all.end());
  j["remAll"] = all;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

}  // namespace protokb::testing
