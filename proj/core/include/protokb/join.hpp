// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "protokb/definition.hpp"

namespace protokb {

/// Union of every change set; all sources must agree on the base.
struct UnionAll {};

/// Most trusted source first. Each property is taken wholesale from the most
/// trusted source that mentions it (in add, rem or remAll); the base comes
/// from the most trusted source.
struct PreferSource {
  std::vector<std::string> trust_order;
};

/// Additions, removals and remove-alls are unioned; each constrained
/// property then keeps at most its limit of added values, earlier sources in
/// `trust_order` filling the quota first. Base from the most trusted source.
struct ConstrainedCardinality {
  std::map<PropertyId, std::size_t> max_values;
  std::vector<std::string> trust_order;
};

using JoinStrategy = std::variant<UnionAll, PreferSource, ConstrainedCardinality>;

struct SourcedDefinition {
  std::string source;
  PrototypeDefinition definition;
};

class JoinError : public std::runtime_error {
 public:
  enum class Kind { kEmpty, kMixedIds, kBaseConflict, kUnknownSource };
  JoinError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Merges definitions of one prototype retrieved from several sources.
PrototypeDefinition join_definitions(std::span<const SourcedDefinition> defs,
                                     const JoinStrategy& strategy);

}  // namespace protokb
