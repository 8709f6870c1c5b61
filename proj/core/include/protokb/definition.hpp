// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "protokb/change_set.hpp"
#include "protokb/ids.hpp"

namespace protokb {

/// A prototype: its ID, the ID of its base, and the change sets for adding
/// and for removing parts.
class PrototypeDefinition {
 public:
  /// Throws std::invalid_argument if `add` carries removal data or `remove`
  /// carries additions.
  PrototypeDefinition(PrototypeId id, PrototypeId base, ChangeSet add = {}, ChangeSet remove = {});

  /// (PROTO:P_0, PROTO:P_0, {}, {})
  static const PrototypeDefinition& empty_prototype();

  const PrototypeId& id() const noexcept { return id_; }
  const PrototypeId& base() const noexcept { return base_; }
  const ChangeSet& add() const noexcept { return add_; }
  const ChangeSet& remove() const noexcept { return remove_; }

  friend bool operator==(const PrototypeDefinition&, const PrototypeDefinition&) = default;

 private:
  PrototypeId id_;
  PrototypeId base_;
  ChangeSet add_;
  ChangeSet remove_;
};

using DefinitionPtr = std::shared_ptr<const PrototypeDefinition>;

inline DefinitionPtr make_definition(PrototypeId id, PrototypeId base, ChangeSet add = {},
                                     ChangeSet remove = {}) {
  return std::make_shared<const PrototypeDefinition>(std::move(id), std::move(base),
                                                     std::move(add), std::move(remove));
}

/// A fully resolved prototype: equivalent to (id, PROTO:P_0, properties, {}).
struct FixpointDefinition {
  PrototypeId id;
  PropertyMap properties;

  PrototypeDefinition as_definition() const;

  friend bool operator==(const FixpointDefinition&, const FixpointDefinition&) = default;
};

}  // namespace protokb
