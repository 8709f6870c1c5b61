// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/definition.hpp"

#include <stdexcept>

namespace protokb {

PrototypeDefinition::PrototypeDefinition(PrototypeId id, PrototypeId base, ChangeSet add,
                                         ChangeSet remove)
    : id_(std::move(id)), base_(std::move(base)), add_(std::move(add)), remove_(std::move(remove)) {
  if (add_.has_removals()) {
    throw std::invalid_argument("add change set of " + id_.str() + " carries removals");
  }
  if (remove_.has_additions()) {
    throw std::invalid_argument("remove change set of " + id_.str() + " carries additions");
  }
}

const PrototypeDefinition& PrototypeDefinition::empty_prototype() {
  static const PrototypeDefinition def(empty_prototype_id(), empty_prototype_id());
  return def;
}

PrototypeDefinition FixpointDefinition::as_definition() const {
  return PrototypeDefinition(id, empty_prototype_id(), ChangeSet(properties.entries(), {}, {}));
}

}  // namespace protokb
