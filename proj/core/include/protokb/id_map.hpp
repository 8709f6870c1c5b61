// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include <absl/container/flat_hash_map.h>

#include "protokb/ids.hpp"

namespace protokb {

/// Open-addressing map keyed by prototype ID. IDs carry their hash, so probes
/// never touch the IRI text unless two hashes collide.
template <class Value>
using IdMap = absl::flat_hash_map<PrototypeId, Value, std::hash<PrototypeId>>;

}  // namespace protokb
