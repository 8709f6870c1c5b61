// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <shared_mutex>
#include <stdexcept>

#include "protokb/definition.hpp"
#include "protokb/id_map.hpp"
#include "protokb/knowledge_base.hpp"

namespace protokb {

class UnknownPrototypeError : public std::out_of_range {
 public:
  explicit UnknownPrototypeError(PrototypeId id);
  const PrototypeId& id() const noexcept { return id_; }

 private:
  PrototypeId id_;
};

using PropertyMapPtr = std::shared_ptr<const PropertyMap>;

/// Memoized fixpoints of one knowledge base. Thread-safe; concurrent inserts
/// of the same ID keep the first value, which is identical to any later one.
class FixpointCache {
 public:
  PropertyMapPtr find(const PrototypeId& id) const;

  /// Returns the value stored for `id` after the call.
  PropertyMapPtr insert(const PrototypeId& id, PropertyMapPtr properties);

  std::size_t size() const;
  void reserve(std::size_t count);

  /// Definitions resolved (one inheritance step each) through this cache.
  std::size_t steps() const noexcept { return steps_.load(std::memory_order_relaxed); }

 private:
  friend PropertyMapPtr resolve_fixpoint(const KnowledgeBase&, const PrototypeId&, FixpointCache&);

  mutable std::shared_mutex mutex_;
  IdMap<PropertyMapPtr> entries_;
  std::atomic<std::size_t> steps_{0};
};

/// Properties of `id` with every inherited change set applied, sharing
/// storage with the cache. Walks the base chain iteratively up to the first
/// memoized ancestor (or the empty prototype), then applies change sets back
/// down, memoizing every intermediate result.
///
/// Throws UnknownPrototypeError if `id` or one of its ancestors is undefined.
PropertyMapPtr resolve_fixpoint(const KnowledgeBase& kb, const PrototypeId& id,
                                FixpointCache& cache);

FixpointDefinition compute_fixpoint(const KnowledgeBase& kb, const PrototypeId& id,
                                    FixpointCache& cache);

/// Uncached convenience overload; uses a throwaway cache.
FixpointDefinition compute_fixpoint(const KnowledgeBase& kb, const PrototypeId& id);

using Interpretation = std::map<PrototypeId, FixpointDefinition>;

/// One fixpoint per explicitly stored definition of `kb`. Implicit prototypes
/// (the empty prototype, literals) are not materialized.
Interpretation compute_interpretation(const KnowledgeBase& kb, FixpointCache& cache);
Interpretation compute_interpretation(const KnowledgeBase& kb);

}  // namespace protokb
