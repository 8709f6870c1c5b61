// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/fixpoint.hpp"

#include <mutex>
#include <vector>

namespace protokb {
namespace {

const PropertyMapPtr& empty_properties() {
  static const PropertyMapPtr empty = std::make_shared<const PropertyMap>();
  return empty;
}

}  // namespace

UnknownPrototypeError::UnknownPrototypeError(PrototypeId id)
    : std::out_of_range("unknown prototype " + id.str()), id_(std::move(id)) {}

PropertyMapPtr FixpointCache::find(const PrototypeId& id) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : it->second;
}

PropertyMapPtr FixpointCache::insert(const PrototypeId& id, PropertyMapPtr properties) {
  std::unique_lock lock(mutex_);
  return entries_.try_emplace(id, std::move(properties)).first->second;
}

void FixpointCache::reserve(std::size_t count) {
  std::unique_lock lock(mutex_);
  entries_.reserve(count);
}

std::size_t FixpointCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

PropertyMapPtr resolve_fixpoint(const KnowledgeBase& kb, const PrototypeId& id,
                                FixpointCache& cache) {
  std::vector<DefinitionPtr> chain;
  PropertyMapPtr properties;
  const PrototypeId* current = &id;
  while (true) {
    if ((properties = cache.find(*current))) break;
    if (*current == empty_prototype_id()) {
      properties = empty_properties();
      break;
    }
    DefinitionPtr def = kb.is_defined(*current);
    if (!def) throw UnknownPrototypeError(*current);
    if (def->base() == def->id()) throw std::logic_error("prototype " + def->id().str() + " is its own base");
    chain.push_back(std::move(def));
    current = &chain.back()->base();
  }

  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const PrototypeDefinition& def = **it;
    if (!def.add().empty() || !def.remove().empty()) {
      properties = std::make_shared<const PropertyMap>(
          apply_changeset(*properties, def.remove(), def.add()));
    }
    cache.steps_.fetch_add(1, std::memory_order_relaxed);
    properties = cache.insert(def.id(), std::move(properties));
  }
  return properties;
}

FixpointDefinition compute_fixpoint(const KnowledgeBase& kb, const PrototypeId& id,
                                    FixpointCache& cache) {
  return FixpointDefinition{id, *resolve_fixpoint(kb, id, cache)};
}

FixpointDefinition compute_fixpoint(const KnowledgeBase& kb, const PrototypeId& id) {
  FixpointCache cache;
  return compute_fixpoint(kb, id, cache);
}

Interpretation compute_interpretation(const KnowledgeBase& kb, FixpointCache& cache) {
  Interpretation out;
  const auto ids = kb.explicit_ids();
  cache.reserve(cache.size() + ids.size());
  for (const auto& id : ids) {
    PropertyMapPtr properties = resolve_fixpoint(kb, id, cache);
    out.emplace_hint(out.end(), id, FixpointDefinition{id, *properties});
  }
  return out;
}

Interpretation compute_interpretation(const KnowledgeBase& kb) {
  FixpointCache cache;
  return compute_interpretation(kb, cache);
}

}  // namespace protokb
