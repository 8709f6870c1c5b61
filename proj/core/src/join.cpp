// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/join.hpp"

#include <algorithm>

namespace protokb {
namespace {

using Kind = JoinError::Kind;

void merge_into(PropertyValues& into, const PropertyValues& from) {
  for (const auto& [property, values] : from) into[property].insert(values.begin(), values.end());
}

// Sources sorted by trust; throws if a source is missing from the order.
std::vector<const SourcedDefinition*> by_trust(std::span<const SourcedDefinition> defs,
                                               const std::vector<std::string>& order) {
  auto rank = [&](const std::string& source) {
    auto it = std::find(order.begin(), order.end(), source);
    if (it == order.end()) {
      throw JoinError(Kind::kUnknownSource, "source '" + source + "' missing from trust order");
    }
    return it - order.begin();
  };
  std::vector<std::pair<std::ptrdiff_t, const SourcedDefinition*>> ranked;
  ranked.reserve(defs.size());
  for (const auto& def : defs) ranked.emplace_back(rank(def.source), &def);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<const SourcedDefinition*> out;
  for (const auto& [r, def] : ranked) out.push_back(def);
  return out;
}

PrototypeDefinition join_union(std::span<const SourcedDefinition> defs) {
  const PrototypeId& base = defs.front().definition.base();
  PropertyValues additions, removals;
  PropertySet remove_all;
  for (const auto& [source, def] : defs) {
    if (def.base() != base) {
      throw JoinError(Kind::kBaseConflict, "sources disagree on the base of " + def.id().str() +
                                               ": " + base.str() + " vs " + def.base().str());
    }
    merge_into(additions, def.add().additions());
    merge_into(removals, def.remove().removals());
    remove_all.insert(def.remove().removed_properties().begin(),
                      def.remove().removed_properties().end());
  }
  return PrototypeDefinition(defs.front().definition.id(), base, ChangeSet(std::move(additions), {}, {}),
                             ChangeSet({}, std::move(removals), std::move(remove_all)));
}

PrototypeDefinition join_prefer(std::span<const SourcedDefinition> defs, const PreferSource& s) {
  const auto ranked = by_trust(defs, s.trust_order);
  PropertyValues additions, removals;
  PropertySet remove_all;
  PropertySet claimed;
  for (const SourcedDefinition* source : ranked) {
    const auto& def = source->definition;
    PropertySet mentioned;
    for (const auto& [property, values] : def.add().additions()) mentioned.insert(property);
    for (const auto& [property, values] : def.remove().removals()) mentioned.insert(property);
    mentioned.insert(def.remove().removed_properties().begin(),
                     def.remove().removed_properties().end());
    for (const auto& property : mentioned) {
      if (claimed.contains(property)) continue;
      if (auto it = def.add().additions().find(property); it != def.add().additions().end()) {
        additions.emplace(property, it->second);
      }
      if (auto it = def.remove().removals().find(property); it != def.remove().removals().end()) {
        removals.emplace(property, it->second);
      }
      if (def.remove().removed_properties().contains(property)) remove_all.insert(property);
    }
    claimed.merge(mentioned);
  }
  const auto& top = ranked.front()->definition;
  return PrototypeDefinition(top.id(), top.base(), ChangeSet(std::move(additions), {}, {}),
                             ChangeSet({}, std::move(removals), std::move(remove_all)));
}

PrototypeDefinition join_constrained(std::span<const SourcedDefinition> defs,
                                     const ConstrainedCardinality& s) {
  const auto ranked = by_trust(defs, s.trust_order);
  PropertyValues additions, removals;
  PropertySet remove_all;
  for (const SourcedDefinition* source : ranked) {
    const auto& def = source->definition;
    for (const auto& [property, values] : def.add().additions()) {
      auto limit = s.max_values.find(property);
      if (limit == s.max_values.end()) {
        additions[property].insert(values.begin(), values.end());
        continue;
      }
      auto& kept = additions[property];
      for (const auto& value : values) {
        if (kept.size() >= limit->second) break;
        kept.insert(value);
      }
    }
    merge_into(removals, def.remove().removals());
    remove_all.insert(def.remove().removed_properties().begin(),
                      def.remove().removed_properties().end());
  }
  const auto& top = ranked.front()->definition;
  return PrototypeDefinition(top.id(), top.base(), ChangeSet(std::move(additions), {}, {}),
                             ChangeSet({}, std::move(removals), std::move(remove_all)));
}

}  // namespace

PrototypeDefinition join_definitions(std::span<const SourcedDefinition> defs,
                                     const JoinStrategy& strategy) {
  if (defs.empty()) throw JoinError(Kind::kEmpty, "nothing to join");
  const PrototypeId& id = defs.front().definition.id();
  for (const auto& def : defs) {
    if (def.definition.id() != id) {
      throw JoinError(Kind::kMixedIds,
                      "cannot join " + id.str() + " with " + def.definition.id().str());
    }
  }
  struct Visitor {
    std::span<const SourcedDefinition> defs;
    PrototypeDefinition operator()(const UnionAll&) const { return join_union(defs); }
    PrototypeDefinition operator()(const PreferSource& s) const { return join_prefer(defs, s); }
    PrototypeDefinition operator()(const ConstrainedCardinality& s) const {
      return join_constrained(defs, s);
    }
  };
  return std::visit(Visitor{defs}, strategy);
}

}  // namespace protokb
