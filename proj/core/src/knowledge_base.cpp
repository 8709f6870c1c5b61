// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/knowledge_base.hpp"

#include <unordered_set>

namespace protokb {
namespace {

DefinitionPtr empty_definition() {
  static const DefinitionPtr def =
      std::make_shared<const PrototypeDefinition>(PrototypeDefinition::empty_prototype());
  return def;
}

}  // namespace

DefinitionPtr EmptyKnowledgeBase::is_defined(const PrototypeId& id) const {
  return id == empty_prototype_id() ? empty_definition() : nullptr;
}

KnowledgeBasePtr EmptyKnowledgeBase::instance() {
  static const KnowledgeBasePtr kb = std::make_shared<const EmptyKnowledgeBase>();
  return kb;
}

PredefinedKnowledgeBase::PredefinedKnowledgeBase() : registry_(LiteralRegistry::defaults()) {}

PredefinedKnowledgeBase::PredefinedKnowledgeBase(LiteralRegistry registry)
    : registry_(std::move(registry)) {}

DefinitionPtr PredefinedKnowledgeBase::is_defined(const PrototypeId& id) const {
  if (id == empty_prototype_id()) return empty_definition();
  if (!registry_.recognizes(id.view())) return nullptr;
  return make_definition(id, empty_prototype_id());
}

KnowledgeBasePtr PredefinedKnowledgeBase::instance() {
  static const KnowledgeBasePtr kb = std::make_shared<const PredefinedKnowledgeBase>();
  return kb;
}

DefinitionPtr predefined_lookup(const PrototypeId& id) {
  if (!literal::is_integer_literal(id.view()) && !literal::is_string_literal(id.view())) {
    return nullptr;
  }
  return make_definition(id, empty_prototype_id());
}

LayeredKnowledgeBase::LayeredKnowledgeBase(std::vector<DefinitionPtr> definitions,
                                           KnowledgeBasePtr basis)
    : basis_(std::move(basis)) {
  definitions_.reserve(definitions.size());
  order_.reserve(definitions.size());
  for (auto& def : definitions) {
    if (definitions_.emplace(def->id(), def).second) order_.push_back(std::move(def));
  }
}

DefinitionPtr LayeredKnowledgeBase::is_defined(const PrototypeId& id) const {
  if (auto it = definitions_.find(id); it != definitions_.end()) return it->second;
  return basis_->is_defined(id);
}

std::vector<PrototypeId> LayeredKnowledgeBase::explicit_ids() const {
  std::vector<PrototypeId> ids;
  ids.reserve(order_.size());
  for (const auto& def : order_) ids.push_back(def->id());
  for (auto& id : basis_->explicit_ids()) {
    if (!definitions_.contains(id)) ids.push_back(std::move(id));
  }
  return ids;
}

ChainedKnowledgeBase::ChainedKnowledgeBase(std::vector<KnowledgeBasePtr> members)
    : members_(std::move(members)) {}

DefinitionPtr ChainedKnowledgeBase::is_defined(const PrototypeId& id) const {
  for (const auto& member : members_) {
    if (auto def = member->is_defined(id)) return def;
  }
  if (id == empty_prototype_id()) return empty_definition();
  return nullptr;
}

std::vector<PrototypeId> ChainedKnowledgeBase::explicit_ids() const {
  std::vector<PrototypeId> ids;
  std::unordered_set<PrototypeId> seen;
  for (const auto& member : members_) {
    for (auto& id : member->explicit_ids()) {
      if (seen.insert(id).second) ids.push_back(std::move(id));
    }
  }
  return ids;
}

}  // namespace protokb
