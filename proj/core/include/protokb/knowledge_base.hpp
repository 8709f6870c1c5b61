// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "protokb/definition.hpp"
#include "protokb/id_map.hpp"
#include "protokb/literals.hpp"

namespace protokb {

/// Read-only collection of prototype definitions.
///
/// Implementations are immutable once constructed and safe to query from any
/// number of threads. Every implementation defines the empty prototype.
class KnowledgeBase {
 public:
  virtual ~KnowledgeBase() = default;

  /// The definition of `id`, or nullptr when this KB does not define it.
  virtual DefinitionPtr is_defined(const PrototypeId& id) const = 0;

  /// IDs of the definitions this KB stores explicitly, in a stable order.
  /// Implicit prototypes (the empty prototype, literals) are not listed, and
  /// non-enumerable KBs return nothing.
  virtual std::vector<PrototypeId> explicit_ids() const { return {}; }
};

using KnowledgeBasePtr = std::shared_ptr<const KnowledgeBase>;

/// Defines only the empty prototype.
class EmptyKnowledgeBase final : public KnowledgeBase {
 public:
  DefinitionPtr is_defined(const PrototypeId& id) const override;

  static KnowledgeBasePtr instance();
};

/// Implicitly contains every literal its recognizers accept, each as
/// (literal, PROTO:P_0, {}, {}). Literals are recognized, never enumerated.
class PredefinedKnowledgeBase final : public KnowledgeBase {
 public:
  /// Integer and string literals.
  PredefinedKnowledgeBase();
  explicit PredefinedKnowledgeBase(LiteralRegistry registry);

  DefinitionPtr is_defined(const PrototypeId& id) const override;

  const LiteralRegistry& registry() const noexcept { return registry_; }

  static KnowledgeBasePtr instance();

 private:
  LiteralRegistry registry_;
};

/// The literal definition for `id`, or nullptr if it is not a default literal.
DefinitionPtr predefined_lookup(const PrototypeId& id);

/// Own definitions over a basis that answers whatever is not defined locally.
/// Built through KnowledgeBaseBuilder, which checks consistency first.
class LayeredKnowledgeBase final : public KnowledgeBase {
 public:
  DefinitionPtr is_defined(const PrototypeId& id) const override;

  /// Own IDs in insertion order, then basis IDs not shadowed by them.
  std::vector<PrototypeId> explicit_ids() const override;

  const KnowledgeBasePtr& basis() const noexcept { return basis_; }
  std::size_t own_size() const noexcept { return order_.size(); }
  const std::vector<DefinitionPtr>& own_definitions() const noexcept { return order_; }

 private:
  friend class KnowledgeBaseBuilder;
  LayeredKnowledgeBase(std::vector<DefinitionPtr> definitions, KnowledgeBasePtr basis);

  IdMap<DefinitionPtr> definitions_;
  std::vector<DefinitionPtr> order_;
  KnowledgeBasePtr basis_;
};

/// Queries its members in order; the first member defining an ID wins.
class ChainedKnowledgeBase final : public KnowledgeBase {
 public:
  explicit ChainedKnowledgeBase(std::vector<KnowledgeBasePtr> members);

  DefinitionPtr is_defined(const PrototypeId& id) const override;
  std::vector<PrototypeId> explicit_ids() const override;

  const std::vector<KnowledgeBasePtr>& members() const noexcept { return members_; }

 private:
  std::vector<KnowledgeBasePtr> members_;
};

}  // namespace protokb
