// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "protokb/definition.hpp"
#include "protokb/knowledge_base.hpp"

namespace protokb {

namespace violation {

struct InvalidIri {
  std::string where;
  std::string iri;
  std::string reason;
  friend bool operator==(const InvalidIri&, const InvalidIri&) = default;
};

enum class Role { kBase, kAddValue, kRemoveValue };

struct DanglingReference {
  PrototypeId from;
  PrototypeId missing;
  Role role;
  friend bool operator==(const DanglingReference&, const DanglingReference&) = default;
};

/// A base-chain cycle, first element repeated at the end. Rotated so that it
/// starts at the smallest ID of the cycle.
struct UngroundedInheritance {
  std::vector<PrototypeId> cycle;
  friend bool operator==(const UngroundedInheritance&, const UngroundedInheritance&) = default;
};

enum class Layer { kInput, kBasis };

struct DuplicateId {
  PrototypeId id;
  Layer layer;
  friend bool operator==(const DuplicateId&, const DuplicateId&) = default;
};

}  // namespace violation

using Violation = std::variant<violation::InvalidIri, violation::DanglingReference,
                               violation::UngroundedInheritance, violation::DuplicateId>;

std::string describe(const Violation& v);

struct ConsistencyReport {
  std::vector<Violation> violations;
  /// Nodes expanded by the grounding walk; each input definition at most once.
  std::size_t grounding_visits = 0;

  bool ok() const noexcept { return violations.empty(); }

  template <class Kind>
  std::size_t count() const {
    std::size_t n = 0;
    for (const auto& v : violations) n += std::holds_alternative<Kind>(v) ? 1 : 0;
    return n;
  }
};

class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(ConsistencyReport report);
  const ConsistencyReport& report() const noexcept { return report_; }

 private:
  ConsistencyReport report_;
};

struct BuildOptions {
  /// Accept definitions whose ID the basis already defines; they shadow it.
  bool allow_shadowing = false;
};

/// Checks that every input chain of bases ends at the empty prototype. Nodes
/// whose base lies in the (trusted) basis count as grounded; a base that is
/// defined nowhere makes its chain ungrounded without a cycle report, since
/// the dangling reference is reported separately.
ConsistencyReport check_grounded(std::span<const DefinitionPtr> definitions,
                                 const KnowledgeBase& basis);

/// Full check: references resolve, inheritance is grounded, no ID is defined
/// twice. All violations are collected.
ConsistencyReport check_consistency(std::span<const DefinitionPtr> definitions,
                                    const KnowledgeBase& basis, BuildOptions options = {});

struct BuildResult {
  std::shared_ptr<const LayeredKnowledgeBase> kb;  // null iff !report.ok()
  ConsistencyReport report;
};

BuildResult build_layered_kb(std::vector<DefinitionPtr> definitions, KnowledgeBasePtr basis,
                             BuildOptions options = {});

/// Collects definitions, then checks them and produces an immutable KB.
class KnowledgeBaseBuilder {
 public:
  explicit KnowledgeBaseBuilder(KnowledgeBasePtr basis = EmptyKnowledgeBase::instance(),
                                BuildOptions options = {});

  KnowledgeBaseBuilder& add(PrototypeDefinition definition);
  KnowledgeBaseBuilder& add(DefinitionPtr definition);

  /// Decodes one wire document. An invalid IRI is recorded as a violation
  /// (the build will be refused); other decoding errors throw WireError.
  KnowledgeBaseBuilder& add_document(std::string_view json, std::string where);

  std::size_t size() const noexcept { return definitions_.size(); }

  ConsistencyReport check() const;

  BuildResult try_build() const;

  /// Throws ConsistencyError when the definitions are inconsistent.
  std::shared_ptr<const LayeredKnowledgeBase> build() const;

 private:
  KnowledgeBasePtr basis_;
  BuildOptions options_;
  std::vector<DefinitionPtr> definitions_;
  std::vector<violation::InvalidIri> decode_violations_;
};

}  // namespace protokb
