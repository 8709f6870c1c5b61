// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/consistency.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string_view>

#include "protokb/id_map.hpp"
#include "protokb/wire.hpp"

namespace protokb {
namespace {

using Index = IdMap<std::size_t>;

// First occurrence of every input ID.
Index index_inputs(std::span<const DefinitionPtr> definitions) {
  Index index;
  index.reserve(definitions.size());
  for (std::size_t i = 0; i < definitions.size(); ++i) index.emplace(definitions[i]->id(), i);
  return index;
}

std::vector<PrototypeId> canonical_cycle(std::vector<PrototypeId> cycle) {
  auto smallest = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), smallest, cycle.end());
  cycle.push_back(cycle.front());
  return cycle;
}

// Where each definition's base leads: an input position, or one of these.
constexpr std::size_t kGroundedBase = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMissingBase = kGroundedBase - 1;
constexpr std::size_t kDuplicate = kGroundedBase - 2;  // not first occurrence, not walked

// Remembers which IDs the basis resolves so that repeated references cost one
// lookup each.
class BasisResolver {
 public:
  explicit BasisResolver(const KnowledgeBase& basis) : basis_(basis) {}

  bool resolves(const PrototypeId& id) {
    if (auto it = known_.find(id); it != known_.end()) return it->second;
    const bool defined = basis_.is_defined(id) != nullptr;
    known_.emplace(id, defined);
    return defined;
  }

 private:
  const KnowledgeBase& basis_;
  IdMap<bool> known_;
};

std::size_t resolve_base(const PrototypeDefinition& def, const Index& index, BasisResolver& resolver) {
  if (def.id() == empty_prototype_id() && def.base() == empty_prototype_id()) return kGroundedBase;
  if (auto it = index.find(def.base()); it != index.end()) return it->second;
  return resolver.resolves(def.base()) ? kGroundedBase : kMissingBase;
}

std::vector<std::size_t> resolve_bases(std::span<const DefinitionPtr> definitions, const Index& index,
                                       BasisResolver& resolver) {
  std::vector<std::size_t> bases(definitions.size());
  for (std::size_t i = 0; i < definitions.size(); ++i) {
    const auto& def = *definitions[i];
    bases[i] = index.at(def.id()) == i ? resolve_base(def, index, resolver) : kDuplicate;
  }
  return bases;
}

enum class Mark : std::uint8_t { kUnvisited, kOnPath, kGrounded, kUngrounded };

// Iterative walk over resolved base positions; each node is expanded once.
ConsistencyReport ground(std::span<const DefinitionPtr> definitions, const std::vector<std::size_t>& bases) {
  ConsistencyReport report;
  const std::size_t n = definitions.size();
  std::vector<Mark> marks(n, Mark::kUnvisited);
  std::vector<std::size_t> path_position(n, 0);
  std::vector<std::size_t> path;

  for (std::size_t start = 0; start < n; ++start) {
    if (bases[start] == kDuplicate || marks[start] != Mark::kUnvisited) continue;

    path.clear();
    std::size_t current = start;
    Mark outcome;
    while (true) {
      marks[current] = Mark::kOnPath;
      path_position[current] = path.size();
      path.push_back(current);
      ++report.grounding_visits;

      const std::size_t base = bases[current];
      if (base == kGroundedBase || base == kMissingBase) {
        outcome = base == kGroundedBase ? Mark::kGrounded : Mark::kUngrounded;
        break;
      }
      if (marks[base] == Mark::kUnvisited) {
        current = base;
        continue;
      }
      if (marks[base] == Mark::kOnPath) {
        std::vector<PrototypeId> cycle;
        for (std::size_t k = path_position[base]; k < path.size(); ++k) {
          cycle.push_back(definitions[path[k]]->id());
        }
        report.violations.emplace_back(
            violation::UngroundedInheritance{canonical_cycle(std::move(cycle))});
        outcome = Mark::kUngrounded;
        break;
      }
      outcome = marks[base];
      break;
    }
    for (const std::size_t node : path) marks[node] = outcome;
  }
  return report;
}

void check_references(std::span<const DefinitionPtr> definitions, const std::vector<std::size_t>& bases,
                      const Index& index, BasisResolver& resolver, std::vector<Violation>& out) {
  auto check = [&](const PrototypeId& from, const PrototypeId& target, violation::Role role) {
    if (index.contains(target) || resolver.resolves(target)) return;
    out.emplace_back(violation::DanglingReference{from, target, role});
  };
  for (std::size_t i = 0; i < definitions.size(); ++i) {
    const auto& def = *definitions[i];
    if (bases[i] == kMissingBase) {
      out.emplace_back(violation::DanglingReference{def.id(), def.base(), violation::Role::kBase});
    } else if (bases[i] == kDuplicate) {
      check(def.id(), def.base(), violation::Role::kBase);
    }
    for (const auto& [property, values] : def.add().additions()) {
      for (const auto& value : values) check(def.id(), value, violation::Role::kAddValue);
    }
    for (const auto& [property, values] : def.remove().removals()) {
      for (const auto& value : values) check(def.id(), value, violation::Role::kRemoveValue);
    }
  }
}

void check_duplicates(std::span<const DefinitionPtr> definitions, const std::vector<std::size_t>& bases,
                      const KnowledgeBase& basis, BuildOptions options, std::vector<Violation>& out) {
  for (std::size_t i = 0; i < definitions.size(); ++i) {
    const auto& id = definitions[i]->id();
    if (bases[i] == kDuplicate) {
      out.emplace_back(violation::DuplicateId{id, violation::Layer::kInput});
    } else if (!options.allow_shadowing && basis.is_defined(id)) {
      out.emplace_back(violation::DuplicateId{id, violation::Layer::kBasis});
    }
  }
}

const char* role_name(violation::Role role) {
  switch (role) {
    case violation::Role::kBase: return "base";
    case violation::Role::kAddValue: return "add value";
    case violation::Role::kRemoveValue: return "remove value";
  }
  return "?";
}

std::string summarize(const ConsistencyReport& report) {
  std::string msg = "inconsistent knowledge base: " + std::to_string(report.violations.size()) +
                    " violation(s)";
  if (!report.violations.empty()) msg += "; first: " + describe(report.violations.front());
  return msg;
}

}  // namespace

std::string describe(const Violation& v) {
  struct Visitor {
    std::string operator()(const violation::InvalidIri& x) const {
      return "invalid IRI '" + x.iri + "' at " + x.where + ": " + x.reason;
    }
    std::string operator()(const violation::DanglingReference& x) const {
      return x.from.str() + " references undefined " + x.missing.str() + " as " +
             role_name(x.role);
    }
    std::string operator()(const violation::UngroundedInheritance& x) const {
      std::string s = "base cycle";
      for (std::size_t i = 0; i < x.cycle.size(); ++i) s += (i ? " -> " : " ") + x.cycle[i].str();
      return s;
    }
    std::string operator()(const violation::DuplicateId& x) const {
      return "duplicate ID " + x.id.str() +
             (x.layer == violation::Layer::kBasis ? " (defined in basis)" : " (defined twice)");
    }
  };
  return std::visit(Visitor{}, v);
}

ConsistencyError::ConsistencyError(ConsistencyReport report)
    : std::runtime_error(summarize(report)), report_(std::move(report)) {}

ConsistencyReport check_grounded(std::span<const DefinitionPtr> definitions,
                                 const KnowledgeBase& basis) {
  const Index index = index_inputs(definitions);
  BasisResolver resolver(basis);
  return ground(definitions, resolve_bases(definitions, index, resolver));
}

ConsistencyReport check_consistency(std::span<const DefinitionPtr> definitions,
                                    const KnowledgeBase& basis, BuildOptions options) {
  const Index index = index_inputs(definitions);
  BasisResolver resolver(basis);
  const auto bases = resolve_bases(definitions, index, resolver);

  ConsistencyReport report;
  check_references(definitions, bases, index, resolver, report.violations);

  ConsistencyReport grounding = ground(definitions, bases);
  report.grounding_visits = grounding.grounding_visits;
  std::move(grounding.violations.begin(), grounding.violations.end(),
            std::back_inserter(report.violations));

  check_duplicates(definitions, bases, basis, options, report.violations);
  return report;
}

BuildResult build_layered_kb(std::vector<DefinitionPtr> definitions, KnowledgeBasePtr basis,
                             BuildOptions options) {
  KnowledgeBaseBuilder builder(std::move(basis), options);
  for (auto& def : definitions) builder.add(std::move(def));
  return builder.try_build();
}

KnowledgeBaseBuilder::KnowledgeBaseBuilder(KnowledgeBasePtr basis, BuildOptions options)
    : basis_(std::move(basis)), options_(options) {}

KnowledgeBaseBuilder& KnowledgeBaseBuilder::add(PrototypeDefinition definition) {
  definitions_.push_back(std::make_shared<const PrototypeDefinition>(std::move(definition)));
  return *this;
}

KnowledgeBaseBuilder& KnowledgeBaseBuilder::add(DefinitionPtr definition) {
  definitions_.push_back(std::move(definition));
  return *this;
}

KnowledgeBaseBuilder& KnowledgeBaseBuilder::add_document(std::string_view json, std::string where) {
  try {
    add(wire::decode_definition(json));
  } catch (const wire::WireError& e) {
    if (e.kind() != wire::WireError::Kind::kInvalidIri) throw;
    decode_violations_.push_back({std::move(where), e.detail(), e.what()});
  }
  return *this;
}

ConsistencyReport KnowledgeBaseBuilder::check() const {
  ConsistencyReport report = check_consistency(definitions_, *basis_, options_);
  std::vector<Violation> violations(decode_violations_.begin(), decode_violations_.end());
  std::move(report.violations.begin(), report.violations.end(), std::back_inserter(violations));
  report.violations = std::move(violations);
  return report;
}

BuildResult KnowledgeBaseBuilder::try_build() const {
  BuildResult result;
  result.report = check();
  if (result.report.ok()) {
    result.kb = std::shared_ptr<const LayeredKnowledgeBase>(
        new LayeredKnowledgeBase(definitions_, basis_));
  }
  return result;
}

std::shared_ptr<const LayeredKnowledgeBase> KnowledgeBaseBuilder::build() const {
  BuildResult result = try_build();
  if (!result.report.ok()) throw ConsistencyError(std::move(result.report));
  return std::move(result.kb);
}

}  // namespace protokb
