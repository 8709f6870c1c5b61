// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>

#include "protokb/ids.hpp"

namespace protokb {

using ValueSet = std::set<PrototypeId>;
using PropertyValues = std::map<PropertyId, ValueSet>;
using PropertySet = std::set<PropertyId>;

/// Property-value mutations: additions, removals and whole-property removals.
///
/// Always canonical: no empty value sets, and a property listed in
/// remove_all() never also appears in removals().
class ChangeSet {
 public:
  ChangeSet() noexcept;
  ChangeSet(PropertyValues additions, PropertyValues removals, PropertySet remove_all);
  ChangeSet(const ChangeSet& other);
  ChangeSet& operator=(const ChangeSet& other);
  ChangeSet(ChangeSet&&) noexcept;
  ChangeSet& operator=(ChangeSet&&) noexcept;
  ~ChangeSet();

  ChangeSet& add(const PropertyId& property, const PrototypeId& value);
  ChangeSet& remove(const PropertyId& property, const PrototypeId& value);
  ChangeSet& remove_all(const PropertyId& property);

  const PropertyValues& additions() const noexcept;
  const PropertyValues& removals() const noexcept;
  const PropertySet& removed_properties() const noexcept;

  bool has_additions() const noexcept { return !additions().empty(); }
  bool has_removals() const noexcept { return !removals().empty() || !removed_properties().empty(); }
  bool empty() const noexcept { return data_ == nullptr; }

  /// Number of (property, value) addition pairs.
  std::size_t addition_count() const noexcept;

  friend bool operator==(const ChangeSet& a, const ChangeSet& b) noexcept;

 private:
  struct Data;
  Data& data();

  // Null while empty; most prototypes change nothing.
  std::unique_ptr<Data> data_;
};

/// Materialized property state of a prototype. Never stores empty value sets.
class PropertyMap {
 public:
  PropertyMap() = default;
  explicit PropertyMap(PropertyValues entries);

  const PropertyValues& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  /// Values of `property`, or an empty set.
  const ValueSet& values(const PropertyId& property) const;

  /// Total number of (property, value) pairs.
  std::size_t value_count() const noexcept;

  friend bool operator==(const PropertyMap&, const PropertyMap&) = default;

 private:
  friend PropertyMap apply_changeset(PropertyMap props, const ChangeSet& remove,
                                     const ChangeSet& add);
  PropertyValues entries_;
};

/// One inheritance step: drops every pair in `remove.removals()`, every value
/// of each property in `remove.removed_properties()`, then inserts every pair
/// of `add.additions()`. Removal data in `add` and addition data in `remove`
/// are ignored.
PropertyMap apply_changeset(PropertyMap props, const ChangeSet& remove, const ChangeSet& add);

}  // namespace protokb
