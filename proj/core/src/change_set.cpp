// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/change_set.hpp"


namespace protokb {
namespace {

void drop_empty(PropertyValues& values) {
  std::erase_if(values, [](const auto& entry) { return entry.second.empty(); });
}

std::size_t pair_count(const PropertyValues& values) {
  std::size_t n = 0;
  for (const auto& [property, set] : values) n += set.size();
  return n;
}

const ValueSet kNoValues;
const PropertyValues kNoPropertyValues;
const PropertySet kNoProperties;

}  // namespace

struct ChangeSet::Data {
  PropertyValues additions;
  PropertyValues removals;
  PropertySet remove_all;
};

ChangeSet::ChangeSet(PropertyValues additions, PropertyValues removals, PropertySet remove_all) {
  drop_empty(additions);
  drop_empty(removals);
  for (const auto& property : remove_all) removals.erase(property);
  if (additions.empty() && removals.empty() && remove_all.empty()) return;
  data_ = std::make_unique<Data>(Data{std::move(additions), std::move(removals), std::move(remove_all)});
}

ChangeSet::ChangeSet(const ChangeSet& other)
    : data_(other.data_ ? std::make_unique<Data>(*other.data_) : nullptr) {}

ChangeSet& ChangeSet::operator=(const ChangeSet& other) {
  if (this != &other) data_ = other.data_ ? std::make_unique<Data>(*other.data_) : nullptr;
  return *this;
}

ChangeSet::ChangeSet() noexcept = default;
ChangeSet::ChangeSet(ChangeSet&&) noexcept = default;
ChangeSet& ChangeSet::operator=(ChangeSet&&) noexcept = default;
ChangeSet::~ChangeSet() = default;

ChangeSet::Data& ChangeSet::data() {
  if (!data_) data_ = std::make_unique<Data>();
  return *data_;
}

const PropertyValues& ChangeSet::additions() const noexcept {
  return data_ ? data_->additions : kNoPropertyValues;
}
const PropertyValues& ChangeSet::removals() const noexcept {
  return data_ ? data_->removals : kNoPropertyValues;
}
const PropertySet& ChangeSet::removed_properties() const noexcept {
  return data_ ? data_->remove_all : kNoProperties;
}

ChangeSet& ChangeSet::add(const PropertyId& property, const PrototypeId& value) {
  data().additions[property].insert(value);
  return *this;
}

ChangeSet& ChangeSet::remove(const PropertyId& property, const PrototypeId& value) {
  // A remove_all already covers it; the set stays canonical.
  if (data_ && data_->remove_all.contains(property)) return *this;
  data().removals[property].insert(value);
  return *this;
}

ChangeSet& ChangeSet::remove_all(const PropertyId& property) {
  auto& d = data();
  d.remove_all.insert(property);
  d.removals.erase(property);
  return *this;
}

std::size_t ChangeSet::addition_count() const noexcept { return pair_count(additions()); }

bool operator==(const ChangeSet& a, const ChangeSet& b) noexcept {
  return a.additions() == b.additions() && a.removals() == b.removals() &&
         a.removed_properties() == b.removed_properties();
}

PropertyMap::PropertyMap(PropertyValues entries) : entries_(std::move(entries)) {
  drop_empty(entries_);
}

const ValueSet& PropertyMap::values(const PropertyId& property) const {
  auto it = entries_.find(property);
  return it == entries_.end() ? kNoValues : it->second;
}

std::size_t PropertyMap::value_count() const noexcept { return pair_count(entries_); }

PropertyMap apply_changeset(PropertyMap props, const ChangeSet& remove, const ChangeSet& add) {
  auto& entries = props.entries_;
  for (const auto& property : remove.removed_properties()) entries.erase(property);
  for (const auto& [property, values] : remove.removals()) {
    auto it = entries.find(property);
    if (it == entries.end()) continue;
    for (const auto& value : values) it->second.erase(value);
    if (it->second.empty()) entries.erase(it);
  }
  for (const auto& [property, values] : add.additions()) {
    entries[property].insert(values.begin(), values.end());
  }
  return props;
}

}  // namespace protokb
