// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/datasets.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

#include "protokb/literals.hpp"

namespace protokb::datasets {
namespace {

constexpr unsigned kIncrementalProperties = 10;
constexpr unsigned kMaxAssignments = 4;
constexpr std::uint64_t kMaxBaselineLevels = 40;

std::uint64_t parse_number(std::string_view text) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a non-negative integer: '" + std::string(text) + "'");
  }
  return value;
}

PrototypeId baseline_id(std::uint64_t index) {
  return PrototypeId::parse("gen:baseline:" + std::to_string(index));
}

PrototypeId block_id(std::uint64_t block, std::uint64_t index) {
  return PrototypeId::parse("gen:blocks:" + std::to_string(block) + ":" + std::to_string(index));
}

PrototypeId incremental_id(std::uint64_t index) {
  return PrototypeId::parse("gen:incremental:" + std::to_string(index));
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return draw % bound;
}

DatasetSpec DatasetSpec::parse(const std::string& family, const std::string& param,
                               std::uint64_t seed) {
  DatasetSpec spec;
  spec.seed = seed;
  if (family == "baseline") {
    spec.family = Family::kBaseline;
    spec.levels = parse_number(param);
  } else if (family == "blocks") {
    spec.family = Family::kBlocks;
    const auto comma = param.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("blocks needs <B>,<blockSize>");
    spec.blocks = parse_number(std::string_view(param).substr(0, comma));
    spec.block_size = parse_number(std::string_view(param).substr(comma + 1));
  } else if (family == "incremental") {
    spec.family = Family::kIncremental;
    spec.count = parse_number(param);
  } else {
    throw std::invalid_argument("unknown dataset family '" + family + "'");
  }
  spec.validate();
  return spec;
}

void DatasetSpec::validate() const {
  switch (family) {
    case Family::kBaseline:
      if (levels > kMaxBaselineLevels) throw std::invalid_argument("baseline n too large");
      break;
    case Family::kBlocks:
      if (blocks < 1 || block_size < 1) throw std::invalid_argument("blocks needs B >= 1 and blockSize >= 1");
      break;
    case Family::kIncremental:
      if (count < 1) throw std::invalid_argument("incremental needs M >= 1");
      break;
  }
}

std::string DatasetSpec::family_name() const {
  switch (family) {
    case Family::kBaseline: return "baseline";
    case Family::kBlocks: return "blocks";
    case Family::kIncremental: return "incremental";
  }
  return "?";
}

std::string DatasetSpec::param_string() const {
  switch (family) {
    case Family::kBaseline: return std::to_string(levels);
    case Family::kBlocks: return std::to_string(blocks) + "," + std::to_string(block_size);
    case Family::kIncremental: return std::to_string(count);
  }
  return "";
}

std::uint64_t expected_count(const DatasetSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::kBaseline: return (std::uint64_t{1} << (spec.levels + 1)) - 1;
    case Family::kBlocks: return spec.blocks * spec.block_size;
    case Family::kIncremental: return spec.count;
  }
  return 0;
}

std::vector<DefinitionPtr> gen_baseline(std::uint64_t n) {
  const std::uint64_t total = expected_count(DatasetSpec::baseline(n));
  std::vector<DefinitionPtr> out;
  out.reserve(total);
  out.push_back(make_definition(baseline_id(0), empty_prototype_id()));
  for (std::uint64_t k = 1; k < total; ++k) {
    out.push_back(make_definition(baseline_id(k), baseline_id((k - 1) / 2)));
  }
  return out;
}

std::vector<DefinitionPtr> gen_blocks(std::uint64_t blocks, std::uint64_t block_size,
                                      std::uint64_t seed) {
  DatasetSpec::blocks_of(blocks, block_size, seed).validate();
  Rng rng(seed);
  const PropertyId property = blocks_property();
  std::vector<DefinitionPtr> out;
  out.reserve(blocks * block_size);
  for (std::uint64_t i = 0; i < block_size; ++i) {
    out.push_back(make_definition(block_id(1, i), empty_prototype_id(),
                                  ChangeSet().add(property, blocks_fixed_value())));
  }
  for (std::uint64_t block = 2; block <= blocks; ++block) {
    for (std::uint64_t i = 0; i < block_size; ++i) {
      const auto base = rng.below(block_size);
      const auto value = rng.below(block_size);
      out.push_back(make_definition(block_id(block, i), block_id(block - 1, base),
                                    ChangeSet().add(property, block_id(block - 1, value))));
    }
  }
  return out;
}

std::vector<DefinitionPtr> gen_incremental(std::uint64_t count, std::uint64_t seed) {
  DatasetSpec::incremental(count, seed).validate();
  Rng rng(seed);
  std::vector<PropertyId> properties;
  for (unsigned p = 0; p < kIncrementalProperties; ++p) properties.push_back(incremental_property(p));

  std::vector<DefinitionPtr> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    PrototypeId base = k == 0 ? empty_prototype_id() : incremental_id(rng.below(k));
    ChangeSet add;
    const auto assignments = rng.below(kMaxAssignments + 1);
    for (std::uint64_t a = 0; a < assignments; ++a) {
      const auto& property = properties[rng.below(kIncrementalProperties)];
      add.add(property, incremental_id(rng.below(count)));
    }
    out.push_back(make_definition(incremental_id(k), std::move(base), std::move(add)));
  }
  return out;
}

std::vector<DefinitionPtr> generate(const DatasetSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::kBaseline: return gen_baseline(spec.levels);
    case Family::kBlocks: return gen_blocks(spec.blocks, spec.block_size, spec.seed);
    case Family::kIncremental: return gen_incremental(spec.count, spec.seed);
  }
  return {};
}

KnowledgeBasePtr dataset_basis() { return PredefinedKnowledgeBase::instance(); }

PropertyId blocks_property() { return PropertyId::parse("gen:property:value"); }

PrototypeId blocks_fixed_value() { return literal::string_id("fixed"); }

PropertyId incremental_property(unsigned index) {
  return PropertyId::parse("gen:property:" + std::to_string(index));
}

}  // namespace protokb::datasets
