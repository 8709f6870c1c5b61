// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "protokb/definition.hpp"
#include "protokb/knowledge_base.hpp"

namespace protokb::datasets {

/// Seeded source for every generator: std::mt19937_64 (whose output sequence
/// the C++ standard fixes) with rejection sampling for bounded draws, so a
/// (spec, seed) pair yields the same dataset on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

enum class Family { kBaseline, kBlocks, kIncremental };

struct DatasetSpec {
  Family family = Family::kBaseline;
  std::uint64_t levels = 0;      // baseline: n
  std::uint64_t blocks = 1;      // blocks: B
  std::uint64_t block_size = 1;  // blocks: prototypes per block
  std::uint64_t count = 1;       // incremental: M
  std::uint64_t seed = 0;

  static DatasetSpec baseline(std::uint64_t n) { return {Family::kBaseline, n, 1, 1, 1, 0}; }
  static DatasetSpec blocks_of(std::uint64_t b, std::uint64_t size, std::uint64_t seed) {
    return {Family::kBlocks, 0, b, size, 1, seed};
  }
  static DatasetSpec incremental(std::uint64_t m, std::uint64_t seed) {
    return {Family::kIncremental, 0, 1, 1, m, seed};
  }

  /// Parses family name plus "<n>", "<B>,<blockSize>" or "<M>".
  /// Throws std::invalid_argument.
  static DatasetSpec parse(const std::string& family, const std::string& param, std::uint64_t seed);

  /// Throws std::invalid_argument when a parameter is out of range.
  void validate() const;

  std::string family_name() const;
  std::string param_string() const;

  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

/// Number of definitions generate() returns for `spec`.
std::uint64_t expected_count(const DatasetSpec& spec);

/// Levels 0..n, 2^k prototypes on level k; the root derives from the empty
/// prototype and every other prototype from the one with half its index, so
/// each parent has exactly two children. No properties. Deterministic.
std::vector<DefinitionPtr> gen_baseline(std::uint64_t n);

/// B blocks of `block_size`. Block 1 derives from the empty prototype and
/// sets the shared property to the fixed literal value; every prototype of
/// block i > 1 derives from a random block-(i-1) prototype and sets the
/// property to another random block-(i-1) prototype.
std::vector<DefinitionPtr> gen_blocks(std::uint64_t blocks, std::uint64_t block_size,
                                      std::uint64_t seed);

/// M prototypes created in order; prototype k > 0 derives from a random
/// earlier one. Each gets uniform{0..4} assignments, property drawn with
/// replacement from 10, value drawn from all M prototypes.
std::vector<DefinitionPtr> gen_incremental(std::uint64_t count, std::uint64_t seed);

std::vector<DefinitionPtr> generate(const DatasetSpec& spec);

/// Basis every generated dataset is built over: the literal KB, which holds
/// the fixed value of the blocks family.
KnowledgeBasePtr dataset_basis();

PropertyId blocks_property();
PrototypeId blocks_fixed_value();
PropertyId incremental_property(unsigned index);

}  // namespace protokb::datasets
