// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "protokb/datasets.hpp"
#include "protokb/fixpoint.hpp"

namespace protokb::bench {

struct Moments {
  double mean = 0.0;
  double stdev = 0.0;  // population
};

Moments moments(std::span<const double> values);

/// Added (property, value) pairs per definition.
Moments direct_property_stats(std::span<const DefinitionPtr> defs);

/// (property, value) pairs per fixpoint.
Moments fixpoint_property_stats(const Interpretation& interpretation);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(std::span<const double> x, std::span<const double> y);

struct RemoteTiming {
  std::size_t amount = 0;
  double millis = 0.0;
};

struct RemoteResult {
  std::string mode;  // "single" when concurrency is 1, otherwise "multi"
  std::size_t concurrency = 1;
  std::vector<RemoteTiming> timings;
};

struct BenchReport {
  std::optional<datasets::DatasetSpec> spec;
  std::string source;  // dataset file, when not generated in-process
  std::uint64_t prototype_count = 0;
  double consistency_millis = 0.0;
  double fixpoint_millis = 0.0;
  double mean_props_per_fixpoint = 0.0;
  double stdev_props_per_fixpoint = 0.0;
  double mean_direct_props = 0.0;
  double stdev_direct_props = 0.0;
  std::optional<RemoteResult> remote;

  nlohmann::json to_json() const;
};

struct LocalBenchOptions {
  bool warmup = true;
};

/// Times build_layered_kb and compute_interpretation over `defs` (built on
/// the dataset basis) and records fixpoint statistics. Throws
/// ConsistencyError if the data is inconsistent.
BenchReport run_local_bench(const std::vector<DefinitionPtr>& defs, LocalBenchOptions options = {});

/// Generates the dataset (untimed) and benchmarks it.
BenchReport run_local_bench(const datasets::DatasetSpec& spec, LocalBenchOptions options = {});

struct RemoteBenchOptions {
  std::string server_url;
  std::vector<std::size_t> amounts;
  std::size_t concurrency = 1;
  std::uint64_t seed = 0;
  /// Requests issued before measuring, to open connections.
  std::size_t warmup_requests = 0;
};

/// For each amount, fetches that many fixpoints of IDs drawn uniformly from
/// `ids`, with client caching disabled, and records wall-clock time.
/// Throws on any transport or protocol error.
RemoteResult run_remote_bench(std::span<const PrototypeId> ids, const RemoteBenchOptions& options);

}  // namespace protokb::bench
