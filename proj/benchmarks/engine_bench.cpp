// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "protokb/consistency.hpp"
#include "protokb/datasets.hpp"
#include "protokb/fixpoint.hpp"
#include "protokb/server.hpp"
#include "protokb/wire.hpp"

namespace {

using namespace protokb;
namespace ds = protokb::datasets;

// baseline(n): 2^(n+1) - 1 prototypes.
void BM_ConsistencyBaseline(benchmark::State& state) {
  const auto defs = ds::gen_baseline(static_cast<std::uint64_t>(state.range(0)));
  const auto basis = ds::dataset_basis();
  for (auto _ : state) benchmark::DoNotOptimize(check_consistency(defs, *basis));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(defs.size()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(defs.size()));
}
BENCHMARK(BM_ConsistencyBaseline)->DenseRange(10, 16)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oN);

void BM_BuildBaseline(benchmark::State& state) {
  const auto defs = ds::gen_baseline(static_cast<std::uint64_t>(state.range(0)));
  const auto basis = ds::dataset_basis();
  for (auto _ : state) benchmark::DoNotOptimize(build_layered_kb(defs, basis));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(defs.size()));
}
BENCHMARK(BM_BuildBaseline)->DenseRange(10, 16)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oN);

void BM_InterpretationBaseline(benchmark::State& state) {
  const auto defs = ds::gen_baseline(static_cast<std::uint64_t>(state.range(0)));
  const auto kb = build_layered_kb(defs, ds::dataset_basis()).kb;
  for (auto _ : state) benchmark::DoNotOptimize(compute_interpretation(*kb));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(defs.size()));
}
BENCHMARK(BM_InterpretationBaseline)->DenseRange(10, 16)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oN);

// Value sets grow with block depth, so this measures change-set application.
void BM_InterpretationBlocks(benchmark::State& state) {
  const auto defs = ds::gen_blocks(static_cast<std::uint64_t>(state.range(0)), 1000, 1);
  const auto kb = build_layered_kb(defs, ds::dataset_basis()).kb;
  for (auto _ : state) benchmark::DoNotOptimize(compute_interpretation(*kb));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(defs.size()));
}
BENCHMARK(BM_InterpretationBlocks)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

// One fixpoint against a warm cache: a lookup, no resolution.
void BM_FixpointCached(benchmark::State& state) {
  const auto defs = ds::gen_incremental(10000, 1);
  const auto kb = build_layered_kb(defs, ds::dataset_basis()).kb;
  FixpointCache cache;
  compute_interpretation(*kb, cache);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolve_fixpoint(*kb, defs[i]->id(), cache));
    i = (i + 7919) % defs.size();
  }
}
BENCHMARK(BM_FixpointCached);

void BM_WireEncode(benchmark::State& state) {
  const auto defs = ds::gen_incremental(1000, 2);
  std::size_t bytes = 0;
  for (auto _ : state) {
    for (const auto& d : defs) {
      auto doc = wire::encode_definition(*d);
      bytes += doc.size();
      benchmark::DoNotOptimize(doc);
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(defs.size()));
}
BENCHMARK(BM_WireEncode);

void BM_WireDecode(benchmark::State& state) {
  std::vector<std::string> docs;
  for (const auto& d : ds::gen_incremental(1000, 2)) docs.push_back(wire::encode_definition(*d));
  std::size_t bytes = 0;
  for (auto _ : state) {
    for (const auto& doc : docs) {
      benchmark::DoNotOptimize(wire::decode_definition(doc));
      bytes += doc.size();
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}
BENCHMARK(BM_WireDecode);

// Request handling without sockets; arg 1 negotiates gzip.
void BM_ServiceFixpoint(benchmark::State& state) {
  const auto defs = ds::gen_incremental(5000, 3);
  ServerConfig config;
  config.backing = build_layered_kb(defs, ds::dataset_basis()).kb;
  config.precompute_fixpoints = true;
  const PrototypeService service(config);
  RequestInfo request;
  if (state.range(0) != 0) request.accept_encoding = "gzip";
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(service.get_fixpoint(defs[i]->id().str(), request));
    i = (i + 7919) % defs.size();
  }
}
BENCHMARK(BM_ServiceFixpoint)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
