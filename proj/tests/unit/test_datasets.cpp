// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "protokb/bench.hpp"
#include "protokb/consistency.hpp"
#include "protokb/datasets.hpp"
#include "protokb/fixpoint.hpp"
#include "protokb/server.hpp"
#include "protokb/wire.hpp"

using namespace protokb;
namespace ds = protokb::datasets;

namespace {

PrototypeId P(std::string_view s) { return PrototypeId::parse(s); }

std::shared_ptr<const LayeredKnowledgeBase> build(const std::vector<DefinitionPtr>& defs) {
  auto result = build_layered_kb(defs, ds::dataset_basis());
  REQUIRE(result.report.ok());
  return result.kb;
}

std::uint64_t index_of(const PrototypeId& id) {
  return std::stoull(id.str().substr(id.str().rfind(':') + 1));
}

}  // namespace

TEST_CASE("Rng: deterministic, bounded, unbiased") {
  ds::Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(1000);
    CHECK(x == b.below(1000));
    CHECK(x < 1000);
    differs |= x != c.below(1000);
  }
  CHECK(differs);
  CHECK_THROWS(a.below(0));

  // Chi-square over 6 buckets; 5 degrees of freedom, p=0.001 critical value 20.5.
  ds::Rng r(7);
  std::array<int, 6> counts{};
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++counts[r.below(6)];
  double chi = 0;
  for (int k : counts) chi += (k - n / 6.0) * (k - n / 6.0) / (n / 6.0);
  CHECK(chi < 20.5);

  // The engine is the standard one: its 10000th output is fixed by the standard.
  std::mt19937_64 reference;
  reference.discard(9999);
  CHECK(reference() == 9981545732273789042ull);
}

TEST_CASE("spec parsing and validation") {
  CHECK(ds::DatasetSpec::parse("baseline", "8", 0) == ds::DatasetSpec::baseline(8));
  CHECK(ds::DatasetSpec::parse("blocks", "10,1000", 3) == ds::DatasetSpec::blocks_of(10, 1000, 3));
  CHECK(ds::DatasetSpec::parse("incremental", "100", 9) == ds::DatasetSpec::incremental(100, 9));
  for (auto [family, param] : std::vector<std::pair<const char*, const char*>>{
           {"blocks", "10"}, {"blocks", "0,5"}, {"blocks", "5,0"}, {"incremental", "0"},
           {"baseline", "-1"}, {"baseline", "x"}, {"baseline", "64"}, {"nope", "1"}, {"incremental", "1.5"}}) {
    CAPTURE(family);
    CAPTURE(param);
    CHECK_THROWS_AS(ds::DatasetSpec::parse(family, param, 0), std::invalid_argument);
  }
  const auto s = ds::DatasetSpec::blocks_of(3, 7, 1);
  CHECK(s.family_name() == "blocks");
  CHECK(s.param_string() == "3,7");
}

TEST_CASE("expected_count matches the generators") {
  for (const auto& spec : {ds::DatasetSpec::baseline(0), ds::DatasetSpec::baseline(10), ds::DatasetSpec::blocks_of(3, 17, 2),
                           ds::DatasetSpec::incremental(123, 5)}) {
    CHECK(ds::generate(spec).size() == ds::expected_count(spec));
  }
  // Closed form for a full binary tree of depth n: 2^(n+1) - 1.
  CHECK(ds::expected_count(ds::DatasetSpec::baseline(19)) == 1048575);
}

TEST_CASE("baseline(8): 511 prototypes, binary tree, empty fixpoints") {
  const auto defs = ds::gen_baseline(8);
  CHECK(defs.size() == 511);
  std::map<std::string, int> children;
  for (const auto& d : defs) {
    CHECK(d->add().empty());
    CHECK(d->remove().empty());
    if (d->base() != empty_prototype_id()) ++children[d->base().str()];
  }
  CHECK(children.size() == 255);  // every non-leaf
  for (const auto& [id, n] : children) CHECK(n == 2);
  const auto kb = build(defs);
  const auto interp = compute_interpretation(*kb);
  CHECK(interp.size() == 511);
  for (const auto& [id, fp] : interp) CHECK(fp.properties.empty());
  CHECK(ds::gen_baseline(8).front()->id() == defs.front()->id());
}

TEST_CASE("blocks: structure and statistics") {
  const auto defs = ds::gen_blocks(4, 100, 1);
  CHECK(defs.size() == 400);
  for (const auto& d : defs) {
    const auto& s = d->id().str();  // gen:blocks:<b>:<i>
    const auto block = std::stoull(s.substr(11, s.rfind(':') - 11));
    const auto& values = d->add().additions().at(ds::blocks_property());
    REQUIRE(values.size() == 1);
    if (block == 1) {
      CHECK(d->base() == empty_prototype_id());
      CHECK(*values.begin() == ds::blocks_fixed_value());
    } else {
      const std::string prev = "gen:blocks:" + std::to_string(block - 1) + ":";
      CHECK(d->base().str().starts_with(prev));
      CHECK(values.begin()->str().starts_with(prev));
    }
  }
  const auto kb = build(defs);
  const auto interp = compute_interpretation(*kb);
  CHECK(interp.size() == 400);
  // Oracle: a block-b fixpoint carries exactly b values, so per-block counts
  // are 1..B and the population stdev is sqrt((B^2-1)/12).
  const auto m = bench::fixpoint_property_stats(interp);
  CHECK(m.mean == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(m.stdev == doctest::Approx(std::sqrt(15.0 / 12.0)).epsilon(1e-9));
  for (const auto& [id, fp] : interp) {
    const auto& s = id.str();
    CHECK(fp.properties.value_count() == std::stoull(s.substr(11, s.rfind(':') - 11)));
  }
  // Seeded and reproducible.
  const auto again = ds::gen_blocks(4, 100, 1);
  const auto other = ds::gen_blocks(4, 100, 2);
  bool same = true, differs = false;
  for (std::size_t i = 0; i < defs.size(); ++i) {
    same &= *defs[i] == *again[i];
    differs |= !(*defs[i] == *other[i]);
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("incremental: structure") {
  const auto defs = ds::gen_incremental(2000, 5);
  CHECK(defs.size() == 2000);
  for (std::size_t k = 0; k < defs.size(); ++k) {
    const auto& d = defs[k];
    CHECK(index_of(d->id()) == k);
    if (k == 0) {
      CHECK(d->base() == empty_prototype_id());
    } else {
      CHECK(index_of(d->base()) < k);
    }
    CHECK(d->add().addition_count() <= 4);
    for (const auto& [p, vs] : d->add().additions()) {
      CHECK(p.str().starts_with("gen:property:"));
      CHECK(std::stoi(p.str().substr(13)) < 10);
      for (const auto& v : vs) CHECK(index_of(v) < 2000);
    }
  }
  const auto kb = build(defs);
  FixpointCache cache;
  for (std::size_t k = 0; k < defs.size(); k += 37)
    CHECK(testing::to_plain(compute_fixpoint(*kb, defs[k]->id(), cache).properties) ==
          testing::naive_fixpoint(*kb, defs[k]->id()));
}

TEST_CASE("generated datasets survive ndjson") {
  const auto defs = ds::gen_incremental(500, 3);
  std::stringstream ss;
  wire::write_ndjson(ss, defs);
  const auto back = wire::read_ndjson(ss);
  REQUIRE(back.size() == defs.size());
  for (std::size_t i = 0; i < defs.size(); ++i) CHECK(*back[i] == *defs[i]);
}

TEST_CASE("moments and linear fit against direct formulas") {
  const std::vector<double> v = {2, 4, 4, 4, 5, 5, 7, 9};
  const auto m = bench::moments(v);
  CHECK(m.mean == doctest::Approx(5.0));
  CHECK(m.stdev == doctest::Approx(2.0));
  CHECK(bench::moments(std::vector<double>{}).mean == 0.0);

  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> line = {3, 5, 7, 9, 11};
  CHECK(bench::linear_fit_r2(x, line) == doctest::Approx(1.0));
  const std::vector<double> y = {1, 3, 2, 5, 4};
  // r = 0.8 for this data, so R^2 = 0.64.
  CHECK(bench::linear_fit_r2(x, y) == doctest::Approx(0.64));

  const std::vector<DefinitionPtr> defs = {
      make_definition(P("ex:a"), empty_prototype_id()),
      make_definition(P("ex:b"), empty_prototype_id(),
                      ChangeSet().add(PropertyId::parse("ex:p"), P("ex:a")).add(PropertyId::parse("ex:p"), P("ex:b")))};
  const auto d = bench::direct_property_stats(defs);
  CHECK(d.mean == doctest::Approx(1.0));
  CHECK(d.stdev == doctest::Approx(1.0));
}

TEST_CASE("local bench report") {
  const auto report = bench::run_local_bench(ds::DatasetSpec::blocks_of(4, 50, 9), {.warmup = false});
  CHECK(report.prototype_count == 200);
  CHECK(report.mean_props_per_fixpoint == doctest::Approx(2.5));
  CHECK(report.mean_direct_props == doctest::Approx(1.0));
  CHECK(report.consistency_millis >= 0.0);
  const auto j = report.to_json();
  CHECK(j["spec"]["family"] == "blocks");
  CHECK(j["prototypeCount"] == 200);
  CHECK_FALSE(j.contains("remote"));

  const std::vector<DefinitionPtr> broken = {make_definition(P("ex:a"), P("ex:a"))};
  CHECK_THROWS_AS(bench::run_local_bench(broken), ConsistencyError);
}

TEST_CASE("remote bench against an in-process server") {
  const auto defs = ds::gen_baseline(5);
  ServerConfig config;
  config.backing = build(defs);
  PrototypeServer server(std::move(config));
  server.start();

  std::vector<PrototypeId> ids;
  for (const auto& d : defs) ids.push_back(d->id());
  bench::RemoteBenchOptions options{.server_url = server.base_url(), .amounts = {10, 20}, .concurrency = 4, .seed = 1};
  const auto result = bench::run_remote_bench(ids, options);
  CHECK(result.mode == "multi");
  REQUIRE(result.timings.size() == 2);
  CHECK(result.timings[1].amount == 20);
  CHECK(server.stats().requests == 30);
  CHECK(server.stats().ok == 30);
  CHECK(server.stats().conditional == 0);  // caching off

  options.concurrency = 1;
  CHECK(bench::run_remote_bench(ids, options).mode == "single");

  const std::vector<PrototypeId> unknown = {P("ex:missing")};
  options.amounts = {1};
  CHECK_THROWS(bench::run_remote_bench(unknown, options));
}
