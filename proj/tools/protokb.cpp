// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

// protokb gen    --family baseline|blocks|incremental --param P --seed S --out FILE
// protokb bench local  --dataset FILE | --family F --param P --seed S
// protokb bench remote --url URL --dataset FILE --amounts 1000,2000 --concurrency C

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "protokb/bench.hpp"
#include "protokb/consistency.hpp"
#include "protokb/datasets.hpp"
#include "protokb/wire.hpp"

namespace {

using namespace protokb;

std::vector<DefinitionPtr> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return wire::read_ndjson(in);
}

std::vector<std::size_t> parse_amounts(const std::string& list) {
  std::vector<std::size_t> amounts;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const unsigned long long value = std::stoull(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad amount '" + item + "'");
    amounts.push_back(static_cast<std::size_t>(value));
  }
  return amounts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prototype knowledge base datasets and benchmarks"};
  app.require_subcommand(1);

  std::string family, param, out_path, dataset_path, url, amounts = "1000,2000,3000,4000,5000";
  std::uint64_t seed = 0;
  std::size_t concurrency = 1;
  std::size_t warmup = 0;

  auto* gen = app.add_subcommand("gen", "write a synthetic dataset as newline-delimited JSON");
  gen->add_option("--family", family, "baseline, blocks or incremental")->required();
  gen->add_option("--param", param, "n | B,blockSize | M")->required();
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", out_path, "output file ('-' for stdout)")->required();

  auto* bench = app.add_subcommand("bench", "run benchmarks, report JSON on stdout");
  bench->require_subcommand(1);

  auto* local = bench->add_subcommand("local", "consistency check and fixpoint timing");
  auto* local_dataset = local->add_option("--dataset", dataset_path, "dataset file from 'gen'");
  auto* local_family = local->add_option("--family", family, "generate in memory instead");
  local->add_option("--param", param, "n | B,blockSize | M")->needs(local_family);
  local->add_option("--seed", seed, "generator seed");
  local_dataset->excludes(local_family);

  auto* remote = bench->add_subcommand("remote", "fetch random fixpoints from a server");
  remote->add_option("--url", url, "server root URL")->required();
  remote->add_option("--dataset", dataset_path, "dataset the server was started with (ID pool)")
      ->required();
  remote->add_option("--amounts", amounts, "comma-separated request counts");
  remote->add_option("--concurrency", concurrency, "simultaneous requests")->check(CLI::PositiveNumber);
  remote->add_option("--seed", seed, "ID sampling seed");
  remote->add_option("--warmup", warmup, "untimed requests issued first");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto spec = datasets::DatasetSpec::parse(family, param, seed);
      const auto defs = datasets::generate(spec);
      if (out_path == "-") {
        wire::write_ndjson(std::cout, defs);
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        wire::write_ndjson(out, defs);
      }
      std::cerr << "wrote " << defs.size() << " prototypes\n";
      return 0;
    }

    if (local->parsed()) {
      bench::BenchReport report;
      if (!dataset_path.empty()) {
        report = bench::run_local_bench(load_dataset(dataset_path));
        report.source = dataset_path;
      } else if (!family.empty()) {
        report = bench::run_local_bench(datasets::DatasetSpec::parse(family, param, seed));
      } else {
        throw std::invalid_argument("bench local needs --dataset or --family/--param");
      }
      std::cout << report.to_json().dump(2) << "\n";
      return 0;
    }

    if (remote->parsed()) {
      const auto defs = load_dataset(dataset_path);
      std::vector<PrototypeId> ids;
      ids.reserve(defs.size());
      for (const auto& def : defs) ids.push_back(def->id());

      bench::RemoteBenchOptions options;
      options.server_url = url;
      options.amounts = parse_amounts(amounts);
      options.concurrency = concurrency;
      options.seed = seed;
      options.warmup_requests = warmup;

      bench::BenchReport report;
      report.source = dataset_path;
      report.prototype_count = defs.size();
      report.remote = bench::run_remote_bench(ids, options);
      std::cout << report.to_json().dump(2) << "\n";
      return 0;
    }
  } catch (const ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& v : e.report().violations) std::cerr << "  " << describe(v) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
