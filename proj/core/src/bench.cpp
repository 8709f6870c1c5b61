// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "protokb/client.hpp"
#include "protokb/consistency.hpp"

namespace protokb::bench {
namespace {

using SteadyClock = std::chrono::steady_clock;

double millis_since(SteadyClock::time_point start) {
  return std::chrono::duration<double, std::milli>(SteadyClock::now() - start).count();
}

}  // namespace

Moments moments(std::span<const double> values) {
  Moments m;
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  double squares = 0.0;
  for (double v : values) squares += (v - m.mean) * (v - m.mean);
  m.stdev = std::sqrt(squares / static_cast<double>(values.size()));
  return m;
}

Moments direct_property_stats(std::span<const DefinitionPtr> defs) {
  std::vector<double> counts;
  counts.reserve(defs.size());
  for (const auto& def : defs) counts.push_back(static_cast<double>(def->add().addition_count()));
  return moments(counts);
}

Moments fixpoint_property_stats(const Interpretation& interpretation) {
  std::vector<double> counts;
  counts.reserve(interpretation.size());
  for (const auto& [id, fp] : interpretation) {
    counts.push_back(static_cast<double>(fp.properties.value_count()));
  }
  return moments(counts);
}

double linear_fit_r2(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need two or more points");
  const auto mx = moments(x).mean;
  const auto my = moments(y).mean;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("x values are all equal");
  if (syy == 0.0) return 1.0;
  return (sxy * sxy) / (sxx * syy);
}

nlohmann::json BenchReport::to_json() const {
  nlohmann::json out;
  if (spec) {
    out["spec"] = {{"family", spec->family_name()}, {"param", spec->param_string()}, {"seed", spec->seed}};
  }
  if (!source.empty()) out["source"] = source;
  out["prototypeCount"] = prototype_count;
  out["consistencyMillis"] = consistency_millis;
  out["fixpointMillis"] = fixpoint_millis;
  out["meanPropsPerFixpoint"] = mean_props_per_fixpoint;
  out["stdevPropsPerFixpoint"] = stdev_props_per_fixpoint;
  out["meanDirectProps"] = mean_direct_props;
  out["stdevDirectProps"] = stdev_direct_props;
  if (remote) {
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& t : remote->timings) timings[std::to_string(t.amount)] = t.millis;
    out["remote"] = {{"mode", remote->mode}, {"concurrency", remote->concurrency}, {"amounts", timings}};
  }
  return out;
}

BenchReport run_local_bench(const std::vector<DefinitionPtr>& defs, LocalBenchOptions options) {
  const KnowledgeBasePtr basis = datasets::dataset_basis();
  if (options.warmup) {
    auto warm = build_layered_kb(defs, basis);
    if (warm.kb) compute_interpretation(*warm.kb);
  }

  BenchReport report;
  report.prototype_count = defs.size();

  auto start = SteadyClock::now();
  BuildResult built = build_layered_kb(defs, basis);
  report.consistency_millis = millis_since(start);
  if (!built.kb) throw ConsistencyError(std::move(built.report));

  start = SteadyClock::now();
  FixpointCache cache;
  const Interpretation interpretation = compute_interpretation(*built.kb, cache);
  report.fixpoint_millis = millis_since(start);

  const Moments fp = fixpoint_property_stats(interpretation);
  report.mean_props_per_fixpoint = fp.mean;
  report.stdev_props_per_fixpoint = fp.stdev;
  const Moments direct = direct_property_stats(defs);
  report.mean_direct_props = direct.mean;
  report.stdev_direct_props = direct.stdev;
  return report;
}

BenchReport run_local_bench(const datasets::DatasetSpec& spec, LocalBenchOptions options) {
  BenchReport report = run_local_bench(datasets::generate(spec), options);
  report.spec = spec;
  return report;
}

RemoteResult run_remote_bench(std::span<const PrototypeId> ids, const RemoteBenchOptions& options) {
  if (ids.empty()) throw std::invalid_argument("no prototype IDs to request");
  const std::size_t concurrency = std::max<std::size_t>(1, options.concurrency);

  ClientConfig config;
  config.base_url = options.server_url;
  config.max_concurrency = concurrency;
  config.cache_capacity = 0;
  const RemoteKnowledgeBase client(config);

  datasets::Rng rng(options.seed);
  auto fetch_all = [&](const std::vector<PrototypeId>& wanted) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= wanted.size()) return;
        try {
          client.fixpoint(wanted[i]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = wanted.size();
          return;
        }
      }
    };
    std::vector<std::thread> workers;
    const std::size_t n = std::min(concurrency, wanted.size());
    workers.reserve(n);
    for (std::size_t t = 0; t < n; ++t) workers.emplace_back(worker);
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  };
  auto draw = [&](std::size_t amount) {
    std::vector<PrototypeId> wanted;
    wanted.reserve(amount);
    for (std::size_t i = 0; i < amount; ++i) wanted.push_back(ids[rng.below(ids.size())]);
    return wanted;
  };

  if (options.warmup_requests > 0) fetch_all(draw(options.warmup_requests));

  RemoteResult result;
  result.concurrency = concurrency;
  result.mode = concurrency == 1 ? "single" : "multi";
  for (const std::size_t amount : options.amounts) {
    const auto wanted = draw(amount);
    const auto start = SteadyClock::now();
    fetch_all(wanted);
    result.timings.push_back({amount, millis_since(start)});
  }
  return result;
}

}  // namespace protokb::bench
