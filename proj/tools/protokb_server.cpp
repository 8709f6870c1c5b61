// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

// Serves a dataset file over HTTP.
//
//   protokb-server --data FILE [--bind HOST:PORT] [--max-age SECONDS]
//                  [--precompute-fixpoints] [--alternates FILE]

#include <pthread.h>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "protokb/consistency.hpp"
#include "protokb/datasets.hpp"
#include "protokb/server.hpp"
#include "protokb/wire.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace protokb;

  CLI::App app{"prototype knowledge base HTTP server"};
  std::string bind = "127.0.0.1:8080", data_path, alternates_path;
  long long max_age = 3600;
  bool precompute = false;
  std::size_t threads = 128;
  long long delay_ms = 0;

  app.add_option("--bind", bind, "HOST:PORT to listen on");
  app.add_option("--max-age", max_age, "Cache-Control max-age in seconds")->check(CLI::NonNegativeNumber);
  app.add_flag("--precompute-fixpoints", precompute, "compute every fixpoint at startup");
  app.add_option("--data", data_path, "newline-delimited JSON definitions")->required();
  app.add_option("--alternates", alternates_path, "JSON object: prototype IRI -> [alternate URLs]");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--delay-ms", delay_ms, "added latency per response")->check(CLI::NonNegativeNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("--bind expects HOST:PORT");

    ServerConfig config;
    config.host = bind.substr(0, colon);
    config.port = std::stoi(bind.substr(colon + 1));
    config.cache_max_age = std::chrono::seconds{max_age};
    config.precompute_fixpoints = precompute;
    config.worker_threads = threads;
    config.response_delay = std::chrono::milliseconds{delay_ms};

    std::ifstream in(data_path);
    if (!in) throw std::runtime_error("cannot open " + data_path);
    KnowledgeBaseBuilder builder(datasets::dataset_basis());
    for (auto& def : wire::read_ndjson(in)) builder.add(std::move(def));
    config.backing = builder.build();
    if (!alternates_path.empty()) config.alternates = parse_alternates(read_file(alternates_path));

    // Blocked before any thread starts, so only sigwait below sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    PrototypeServer server(std::move(config));
    server.start();
    std::cerr << "serving " << builder.size() << " prototypes on " << server.base_url() << std::endl;
    int received = 0;
    sigwait(&signals, &received);
    server.stop();
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
