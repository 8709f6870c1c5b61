// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "protokb/fixpoint.hpp"
#include "protokb/knowledge_base.hpp"

namespace protokb {

/// HTTP surface:
///
///   GET  /?p=<iri>            definition          (ETag, Cache-Control, Link)
///   GET  /fixpoint?p=<iri>    fixpoint            (ETag, Cache-Control, Link)
///   POST /batch               definitions for a JSON array of IRIs
///   POST /fixpoint/batch      fixpoints for a JSON array of IRIs
///
/// Bodies are canonical JSON (see wire.hpp), gzip-encoded when the request
/// accepts gzip. Undefined IDs give 404, a missing or invalid `p` gives 400.
/// A batch naming any undefined ID fails as a whole with 404 and
/// {"missing":[...]}; batch responses carry no ETag and no Link.
struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  std::chrono::seconds cache_max_age{3600};
  /// Absolute URLs advertised as Link rel="alternate" per prototype.
  std::map<PrototypeId, std::vector<std::string>> alternates{};
  KnowledgeBasePtr backing;
  bool precompute_fixpoints = false;
  std::size_t worker_threads = 128;
  /// Added before every response; simulates link latency in benchmarks.
  std::chrono::milliseconds response_delay{0};
};

/// Throws std::invalid_argument for unreadable or non-absolute alternates.
std::map<PrototypeId, std::vector<std::string>> parse_alternates(std::string_view json);

struct HttpResponse {
  int status = 200;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  /// First header named `name` (case-insensitive), if any.
  std::optional<std::string> header(std::string_view name) const;
};

/// The request fields the handlers look at.
struct RequestInfo {
  std::optional<std::string> accept_encoding{};
  std::optional<std::string> if_none_match{};
};

/// Transport-independent request handling. Thread-safe.
class PrototypeService {
 public:
  explicit PrototypeService(ServerConfig config);

  /// `p` is the already percent-decoded query value.
  HttpResponse get_prototype(const std::optional<std::string>& p, const RequestInfo& request) const;
  HttpResponse get_fixpoint(const std::optional<std::string>& p, const RequestInfo& request) const;
  HttpResponse batch(std::string_view body, bool fixpoints, const RequestInfo& request) const;

  const ServerConfig& config() const noexcept { return config_; }
  const FixpointCache& fixpoint_cache() const noexcept { return *fixpoints_; }

 private:
  std::optional<std::string> canonical_body(const PrototypeId& id, bool fixpoint) const;
  HttpResponse single(const std::optional<std::string>& p, bool fixpoint,
                      const RequestInfo& request) const;
  HttpResponse finish(HttpResponse response, const RequestInfo& request) const;

  ServerConfig config_;
  std::unique_ptr<FixpointCache> fixpoints_;
};

struct ServerStats {
  std::uint64_t requests = 0;
  std::uint64_t ok = 0;
  std::uint64_t not_modified = 0;
  std::uint64_t not_found = 0;
  std::uint64_t bad_request = 0;
  std::uint64_t conditional = 0;  // requests carrying If-None-Match
  std::uint64_t connections = 0;  // distinct client endpoints seen
};

/// PrototypeService behind an HTTP/1.1 listener with persistent connections.
class PrototypeServer {
 public:
  explicit PrototypeServer(ServerConfig config);
  ~PrototypeServer();

  PrototypeServer(const PrototypeServer&) = delete;
  PrototypeServer& operator=(const PrototypeServer&) = delete;

  /// Binds and starts serving on a background thread; returns the port.
  /// Throws std::runtime_error if the address cannot be bound.
  int start();

  /// Serves on the calling thread until stop() is called from another thread.
  /// Throws std::runtime_error if the address cannot be bound.
  bool listen();

  void stop();

  int port() const noexcept;
  std::string base_url() const;

  ServerStats stats() const;
  void reset_stats();

  const PrototypeService& service() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace protokb
