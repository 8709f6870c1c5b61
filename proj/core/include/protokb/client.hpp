// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "protokb/fixpoint.hpp"
#include "protokb/join.hpp"
#include "protokb/knowledge_base.hpp"

namespace protokb {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BatchMissError : public std::runtime_error {
 public:
  explicit BatchMissError(std::vector<std::string> missing);
  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

struct ClientConfig {
  /// Server root, e.g. "http://127.0.0.1:8080" (a path prefix is allowed).
  std::string base_url;
  /// Upper bound on simultaneous requests, and on open connections.
  std::size_t max_concurrency = 100;
  /// Cached responses kept (LRU). Zero disables caching entirely.
  std::size_t cache_capacity = 100000;
  /// Extra attempts for GETs that fail in transport or with 5xx.
  int max_retries = 2;
  std::chrono::milliseconds retry_backoff{25};
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds read_timeout{30000};
  bool accept_gzip = true;
  /// Time source for freshness; steady_clock::now when unset.
  std::function<std::chrono::steady_clock::time_point()> clock{};
};

struct RemoteLookupResult {
  DefinitionPtr definition;  // null when the server does not define the ID
  std::vector<std::string> alternates;
  bool served_from_cache = false;
};

struct ClientStats {
  std::uint64_t requests = 0;      // HTTP exchanges, retries included
  std::uint64_t conditional = 0;   // requests sent with If-None-Match
  std::uint64_t not_modified = 0;  // 304 answers
  std::uint64_t cache_hits = 0;    // answered without any request
  std::uint64_t connections_created = 0;
};

/// A knowledge base served by a PrototypeServer.
///
/// Responses are cached for the server's max-age, then revalidated with
/// If-None-Match. Absent IDs are cached just like present ones. Connections
/// are pooled and kept alive. Safe to share between threads.
class RemoteKnowledgeBase final : public KnowledgeBase {
 public:
  explicit RemoteKnowledgeBase(ClientConfig config);
  ~RemoteKnowledgeBase() override;

  /// Throws TransportError or ProtocolError.
  DefinitionPtr is_defined(const PrototypeId& id) const override;

  RemoteLookupResult lookup(const PrototypeId& id) const;
  RemoteLookupResult lookup_fixpoint(const PrototypeId& id) const;

  /// Throws UnknownPrototypeError when the server does not define `id`.
  FixpointDefinition fixpoint(const PrototypeId& id) const;

  /// One request for all IDs, results in request order. Throws BatchMissError
  /// if any ID is undefined. Not retried.
  std::vector<DefinitionPtr> batch(std::span<const PrototypeId> ids) const;
  std::vector<FixpointDefinition> fixpoint_batch(std::span<const PrototypeId> ids) const;

  const ClientConfig& config() const noexcept;
  ClientStats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Hands out one shared client per server URL.
class ClientRegistry {
 public:
  using Factory = std::function<std::shared_ptr<const RemoteKnowledgeBase>(const std::string& url)>;

  /// Default factory: a RemoteKnowledgeBase with `defaults` and the URL.
  explicit ClientRegistry(ClientConfig defaults = {});
  explicit ClientRegistry(Factory factory);

  std::shared_ptr<const RemoteKnowledgeBase> get(const std::string& url);

 private:
  Factory factory_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const RemoteKnowledgeBase>> clients_;
};

struct AlternateFailure {
  std::string url;
  std::string reason;
};

struct AlternateResolution {
  DefinitionPtr definition;           // null if no source defines the ID
  std::vector<std::string> sources;   // sources joined, primary first
  std::vector<AlternateFailure> failures;
};

/// Fetches `id` from `primary` and from every alternate it advertises (one
/// hop), then joins the definitions. Sources are tagged by URL; a strategy
/// with an empty trust order gets the fetch order, primary first. Primary
/// failures propagate; alternate failures are recorded and skipped.
AlternateResolution resolve_with_alternates(const RemoteKnowledgeBase& primary,
                                            ClientRegistry& registry, const PrototypeId& id,
                                            JoinStrategy strategy);

}  // namespace protokb
