// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/client.hpp"

#include <atomic>
#include <condition_variable>
#include <list>
#include <optional>
#include <random>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "protokb/http_util.hpp"
#include "protokb/wire.hpp"

namespace protokb {
namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::json;

enum class Resource { kDefinition, kFixpoint };

std::string cache_key(Resource resource, const PrototypeId& id) {
  return (resource == Resource::kDefinition ? "d " : "f ") + id.str();
}

struct CacheEntry {
  DefinitionPtr definition;
  std::string etag;  // empty: cannot be revalidated
  Clock::time_point fresh_until;
  std::vector<std::string> alternates;
};

class ResponseCache {
 public:
  explicit ResponseCache(std::size_t capacity) : capacity_(capacity) {}

  bool enabled() const noexcept { return capacity_ > 0; }

  std::optional<CacheEntry> find(const std::string& key) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    order_.splice(order_.begin(), order_, it->second.second);
    return it->second.first;
  }

  void put(const std::string& key, CacheEntry entry) {
    if (!enabled()) return;
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      it->second.first = std::move(entry);
      order_.splice(order_.begin(), order_, it->second.second);
      return;
    }
    order_.push_front(key);
    entries_.emplace(key, std::make_pair(std::move(entry), order_.begin()));
    while (entries_.size() > capacity_) {
      entries_.erase(order_.back());
      order_.pop_back();
    }
  }

 private:
  std::size_t capacity_;
  std::mutex mutex_;
  std::list<std::string> order_;
  std::unordered_map<std::string, std::pair<CacheEntry, std::list<std::string>::iterator>> entries_;
};

// Keep-alive connections, at most `limit` of them, each used by one request
// at a time.
class ConnectionPool {
 public:
  ConnectionPool(const ClientConfig& config, std::string origin, std::atomic<std::uint64_t>& created)
      : config_(config), origin_(std::move(origin)), created_(created) {}

  class Lease {
   public:
    Lease(ConnectionPool& pool, std::unique_ptr<httplib::Client> client)
        : pool_(pool), client_(std::move(client)) {}
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;
    ~Lease() { pool_.release(std::move(client_)); }

    httplib::Client& operator*() { return *client_; }
    httplib::Client* operator->() { return client_.get(); }

   private:
    ConnectionPool& pool_;
    std::unique_ptr<httplib::Client> client_;
  };

  Lease acquire() {
    std::unique_lock lock(mutex_);
    const std::size_t limit = std::max<std::size_t>(1, config_.max_concurrency);
    available_.wait(lock, [&] { return !idle_.empty() || open_ < limit; });
    if (!idle_.empty()) {
      auto client = std::move(idle_.back());
      idle_.pop_back();
      return Lease(*this, std::move(client));
    }
    ++open_;
    lock.unlock();
    return Lease(*this, connect());
  }

 private:
  std::unique_ptr<httplib::Client> connect() {
    auto client = std::make_unique<httplib::Client>(origin_);
    client->set_keep_alive(true);
    client->set_tcp_nodelay(true);
    client->set_decompress(false);
    client->set_connection_timeout(config_.connect_timeout);
    client->set_read_timeout(config_.read_timeout);
    created_.fetch_add(1, std::memory_order_relaxed);
    return client;
  }

  void release(std::unique_ptr<httplib::Client> client) {
    {
      std::lock_guard lock(mutex_);
      idle_.push_back(std::move(client));
    }
    available_.notify_one();
  }

  const ClientConfig& config_;
  std::string origin_;
  std::atomic<std::uint64_t>& created_;
  std::mutex mutex_;
  std::condition_variable available_;
  std::vector<std::unique_ptr<httplib::Client>> idle_;
  std::size_t open_ = 0;
};

struct Exchange {
  int status = 0;
  std::string body;  // decoded
  std::string etag;
  std::optional<std::chrono::seconds> max_age;
  std::vector<std::string> alternates;
};

std::vector<std::string> missing_ids(const std::string& body) {
  std::vector<std::string> missing;
  try {
    const Json doc = Json::parse(body);
    if (doc.is_object() && doc.contains("missing") && doc["missing"].is_array()) {
      for (const auto& id : doc["missing"]) {
        if (id.is_string()) missing.push_back(id.get<std::string>());
      }
    }
  } catch (const Json::exception&) {
  }
  return missing;
}

std::string describe_error(httplib::Error error) { return httplib::to_string(error); }

}  // namespace

BatchMissError::BatchMissError(std::vector<std::string> missing)
    : std::runtime_error("batch names " + std::to_string(missing.size()) + " undefined prototype(s)"),
      missing_(std::move(missing)) {}

struct RemoteKnowledgeBase::Impl {
  explicit Impl(ClientConfig cfg)
      : config(std::move(cfg)),
        url(parse(config.base_url)),
        cache(config.cache_capacity),
        pool(config, url.origin, connections_created) {
    if (!config.clock) config.clock = [] { return Clock::now(); };
  }

  static http::ParsedUrl parse(const std::string& base_url) {
    auto parsed = http::parse_http_url(base_url);
    if (!parsed) throw std::invalid_argument("not an http URL: " + base_url);
    return *parsed;
  }

  ClientConfig config;
  http::ParsedUrl url;
  std::atomic<std::uint64_t> requests{0}, conditional{0}, not_modified{0}, cache_hits{0},
      connections_created{0};
  ResponseCache cache;
  ConnectionPool pool;

  std::string path(Resource resource, const PrototypeId& id) const {
    return url.path + (resource == Resource::kDefinition ? "/" : "/fixpoint") +
           "?p=" + http::encode_query_value(id.str());
  }

  Exchange to_exchange(const httplib::Response& res) const {
    Exchange ex;
    ex.status = res.status;
    ex.body = res.body;
    const std::string encoding = res.get_header_value("Content-Encoding");
    if (encoding == "gzip" || encoding == "x-gzip") {
      try {
        ex.body = http::gzip_decompress(res.body);
      } catch (const std::runtime_error& e) {
        throw ProtocolError(e.what());
      }
    } else if (!encoding.empty() && encoding != "identity") {
      throw ProtocolError("unsupported Content-Encoding " + encoding);
    }
    ex.etag = res.get_header_value("ETag");
    if (res.has_header("Cache-Control")) ex.max_age = http::parse_max_age(res.get_header_value("Cache-Control"));
    for (std::size_t i = 0, n = res.get_header_value_count("Link"); i < n; ++i) {
      auto links = http::parse_alternate_links(res.get_header_value("Link", i));
      ex.alternates.insert(ex.alternates.end(), links.begin(), links.end());
    }
    return ex;
  }

  void backoff(int attempt) const {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    const auto base = config.retry_backoff * attempt;
    std::this_thread::sleep_for(std::chrono::duration_cast<std::chrono::microseconds>(base * jitter(rng)));
  }

  Exchange get(const std::string& target, const std::string& if_none_match) {
    httplib::Headers headers;
    if (config.accept_gzip) headers.emplace("Accept-Encoding", "gzip");
    if (!if_none_match.empty()) headers.emplace("If-None-Match", if_none_match);

    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      if (attempt > 0) backoff(attempt);
      requests.fetch_add(1, std::memory_order_relaxed);
      if (!if_none_match.empty()) conditional.fetch_add(1, std::memory_order_relaxed);
      httplib::Result res = [&] {
        auto lease = pool.acquire();
        return lease->Get(target, headers);
      }();
      if (!res) {
        last_error = describe_error(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      return to_exchange(*res);
    }
    throw TransportError("GET " + url.origin + target + " failed: " + last_error);
  }

  DefinitionPtr decode_single(const Exchange& ex, const PrototypeId& id) const {
    try {
      auto def = std::make_shared<const PrototypeDefinition>(wire::decode_definition(ex.body));
      if (def->id() != id) throw ProtocolError("asked for " + id.str() + ", got " + def->id().str());
      return def;
    } catch (const wire::WireError& e) {
      throw ProtocolError(std::string("bad response body: ") + e.what());
    }
  }

  RemoteLookupResult lookup(Resource resource, const PrototypeId& id) {
    const std::string key = cache_key(resource, id);
    std::optional<CacheEntry> cached;
    if (cache.enabled()) {
      cached = cache.find(key);
      if (cached && config.clock() < cached->fresh_until) {
        cache_hits.fetch_add(1, std::memory_order_relaxed);
        return {cached->definition, cached->alternates, true};
      }
    }

    const std::string target = path(resource, id);
    const std::string validator = cached && cached->definition ? cached->etag : std::string{};
    Exchange ex = get(target, validator);
    const auto received = config.clock();

    if (ex.status == 304) {
      not_modified.fetch_add(1, std::memory_order_relaxed);
      if (!cached) throw ProtocolError("304 without a conditional request");
      cached->fresh_until = received + ex.max_age.value_or(std::chrono::seconds{0});
      if (!ex.etag.empty()) cached->etag = ex.etag;
      cache.put(key, *cached);
      return {cached->definition, cached->alternates, true};
    }
    if (ex.status == 404) {
      cache.put(key, CacheEntry{nullptr, {}, received + ex.max_age.value_or(std::chrono::seconds{0}), {}});
      return {nullptr, {}, false};
    }
    if (ex.status != 200) {
      throw ProtocolError("GET " + target + " answered HTTP " + std::to_string(ex.status));
    }
    DefinitionPtr def = decode_single(ex, id);
    cache.put(key, CacheEntry{def, ex.etag, received + ex.max_age.value_or(std::chrono::seconds{0}),
                              ex.alternates});
    return {std::move(def), std::move(ex.alternates), false};
  }

  std::vector<DefinitionPtr> batch(Resource resource, std::span<const PrototypeId> ids) {
    if (ids.empty()) return {};
    Json body = Json::array();
    for (const auto& id : ids) body.push_back(id.str());

    httplib::Headers headers;
    if (config.accept_gzip) headers.emplace("Accept-Encoding", "gzip");
    const std::string target = url.path + (resource == Resource::kDefinition ? "/batch" : "/fixpoint/batch");
    requests.fetch_add(1, std::memory_order_relaxed);
    httplib::Result res = [&] {
      auto lease = pool.acquire();
      return lease->Post(target, headers, body.dump(), "application/json");
    }();
    if (!res) throw TransportError("POST " + url.origin + target + " failed: " + describe_error(res.error()));
    Exchange ex = to_exchange(*res);
    const auto received = config.clock();

    if (ex.status == 404) throw BatchMissError(missing_ids(ex.body));
    if (ex.status != 200) throw ProtocolError("POST " + target + " answered HTTP " + std::to_string(ex.status));

    std::vector<PrototypeDefinition> decoded;
    try {
      decoded = wire::decode_batch(ex.body);
    } catch (const wire::WireError& e) {
      throw ProtocolError(std::string("bad batch body: ") + e.what());
    }
    if (decoded.size() != ids.size()) throw ProtocolError("batch answer has the wrong length");

    std::vector<DefinitionPtr> out;
    out.reserve(decoded.size());
    for (std::size_t i = 0; i < decoded.size(); ++i) {
      if (decoded[i].id() != ids[i]) throw ProtocolError("batch answer out of order at " + std::to_string(i));
      auto def = std::make_shared<const PrototypeDefinition>(std::move(decoded[i]));
      cache.put(cache_key(resource, ids[i]),
                CacheEntry{def, {}, received + ex.max_age.value_or(std::chrono::seconds{0}), {}});
      out.push_back(std::move(def));
    }
    return out;
  }
};

namespace {

FixpointDefinition to_fixpoint(const PrototypeDefinition& def) {
  if (def.base() != empty_prototype_id() || def.remove().has_removals()) {
    throw ProtocolError("fixpoint of " + def.id().str() + " is not in resolved form");
  }
  return FixpointDefinition{def.id(), PropertyMap(def.add().additions())};
}

}  // namespace

RemoteKnowledgeBase::RemoteKnowledgeBase(ClientConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RemoteKnowledgeBase::~RemoteKnowledgeBase() = default;

DefinitionPtr RemoteKnowledgeBase::is_defined(const PrototypeId& id) const {
  return lookup(id).definition;
}

RemoteLookupResult RemoteKnowledgeBase::lookup(const PrototypeId& id) const {
  return impl_->lookup(Resource::kDefinition, id);
}

RemoteLookupResult RemoteKnowledgeBase::lookup_fixpoint(const PrototypeId& id) const {
  return impl_->lookup(Resource::kFixpoint, id);
}

FixpointDefinition RemoteKnowledgeBase::fixpoint(const PrototypeId& id) const {
  auto result = lookup_fixpoint(id);
  if (!result.definition) throw UnknownPrototypeError(id);
  return to_fixpoint(*result.definition);
}

std::vector<DefinitionPtr> RemoteKnowledgeBase::batch(std::span<const PrototypeId> ids) const {
  return impl_->batch(Resource::kDefinition, ids);
}

std::vector<FixpointDefinition> RemoteKnowledgeBase::fixpoint_batch(
    std::span<const PrototypeId> ids) const {
  std::vector<FixpointDefinition> out;
  for (const auto& def : impl_->batch(Resource::kFixpoint, ids)) out.push_back(to_fixpoint(*def));
  return out;
}

const ClientConfig& RemoteKnowledgeBase::config() const noexcept { return impl_->config; }

ClientStats RemoteKnowledgeBase::stats() const {
  ClientStats s;
  s.requests = impl_->requests.load();
  s.conditional = impl_->conditional.load();
  s.not_modified = impl_->not_modified.load();
  s.cache_hits = impl_->cache_hits.load();
  s.connections_created = impl_->connections_created.load();
  return s;
}

ClientRegistry::ClientRegistry(ClientConfig defaults)
    : factory_([defaults](const std::string& url) {
        ClientConfig config = defaults;
        config.base_url = url;
        return std::make_shared<const RemoteKnowledgeBase>(std::move(config));
      }) {}

ClientRegistry::ClientRegistry(Factory factory) : factory_(std::move(factory)) {}

std::shared_ptr<const RemoteKnowledgeBase> ClientRegistry::get(const std::string& url) {
  std::lock_guard lock(mutex_);
  auto& client = clients_[url];
  if (!client) client = factory_(url);
  return client;
}

AlternateResolution resolve_with_alternates(const RemoteKnowledgeBase& primary,
                                            ClientRegistry& registry, const PrototypeId& id,
                                            JoinStrategy strategy) {
  AlternateResolution resolution;
  std::vector<SourcedDefinition> sources;

  RemoteLookupResult first = primary.lookup(id);
  if (first.definition) sources.push_back({primary.config().base_url, *first.definition});

  for (const auto& url : first.alternates) {
    try {
      auto alternate = registry.get(url)->lookup(id);
      if (alternate.definition) {
        sources.push_back({url, *alternate.definition});
      } else {
        resolution.failures.push_back({url, "not defined"});
      }
    } catch (const std::exception& e) {
      resolution.failures.push_back({url, e.what()});
    }
  }
  if (sources.empty()) return resolution;

  std::vector<std::string> fetch_order;
  for (const auto& source : sources) fetch_order.push_back(source.source);
  if (auto* prefer = std::get_if<PreferSource>(&strategy); prefer && prefer->trust_order.empty()) {
    prefer->trust_order = fetch_order;
  }
  if (auto* constrained = std::get_if<ConstrainedCardinality>(&strategy);
      constrained && constrained->trust_order.empty()) {
    constrained->trust_order = fetch_order;
  }

  resolution.definition =
      std::make_shared<const PrototypeDefinition>(join_definitions(sources, strategy));
  resolution.sources = std::move(fetch_order);
  return resolution;
}

}  // namespace protokb
