// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/server.hpp"

#include <atomic>
#include <charconv>
#include <filesystem>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "protokb/http_util.hpp"
#include "protokb/wire.hpp"

namespace protokb {
namespace {

using Json = nlohmann::json;

constexpr std::string_view kJson = "application/json";

HttpResponse error_response(int status, Json body) {
  HttpResponse response;
  response.status = status;
  response.body = body.dump();
  return response;
}

HttpResponse bad_request(const std::string& message) {
  return error_response(400, Json{{"error", message}});
}

std::string max_age_value(std::chrono::seconds max_age) {
  return "max-age=" + std::to_string(max_age.count());
}

}  // namespace

std::map<PrototypeId, std::vector<std::string>> parse_alternates(std::string_view json) {
  Json doc;
  try {
    doc = Json::parse(json);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("alternates file is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("alternates file must hold a JSON object");
  std::map<PrototypeId, std::vector<std::string>> out;
  for (const auto& [key, urls] : doc.items()) {
    auto id = PrototypeId::parse(key);
    if (!urls.is_array()) throw std::invalid_argument("alternates of " + key + " must be an array");
    for (const auto& url : urls) {
      if (!url.is_string() || !iri::is_valid(url.get<std::string>())) {
        throw std::invalid_argument("alternate of " + key + " is not an absolute URL");
      }
      out[id].push_back(url.get<std::string>());
    }
  }
  return out;
}

std::optional<std::string> HttpResponse::header(std::string_view name) const {
  for (const auto& [key, value] : headers) {
    if (key.size() == name.size() &&
        std::equal(key.begin(), key.end(), name.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
        })) {
      return value;
    }
  }
  return std::nullopt;
}

PrototypeService::PrototypeService(ServerConfig config)
    : config_(std::move(config)), fixpoints_(std::make_unique<FixpointCache>()) {
  if (!config_.backing) throw std::invalid_argument("server needs a backing knowledge base");
  if (config_.cache_max_age.count() < 0) throw std::invalid_argument("negative max-age");
  for (const auto& [id, urls] : config_.alternates) {
    for (const auto& url : urls) {
      if (!iri::is_valid(url)) throw std::invalid_argument("alternate '" + url + "' is not absolute");
    }
  }
  if (config_.precompute_fixpoints) compute_interpretation(*config_.backing, *fixpoints_);
}

std::optional<std::string> PrototypeService::canonical_body(const PrototypeId& id,
                                                            bool fixpoint) const {
  DefinitionPtr def = config_.backing->is_defined(id);
  if (!def) return std::nullopt;
  if (!fixpoint) return wire::encode_definition(*def);
  return wire::encode_fixpoint(FixpointDefinition{id, *resolve_fixpoint(*config_.backing, id, *fixpoints_)});
}

HttpResponse PrototypeService::finish(HttpResponse response, const RequestInfo& request) const {
  if (response.status == 304) return response;
  response.headers.emplace_back("Content-Type", kJson);
  response.headers.emplace_back("Vary", "Accept-Encoding");
  if (request.accept_encoding && http::accepts_gzip(*request.accept_encoding) &&
      !response.body.empty()) {
    response.body = http::gzip_compress(response.body);
    response.headers.emplace_back("Content-Encoding", "gzip");
  }
  return response;
}

HttpResponse PrototypeService::single(const std::optional<std::string>& p, bool fixpoint,
                                      const RequestInfo& request) const {
  if (!p) return finish(bad_request("missing query parameter p"), request);
  auto id = PrototypeId::try_parse(*p);
  if (!id) return finish(bad_request("p is not an absolute IRI: " + *iri::find_violation(*p)), request);

  auto body = canonical_body(*id, fixpoint);
  if (!body) {
    HttpResponse response = error_response(404, Json{{"missing", Json::array({id->str()})}});
    response.headers.emplace_back("Cache-Control", max_age_value(config_.cache_max_age));
    return finish(std::move(response), request);
  }

  HttpResponse response;
  const std::string etag = http::make_etag(*body);
  response.headers.emplace_back("Cache-Control", max_age_value(config_.cache_max_age));
  response.headers.emplace_back("ETag", etag);
  if (auto it = config_.alternates.find(*id); it != config_.alternates.end() && !it->second.empty()) {
    response.headers.emplace_back("Link", http::format_alternate_links(it->second));
  }
  if (request.if_none_match && http::etag_matches(*request.if_none_match, etag)) {
    response.status = 304;
    return response;
  }
  response.body = std::move(*body);
  return finish(std::move(response), request);
}

HttpResponse PrototypeService::get_prototype(const std::optional<std::string>& p,
                                             const RequestInfo& request) const {
  return single(p, false, request);
}

HttpResponse PrototypeService::get_fixpoint(const std::optional<std::string>& p,
                                            const RequestInfo& request) const {
  return single(p, true, request);
}

HttpResponse PrototypeService::batch(std::string_view body, bool fixpoints,
                                     const RequestInfo& request) const {
  Json ids;
  try {
    ids = Json::parse(body);
  } catch (const Json::parse_error&) {
    return finish(bad_request("batch body is not JSON"), request);
  }
  if (!ids.is_array()) return finish(bad_request("batch body must be a JSON array of IRIs"), request);

  std::vector<PrototypeId> requested;
  requested.reserve(ids.size());
  for (const auto& element : ids) {
    if (!element.is_string()) return finish(bad_request("batch elements must be strings"), request);
    auto id = PrototypeId::try_parse(element.get_ref<const std::string&>());
    if (!id) return finish(bad_request("not an absolute IRI: " + element.get<std::string>()), request);
    requested.push_back(*std::move(id));
  }

  std::string out = "[";
  Json missing = Json::array();
  for (const auto& id : requested) {
    auto encoded = canonical_body(id, fixpoints);
    if (!encoded) {
      missing.push_back(id.str());
      continue;
    }
    if (missing.empty()) {
      if (out.size() > 1) out.push_back(',');
      out += *encoded;
    }
  }
  if (!missing.empty()) return finish(error_response(404, Json{{"missing", missing}}), request);
  out.push_back(']');

  HttpResponse response;
  response.headers.emplace_back("Cache-Control", max_age_value(config_.cache_max_age));
  response.body = std::move(out);
  return finish(std::move(response), request);
}

struct PrototypeServer::Impl {
  explicit Impl(ServerConfig config) : service(std::move(config)) {}

  PrototypeService service;
  httplib::Server http;
  std::thread thread;
  std::atomic<int> bound_port{-1};

  std::atomic<std::uint64_t> requests{0}, ok{0}, not_modified{0}, not_found{0}, bad_request{0},
      conditional{0};
  mutable std::mutex endpoints_mutex;
  std::set<std::pair<std::string, int>> endpoints;

  void install();
  void bind();  // sets bound_port or throws
  void record(const httplib::Request& req, const HttpResponse& response);
};

void PrototypeServer::Impl::record(const httplib::Request& req, const HttpResponse& response) {
  requests.fetch_add(1, std::memory_order_relaxed);
  if (req.has_header("If-None-Match")) conditional.fetch_add(1, std::memory_order_relaxed);
  switch (response.status) {
    case 200: ok.fetch_add(1, std::memory_order_relaxed); break;
    case 304: not_modified.fetch_add(1, std::memory_order_relaxed); break;
    case 404: not_found.fetch_add(1, std::memory_order_relaxed); break;
    case 400: bad_request.fetch_add(1, std::memory_order_relaxed); break;
    default: break;
  }
  std::lock_guard lock(endpoints_mutex);
  endpoints.emplace(req.remote_addr, req.remote_port);
}

void PrototypeServer::Impl::install() {
  const auto threads = service.config().worker_threads;
  http.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  http.set_keep_alive_max_count(1u << 20);
  http.set_keep_alive_timeout(30);
  // Small responses on kept-alive connections otherwise stall on delayed ACKs.
  http.set_tcp_nodelay(true);
  // The library default adds SO_REUSEPORT, which lets a second server share the port.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  auto info = [](const httplib::Request& req) {
    RequestInfo request;
    if (req.has_header("Accept-Encoding")) request.accept_encoding = req.get_header_value("Accept-Encoding");
    if (req.has_header("If-None-Match")) request.if_none_match = req.get_header_value("If-None-Match");
    return request;
  };
  auto param = [](const httplib::Request& req) -> std::optional<std::string> {
    if (!req.has_param("p")) return std::nullopt;
    return req.get_param_value("p");
  };
  auto respond = [this](const httplib::Request& req, httplib::Response& res, HttpResponse response) {
    const auto delay = service.config().response_delay;
    if (delay.count() > 0) std::this_thread::sleep_for(delay);
    record(req, response);
    res.status = response.status;
    for (auto& [key, value] : response.headers) res.set_header(key, value);
    res.body = std::move(response.body);
  };

  http.Get("/", [=, this](const httplib::Request& req, httplib::Response& res) {
    respond(req, res, service.get_prototype(param(req), info(req)));
  });
  http.Get("/fixpoint", [=, this](const httplib::Request& req, httplib::Response& res) {
    respond(req, res, service.get_fixpoint(param(req), info(req)));
  });
  http.Post("/batch", [=, this](const httplib::Request& req, httplib::Response& res) {
    respond(req, res, service.batch(req.body, false, info(req)));
  });
  http.Post("/fixpoint/batch", [=, this](const httplib::Request& req, httplib::Response& res) {
    respond(req, res, service.batch(req.body, true, info(req)));
  });
}

PrototypeServer::PrototypeServer(ServerConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {
  impl_->install();
}

PrototypeServer::~PrototypeServer() { stop(); }

void PrototypeServer::Impl::bind() {
  const auto& config = service.config();
  if (config.port == 0) {
    bound_port = http.bind_to_any_port(config.host);
  } else {
    bound_port = http.bind_to_port(config.host, config.port) ? config.port : -1;
  }
  if (bound_port < 0) {
    throw std::runtime_error("cannot bind " + config.host + ":" + std::to_string(config.port));
  }
}

int PrototypeServer::start() {
  impl_->bind();
  impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return impl_->bound_port;
}

bool PrototypeServer::listen() {
  impl_->bind();
  return impl_->http.listen_after_bind();
}

namespace {

// httplib parks a worker on each idle keep-alive connection until its timeout,
// ignoring stop(). Shutting our accepted sockets down wakes those workers; the
// descriptors stay open for httplib to close, so none can be reused meanwhile.
void shutdown_accepted_sockets(int port) {
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator("/proc/self/fd", ec)) {
    const auto name = entry.path().filename().string();
    int fd = -1;
    if (std::from_chars(name.data(), name.data() + name.size(), fd).ec != std::errc{}) continue;
    sockaddr_storage local{}, peer{};
    socklen_t local_len = sizeof(local), peer_len = sizeof(peer);
    if (::getsockname(fd, reinterpret_cast<sockaddr*>(&local), &local_len) != 0) continue;
    if (::getpeername(fd, reinterpret_cast<sockaddr*>(&peer), &peer_len) != 0) continue;  // listener
    int local_port = -1;
    if (local.ss_family == AF_INET) local_port = ntohs(reinterpret_cast<sockaddr_in*>(&local)->sin_port);
    if (local.ss_family == AF_INET6) local_port = ntohs(reinterpret_cast<sockaddr_in6*>(&local)->sin6_port);
    if (local_port == port) ::shutdown(fd, SHUT_RDWR);
  }
}

}  // namespace

void PrototypeServer::stop() {
  if (!impl_) return;
  impl_->http.stop();
  // Joining the listener also joins its workers, so wake them first.
  if (impl_->bound_port > 0) shutdown_accepted_sockets(impl_->bound_port);
  if (impl_->thread.joinable()) impl_->thread.join();
}

int PrototypeServer::port() const noexcept { return impl_->bound_port; }

std::string PrototypeServer::base_url() const {
  return "http://" + impl_->service.config().host + ":" + std::to_string(impl_->bound_port);
}

ServerStats PrototypeServer::stats() const {
  ServerStats s;
  s.requests = impl_->requests.load();
  s.ok = impl_->ok.load();
  s.not_modified = impl_->not_modified.load();
  s.not_found = impl_->not_found.load();
  s.bad_request = impl_->bad_request.load();
  s.conditional = impl_->conditional.load();
  std::lock_guard lock(impl_->endpoints_mutex);
  s.connections = impl_->endpoints.size();
  return s;
}

void PrototypeServer::reset_stats() {
  impl_->requests = 0;
  impl_->ok = 0;
  impl_->not_modified = 0;
  impl_->not_found = 0;
  impl_->bad_request = 0;
  impl_->conditional = 0;
  std::lock_guard lock(impl_->endpoints_mutex);
  impl_->endpoints.clear();
}

const PrototypeService& PrototypeServer::service() const noexcept { return impl_->service; }

}  // namespace protokb
