// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace protokb::http {

/// gzip (RFC 1952) framing around deflate.
std::string gzip_compress(std::string_view data);

/// Throws std::runtime_error on corrupt input.
std::string gzip_decompress(std::string_view data);

/// Strong validator: the quoted hex SHA-256 of `body`.
std::string make_etag(std::string_view body);

/// True if an If-None-Match header value matches `etag` (weak comparison,
/// "*" matches anything).
bool etag_matches(std::string_view if_none_match, std::string_view etag);

/// True if an Accept-Encoding header admits gzip with a non-zero q-value.
bool accepts_gzip(std::string_view accept_encoding);

/// max-age from a Cache-Control header; nullopt if absent or unparsable.
/// no-store / no-cache yield zero.
std::optional<std::chrono::seconds> parse_max_age(std::string_view cache_control);

/// Targets of every `rel="alternate"` link in a Link header value.
std::vector<std::string> parse_alternate_links(std::string_view link_header);

/// `<url>; rel="alternate"` entries joined with ", ".
std::string format_alternate_links(const std::vector<std::string>& urls);

/// Percent-encodes every byte outside RFC 3986 `unreserved`.
std::string encode_query_value(std::string_view value);

/// An absolute http(s) URL split into origin and path prefix.
struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing '/', possibly empty
};

std::optional<ParsedUrl> parse_http_url(std::string_view url);

}  // namespace protokb::http
