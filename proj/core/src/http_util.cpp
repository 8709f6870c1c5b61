// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/http_util.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include <openssl/evp.h>
#include <zlib.h>

#include "protokb/literals.hpp"

namespace protokb::http {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

// Splits on `sep` outside of <...> and "..." sections.
std::vector<std::string_view> split_list(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  bool in_angle = false, in_quote = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_quote) {
      if (c == '\\') ++i;
      else if (c == '"') in_quote = false;
    } else if (c == '"') {
      in_quote = true;
    } else if (c == '<') {
      in_angle = true;
    } else if (c == '>') {
      in_angle = false;
    } else if (c == sep && !in_angle) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(trim(s.substr(start)));
  return parts;
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::string_view strip_weak(std::string_view tag) {
  if (tag.starts_with("W/")) tag.remove_prefix(2);
  return tag;
}

}  // namespace

std::string gzip_compress(std::string_view data) {
  z_stream stream{};
  if (deflateInit2(&stream, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw std::runtime_error("deflateInit2 failed");
  }
  std::string out;
  out.resize(deflateBound(&stream, static_cast<uLong>(data.size())) + 32);
  stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  stream.avail_in = static_cast<uInt>(data.size());
  stream.next_out = reinterpret_cast<Bytef*>(out.data());
  stream.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&stream, Z_FINISH);
  deflateEnd(&stream);
  if (rc != Z_STREAM_END) throw std::runtime_error("gzip compression failed");
  out.resize(stream.total_out);
  return out;
}

std::string gzip_decompress(std::string_view data) {
  z_stream stream{};
  if (inflateInit2(&stream, 15 + 16) != Z_OK) throw std::runtime_error("inflateInit2 failed");
  stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  stream.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buffer[16384];
  int rc;
  do {
    stream.next_out = reinterpret_cast<Bytef*>(buffer);
    stream.avail_out = sizeof(buffer);
    rc = inflate(&stream, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&stream);
      throw std::runtime_error("corrupt gzip body");
    }
    out.append(buffer, sizeof(buffer) - stream.avail_out);
  } while (rc != Z_STREAM_END && (stream.avail_in > 0 || stream.avail_out == 0));
  inflateEnd(&stream);
  if (rc != Z_STREAM_END) throw std::runtime_error("truncated gzip body");
  return out;
}

std::string make_etag(std::string_view body) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(body.data(), body.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string tag = "\"";
  for (unsigned int i = 0; i < length; ++i) {
    tag.push_back(kHex[digest[i] >> 4]);
    tag.push_back(kHex[digest[i] & 0xF]);
  }
  tag.push_back('"');
  return tag;
}

bool etag_matches(std::string_view if_none_match, std::string_view etag) {
  if (trim(if_none_match) == "*") return true;
  for (auto candidate : split_list(if_none_match, ',')) {
    if (!candidate.empty() && strip_weak(candidate) == strip_weak(etag)) return true;
  }
  return false;
}

bool accepts_gzip(std::string_view accept_encoding) {
  for (auto item : split_list(accept_encoding, ',')) {
    auto params = split_list(item, ';');
    const auto coding = params.front();
    if (!iequals(coding, "gzip") && !iequals(coding, "x-gzip") && coding != "*") continue;
    double q = 1.0;
    for (std::size_t i = 1; i < params.size(); ++i) {
      if (params[i].size() > 2 && (params[i][0] == 'q' || params[i][0] == 'Q') && params[i][1] == '=') {
        try {
          q = std::stod(std::string(params[i].substr(2)));
        } catch (const std::exception&) {
          q = 0.0;
        }
      }
    }
    if (q > 0.0) return true;
  }
  return false;
}

std::optional<std::chrono::seconds> parse_max_age(std::string_view cache_control) {
  std::optional<std::chrono::seconds> result;
  for (auto directive : split_list(cache_control, ',')) {
    if (iequals(directive, "no-store") || iequals(directive, "no-cache")) {
      return std::chrono::seconds{0};
    }
    if (directive.size() > 8 && iequals(directive.substr(0, 8), "max-age=")) {
      auto value = unquote(directive.substr(8));
      long long seconds = 0;
      auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), seconds);
      if (ec == std::errc() && end == value.data() + value.size() && seconds >= 0) {
        result = std::chrono::seconds{seconds};
      }
    }
  }
  return result;
}

std::vector<std::string> parse_alternate_links(std::string_view link_header) {
  std::vector<std::string> urls;
  for (auto link : split_list(link_header, ',')) {
    if (!link.starts_with('<')) continue;
    const auto close = link.find('>');
    if (close == std::string_view::npos) continue;
    const auto target = link.substr(1, close - 1);
    auto params = split_list(link.substr(close + 1), ';');
    for (auto param : params) {
      const auto eq = param.find('=');
      if (eq == std::string_view::npos || !iequals(trim(param.substr(0, eq)), "rel")) continue;
      const auto rels = unquote(trim(param.substr(eq + 1)));
      bool alternate = false;
      std::size_t pos = 0;
      while (pos <= rels.size()) {
        auto next = rels.find(' ', pos);
        if (next == std::string_view::npos) next = rels.size();
        alternate = alternate || iequals(rels.substr(pos, next - pos), "alternate");
        pos = next + 1;
      }
      if (alternate) urls.emplace_back(target);
      break;
    }
  }
  return urls;
}

std::string format_alternate_links(const std::vector<std::string>& urls) {
  std::string out;
  for (const auto& url : urls) {
    if (!out.empty()) out += ", ";
    out += "<" + url + ">; rel=\"alternate\"";
  }
  return out;
}

std::string encode_query_value(std::string_view value) { return literal::percent_encode(value); }

std::optional<ParsedUrl> parse_http_url(std::string_view url) {
  std::string_view rest;
  std::string_view scheme;
  if (url.starts_with("http://")) {
    scheme = "http://";
  } else if (url.starts_with("https://")) {
    scheme = "https://";
  } else {
    return std::nullopt;
  }
  rest = url.substr(scheme.size());
  const auto slash = rest.find_first_of("/?#");
  const auto authority = rest.substr(0, slash);
  if (authority.empty()) return std::nullopt;
  std::string_view path = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
  if (const auto cut = path.find_first_of("?#"); cut != std::string_view::npos) path = path.substr(0, cut);
  while (path.ends_with('/')) path.remove_suffix(1);
  return ParsedUrl{std::string(scheme) + std::string(authority), std::string(path)};
}

}  // namespace protokb::http
