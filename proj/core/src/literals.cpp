// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/literals.hpp"

#include <charconv>

namespace protokb {
namespace literal {
namespace {

bool is_unreserved(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '.' || c == '_' || c == '~';
}

int upper_hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::optional<std::string> decode_payload(std::string_view payload) {
  std::string out;
  out.reserve(payload.size());
  for (std::size_t i = 0; i < payload.size(); ++i) {
    const auto c = static_cast<unsigned char>(payload[i]);
    if (c == '%') {
      if (i + 2 >= payload.size()) return std::nullopt;
      const int hi = upper_hex_value(payload[i + 1]);
      const int lo = upper_hex_value(payload[i + 2]);
      if (hi < 0 || lo < 0) return std::nullopt;
      const auto byte = static_cast<unsigned char>(hi * 16 + lo);
      // Unreserved bytes must appear unencoded, otherwise the encoding is not injective.
      if (is_unreserved(byte)) return std::nullopt;
      out.push_back(static_cast<char>(byte));
      i += 2;
    } else if (is_unreserved(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      return std::nullopt;
    }
  }
  if (!iri::is_well_formed_utf8(out)) return std::nullopt;
  return out;
}

}  // namespace

std::string percent_encode(std::string_view bytes) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(bytes.size());
  for (const char ch : bytes) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_unreserved(c)) {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

PrototypeId integer_id(std::int64_t value) {
  return PrototypeId::parse(std::string(kIntegerPrefix) + std::to_string(value));
}

PrototypeId string_id(std::string_view utf8) {
  if (!iri::is_well_formed_utf8(utf8)) {
    throw std::invalid_argument("string literal is not well-formed UTF-8");
  }
  return PrototypeId::parse(std::string(kStringPrefix) + percent_encode(utf8));
}

std::optional<std::int64_t> decode_integer(std::string_view iri) {
  if (!iri.starts_with(kIntegerPrefix)) return std::nullopt;
  std::string_view digits = iri.substr(kIntegerPrefix.size());
  std::string_view magnitude = digits.starts_with('-') ? digits.substr(1) : digits;
  if (magnitude.empty()) return std::nullopt;
  for (const char c : magnitude) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  if (magnitude.size() > 1 && magnitude.front() == '0') return std::nullopt;
  if (magnitude == "0" && digits.size() != magnitude.size()) return std::nullopt;  // "-0"
  std::int64_t value = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || end != digits.data() + digits.size()) return std::nullopt;
  return value;
}

std::optional<std::string> decode_string(std::string_view iri) {
  if (!iri.starts_with(kStringPrefix)) return std::nullopt;
  return decode_payload(iri.substr(kStringPrefix.size()));
}

bool is_integer_literal(std::string_view iri) { return decode_integer(iri).has_value(); }
bool is_string_literal(std::string_view iri) { return decode_string(iri).has_value(); }

}  // namespace literal

LiteralRegistry LiteralRegistry::defaults() {
  LiteralRegistry registry;
  registry.add("integer", &literal::is_integer_literal);
  registry.add("string", &literal::is_string_literal);
  return registry;
}

LiteralRegistry& LiteralRegistry::add(std::string name, Recognizer recognizer) {
  entries_.push_back({std::move(name), std::move(recognizer)});
  return *this;
}

bool LiteralRegistry::recognizes(std::string_view iri) const {
  for (const auto& entry : entries_) {
    if (entry.recognizer(iri)) return true;
  }
  return false;
}

std::vector<std::string> LiteralRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& entry : entries_) out.push_back(entry.name);
  return out;
}

}  // namespace protokb
