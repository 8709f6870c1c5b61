// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/ids.hpp"

#include <cstdint>
#include <cstring>
#include <new>

namespace protokb {

InvalidIriError::InvalidIriError(std::string iri, const std::string& reason)
    : std::invalid_argument("invalid IRI '" + iri + "': " + reason), iri_(std::move(iri)) {}

namespace iri {
namespace {

bool is_alpha(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_hex(unsigned char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

bool is_unreserved_ascii(unsigned char c) {
  return is_alpha(c) || is_digit(c) || c == '-' || c == '.' || c == '_' || c == '~';
}

bool is_reserved(unsigned char c) {
  switch (c) {
    case ':': case '/': case '?': case '#': case '[': case ']': case '@':
    case '!': case '$': case '&': case '\'': case '(': case ')':
    case '*': case '+': case ',': case ';': case '=':
      return true;
    default:
      return false;
  }
}

// Length of the UTF-8 sequence starting at text[i], or 0 if malformed.
// Rejects overlongs, surrogates and code points above U+10FFFF.
std::size_t utf8_sequence_length(std::string_view text, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(text[i]);
  std::size_t len;
  std::uint32_t cp;
  if (b0 >= 0xC2 && b0 <= 0xDF) {
    len = 2;
    cp = b0 & 0x1Fu;
  } else if (b0 >= 0xE0 && b0 <= 0xEF) {
    len = 3;
    cp = b0 & 0x0Fu;
  } else if (b0 >= 0xF0 && b0 <= 0xF4) {
    len = 4;
    cp = b0 & 0x07u;
  } else {
    return 0;
  }
  if (i + len > text.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(text[i + k]);
    if ((b & 0xC0u) != 0x80u) return 0;
    cp = (cp << 6) | (b & 0x3Fu);
  }
  if (len == 3 && (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF))) return 0;
  if (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) return 0;
  return len;
}

}  // namespace

bool is_well_formed_utf8(std::string_view bytes) {
  std::size_t i = 0;
  while (i < bytes.size()) {
    if (static_cast<unsigned char>(bytes[i]) < 0x80) {
      ++i;
      continue;
    }
    const std::size_t len = utf8_sequence_length(bytes, i);
    if (len == 0) return false;
    i += len;
  }
  return true;
}

std::optional<std::string> find_violation(std::string_view text) {
  if (text.empty()) return "empty string";
  if (!is_alpha(static_cast<unsigned char>(text[0]))) return "missing scheme";

  std::size_t i = 1;
  while (i < text.size() && text[i] != ':') {
    const auto c = static_cast<unsigned char>(text[i]);
    if (!(is_alpha(c) || is_digit(c) || c == '+' || c == '-' || c == '.')) {
      return "missing scheme";
    }
    ++i;
  }
  if (i == text.size()) return "missing scheme";
  ++i;  // ':'

  bool seen_fragment = false;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c >= 0x80) {
      const std::size_t len = utf8_sequence_length(text, i);
      if (len == 0) return "malformed UTF-8 at offset " + std::to_string(i);
      i += len;
      continue;
    }
    if (c == '%') {
      if (i + 2 >= text.size()) return "truncated percent-encoding at offset " + std::to_string(i);
      if (!is_hex(static_cast<unsigned char>(text[i + 1])) ||
          !is_hex(static_cast<unsigned char>(text[i + 2]))) {
        return "bad percent-encoding at offset " + std::to_string(i);
      }
      i += 3;
      continue;
    }
    if (c == '#') {
      if (seen_fragment) return "second '#' at offset " + std::to_string(i);
      seen_fragment = true;
    } else if (!is_unreserved_ascii(c) && !is_reserved(c)) {
      return "illegal character at offset " + std::to_string(i);
    }
    ++i;
  }
  return std::nullopt;
}

}  // namespace iri

namespace detail {

IriText* IriText::make(std::string_view text) {
  void* block = ::operator new(sizeof(IriText) + text.size());
  auto* rep = new (block) IriText(text.size());
  std::memcpy(reinterpret_cast<char*>(rep + 1), text.data(), text.size());
  return rep;
}

void IriText::release(IriText* rep) noexcept {
  if (rep && rep->refs_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
    rep->~IriText();
    ::operator delete(rep);
  }
}

}  // namespace detail

const PrototypeId& empty_prototype_id() {
  static const PrototypeId id = PrototypeId::parse(kEmptyPrototypeIri);
  return id;
}

}  // namespace protokb
