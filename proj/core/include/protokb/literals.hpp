// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "protokb/ids.hpp"

namespace protokb {

/// Literal values encoded as prototype IDs.
///
///   value:integer:<n>   n = "0" | ["-"] [1-9][0-9]*   (fits in int64)
///   value:string:<s>    s = percent-encoded UTF-8; every byte outside
///                           ALPHA / DIGIT / "-" / "." / "_" / "~" is
///                           written as %HH with uppercase hex
namespace literal {

inline constexpr std::string_view kIntegerPrefix = "value:integer:";
inline constexpr std::string_view kStringPrefix = "value:string:";

PrototypeId integer_id(std::int64_t value);
PrototypeId string_id(std::string_view utf8);

bool is_integer_literal(std::string_view iri);
bool is_string_literal(std::string_view iri);

std::optional<std::int64_t> decode_integer(std::string_view iri);
std::optional<std::string> decode_string(std::string_view iri);

/// RFC 3986 percent-encoding of everything outside `unreserved`.
std::string percent_encode(std::string_view bytes);

}  // namespace literal

/// Recognizers consulted by PredefinedKnowledgeBase; extend with new literal
/// types by registering more predicates.
class LiteralRegistry {
 public:
  using Recognizer = std::function<bool(std::string_view iri)>;

  /// Integer and string literals.
  static LiteralRegistry defaults();

  LiteralRegistry& add(std::string name, Recognizer recognizer);
  bool recognizes(std::string_view iri) const;

  std::vector<std::string> names() const;

 private:
  struct Entry {
    std::string name;
    Recognizer recognizer;
  };
  std::vector<Entry> entries_;
};

}  // namespace protokb
