// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "protokb/definition.hpp"

namespace protokb {

/// JSON interchange format for prototype definitions and fixpoints.
///
/// Canonical encoding (the one encode_* produce, byte for byte):
///
///   {"id":"<iri>","base":"<iri>","add":{"<prop>":["<iri>",...],...},
///    "rem":{"<prop>":["<iri>",...],...},"remAll":["<prop>",...]}
///
/// keys in exactly that order, property keys and every array sorted bytewise
/// and free of duplicates, no whitespace. A fixpoint is encoded as the
/// definition (id, PROTO:P_0, properties, {}). Decoding accepts any
/// well-formed variant: add/rem/remAll may be absent, arrays may repeat
/// values, and unknown keys are ignored.
namespace wire {

class WireError : public std::runtime_error {
 public:
  enum class Kind { kMalformedDocument, kInvalidIri, kMissingField };

  WireError(Kind kind, const std::string& message, std::string detail = {});

  Kind kind() const noexcept { return kind_; }
  /// The offending IRI for kInvalidIri, the field name for kMissingField.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Kind kind_;
  std::string detail_;
};

std::string encode_definition(const PrototypeDefinition& def);
std::string encode_fixpoint(const FixpointDefinition& fp);

/// Appends the canonical encoding of `def` to `out`.
void append_definition(std::string& out, const PrototypeDefinition& def);

PrototypeDefinition decode_definition(std::string_view doc);

std::string encode_batch(std::span<const PrototypeDefinition> defs);
std::string encode_batch(std::span<const DefinitionPtr> defs);

/// All-or-nothing: any bad element fails the whole document with
/// kMalformedDocument.
std::vector<PrototypeDefinition> decode_batch(std::string_view doc);

/// Newline-delimited canonical definitions, one per line.
void write_ndjson(std::ostream& out, std::span<const DefinitionPtr> defs);

/// Reads newline-delimited definitions; blank lines are skipped. Errors carry
/// the 1-based line number in their message.
std::vector<DefinitionPtr> read_ndjson(std::istream& in);

}  // namespace wire
}  // namespace protokb
