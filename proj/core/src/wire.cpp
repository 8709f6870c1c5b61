// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include "protokb/wire.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace protokb::wire {
namespace {

using Json = nlohmann::json;
using Kind = WireError::Kind;

void append_string(std::string& out, std::string_view s) {
  // Valid IRIs never contain '"', '\\' or control characters, but keep the
  // output well-formed JSON for any input.
  static constexpr char kHex[] = "0123456789abcdef";
  out.push_back('"');
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(ch);
    } else if (c < 0x20) {
      out += "\\u00";
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    } else {
      out.push_back(ch);
    }
  }
  out.push_back('"');
}

void append_values(std::string& out, const PropertyValues& values) {
  out.push_back('{');
  bool first_property = true;
  for (const auto& [property, set] : values) {
    if (!first_property) out.push_back(',');
    first_property = false;
    append_string(out, property.view());
    out += ":[";
    bool first_value = true;
    for (const auto& value : set) {
      if (!first_value) out.push_back(',');
      first_value = false;
      append_string(out, value.view());
    }
    out.push_back(']');
  }
  out.push_back('}');
}

template <class Id>
Id parse_id(const Json& node, std::string_view field) {
  if (!node.is_string()) {
    throw WireError(Kind::kMalformedDocument, "field '" + std::string(field) + "' must be a string");
  }
  const auto& text = node.get_ref<const std::string&>();
  auto id = Id::try_parse(text);
  if (!id) {
    throw WireError(Kind::kInvalidIri,
                    "field '" + std::string(field) + "': " + *iri::find_violation(text), text);
  }
  return *std::move(id);
}

PropertyValues parse_values(const Json& node, std::string_view field) {
  if (!node.is_object()) {
    throw WireError(Kind::kMalformedDocument, "field '" + std::string(field) + "' must be an object");
  }
  PropertyValues values;
  for (const auto& [key, array] : node.items()) {
    auto property = PropertyId::try_parse(key);
    if (!property) {
      throw WireError(Kind::kInvalidIri,
                      "property in '" + std::string(field) + "': " + *iri::find_violation(key), key);
    }
    if (!array.is_array()) {
      throw WireError(Kind::kMalformedDocument, "values of '" + key + "' must be an array");
    }
    auto& set = values[*property];
    for (const auto& element : array) set.insert(parse_id<PrototypeId>(element, field));
  }
  return values;
}

PrototypeDefinition parse_definition(const Json& doc) {
  if (!doc.is_object()) throw WireError(Kind::kMalformedDocument, "definition must be an object");

  auto id_it = doc.find("id");
  if (id_it == doc.end()) throw WireError(Kind::kMissingField, "missing field 'id'", "id");
  auto base_it = doc.find("base");
  if (base_it == doc.end()) throw WireError(Kind::kMissingField, "missing field 'base'", "base");

  auto id = parse_id<PrototypeId>(*id_it, "id");
  auto base = parse_id<PrototypeId>(*base_it, "base");

  PropertyValues additions;
  if (auto it = doc.find("add"); it != doc.end()) additions = parse_values(*it, "add");
  PropertyValues removals;
  if (auto it = doc.find("rem"); it != doc.end()) removals = parse_values(*it, "rem");
  PropertySet remove_all;
  if (auto it = doc.find("remAll"); it != doc.end()) {
    if (!it->is_array()) throw WireError(Kind::kMalformedDocument, "field 'remAll' must be an array");
    for (const auto& element : *it) remove_all.insert(parse_id<PropertyId>(element, "remAll"));
  }

  return PrototypeDefinition(std::move(id), std::move(base), ChangeSet(std::move(additions), {}, {}),
                             ChangeSet({}, std::move(removals), std::move(remove_all)));
}

Json parse_json(std::string_view doc) {
  try {
    return Json::parse(doc);
  } catch (const Json::parse_error& e) {
    throw WireError(Kind::kMalformedDocument, std::string("not JSON: ") + e.what());
  }
}

}  // namespace

WireError::WireError(Kind kind, const std::string& message, std::string detail)
    : std::runtime_error(message), kind_(kind), detail_(std::move(detail)) {}

void append_definition(std::string& out, const PrototypeDefinition& def) {
  out += "{\"id\":";
  append_string(out, def.id().view());
  out += ",\"base\":";
  append_string(out, def.base().view());
  out += ",\"add\":";
  append_values(out, def.add().additions());
  out += ",\"rem\":";
  append_values(out, def.remove().removals());
  out += ",\"remAll\":[";
  bool first = true;
  for (const auto& property : def.remove().removed_properties()) {
    if (!first) out.push_back(',');
    first = false;
    append_string(out, property.view());
  }
  out += "]}";
}

std::string encode_definition(const PrototypeDefinition& def) {
  std::string out;
  append_definition(out, def);
  return out;
}

std::string encode_fixpoint(const FixpointDefinition& fp) {
  return encode_definition(fp.as_definition());
}

PrototypeDefinition decode_definition(std::string_view doc) {
  return parse_definition(parse_json(doc));
}

std::string encode_batch(std::span<const PrototypeDefinition> defs) {
  std::string out = "[";
  for (std::size_t i = 0; i < defs.size(); ++i) {
    if (i > 0) out.push_back(',');
    append_definition(out, defs[i]);
  }
  out.push_back(']');
  return out;
}

std::string encode_batch(std::span<const DefinitionPtr> defs) {
  std::string out = "[";
  for (std::size_t i = 0; i < defs.size(); ++i) {
    if (i > 0) out.push_back(',');
    append_definition(out, *defs[i]);
  }
  out.push_back(']');
  return out;
}

std::vector<PrototypeDefinition> decode_batch(std::string_view doc) {
  const Json json = parse_json(doc);
  if (!json.is_array()) throw WireError(Kind::kMalformedDocument, "batch must be a JSON array");
  std::vector<PrototypeDefinition> out;
  out.reserve(json.size());
  for (std::size_t i = 0; i < json.size(); ++i) {
    try {
      out.push_back(parse_definition(json[i]));
    } catch (const WireError& e) {
      throw WireError(Kind::kMalformedDocument,
                      "batch element " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

void write_ndjson(std::ostream& out, std::span<const DefinitionPtr> defs) {
  std::string line;
  for (const auto& def : defs) {
    line.clear();
    append_definition(line, *def);
    line.push_back('\n');
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

std::vector<DefinitionPtr> read_ndjson(std::istream& in) {
  std::vector<DefinitionPtr> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(std::make_shared<const PrototypeDefinition>(decode_definition(line)));
    } catch (const WireError& e) {
      throw WireError(e.kind(), "line " + std::to_string(number) + ": " + e.what(), e.detail());
    }
  }
  return out;
}

}  // namespace protokb::wire
