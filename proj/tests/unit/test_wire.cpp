// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wire_oracle.hpp"
#include "protokb/fixpoint.hpp"
#include "protokb/wire.hpp"

using namespace protokb;
using wire::WireError;

namespace {

PrototypeId P(std::string_view s) { return PrototypeId::parse(s); }
PropertyId R(std::string_view s) { return PropertyId::parse(s); }

WireError::Kind kind_of(std::string_view doc) {
  try {
    wire::decode_definition(doc);
  } catch (const WireError& e) {
    return e.kind();
  }
  FAIL("decoded: " << doc);
  return WireError::Kind::kMalformedDocument;
}

}  // namespace

TEST_CASE("canonical encoding, byte for byte") {
  const PrototypeDefinition d(P("ex:b"), P("ex:a"), ChangeSet().add(R("ex:z"), P("ex:2")).add(R("ex:z"), P("ex:1")).add(R("ex:y"), P("ex:3")),
                              ChangeSet().remove(R("ex:q"), P("ex:4")).remove_all(R("ex:r")));
  CHECK(wire::encode_definition(d) ==
        R"({"id":"ex:b","base":"ex:a","add":{"ex:y":["ex:3"],"ex:z":["ex:1","ex:2"]},"rem":{"ex:q":["ex:4"]},"remAll":["ex:r"]})");
  CHECK(wire::encode_definition(PrototypeDefinition::empty_prototype()) ==
        R"({"id":"PROTO:P_0","base":"PROTO:P_0","add":{},"rem":{},"remAll":[]})");
  const FixpointDefinition fp{P("ex:f"), PropertyMap({{R("ex:p"), {P("ex:v")}}})};
  CHECK(wire::encode_fixpoint(fp) == R"({"id":"ex:f","base":"PROTO:P_0","add":{"ex:p":["ex:v"]},"rem":{},"remAll":[]})");
}

TEST_CASE("JSON escaping of IRI characters") {
  const PrototypeDefinition d(P("ex:a/b?c=d&e#f"), P("ex:\xC3\xA9"));
  const auto doc = wire::encode_definition(d);
  CHECK(doc.find("ex:\xC3\xA9") != std::string::npos);  // UTF-8 kept as-is
  CHECK(wire::decode_definition(doc) == d);
  CHECK(doc == testing::oracle_encode(d));
}

TEST_CASE("lenient decoding") {
  CHECK(wire::decode_definition(R"({"base":"PROTO:P_0","id":"ex:a"})") == PrototypeDefinition(P("ex:a"), empty_prototype_id()));
  CHECK(wire::decode_definition(R"( { "id" : "ex:a", "base":"PROTO:P_0", "add":{"ex:p":["ex:v","ex:v"]}, "extra": 1 } )") ==
        PrototypeDefinition(P("ex:a"), empty_prototype_id(), ChangeSet().add(R("ex:p"), P("ex:v"))));
  // rem entries for remAll properties are folded away.
  const auto d = wire::decode_definition(R"({"id":"ex:a","base":"PROTO:P_0","rem":{"ex:p":["ex:v"]},"remAll":["ex:p"]})");
  CHECK(d.remove().removals().empty());
  CHECK(d.remove().removed_properties() == PropertySet{R("ex:p")});
}

TEST_CASE("decoding errors are typed") {
  using K = WireError::Kind;
  CHECK(kind_of("") == K::kMalformedDocument);
  CHECK(kind_of("{") == K::kMalformedDocument);
  CHECK(kind_of("[]") == K::kMalformedDocument);
  CHECK(kind_of(R"({"id":"ex:a","base":"PROTO:P_0"} x)") == K::kMalformedDocument);
  CHECK(kind_of(R"({"id":1,"base":"PROTO:P_0"})") == K::kMalformedDocument);
  CHECK(kind_of(R"({"id":"ex:a","base":"PROTO:P_0","add":{"ex:p":"ex:v"}})") == K::kMalformedDocument);
  CHECK(kind_of(R"({"id":"ex:a","base":"PROTO:P_0","remAll":"ex:p"})") == K::kMalformedDocument);
  CHECK(kind_of(R"({"base":"PROTO:P_0"})") == K::kMissingField);
  CHECK(kind_of(R"({"id":"ex:a"})") == K::kMissingField);
  CHECK(kind_of(R"({"id":"ex a","base":"PROTO:P_0"})") == K::kInvalidIri);
  CHECK(kind_of(R"({"id":"ex:a","base":"PROTO:P_0","add":{"bad key":["ex:v"]}})") == K::kInvalidIri);
  CHECK(kind_of(R"({"id":"ex:a","base":"PROTO:P_0","rem":{"ex:p":["<x>"]}})") == K::kInvalidIri);
  try {
    wire::decode_definition(R"({"id":"ex:a","base":"nope"})");
  } catch (const WireError& e) {
    CHECK(e.detail() == "nope");
  }
}

TEST_CASE("property: encode/decode round trip and oracle agreement") {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 3000; ++i) {
    const auto d = testing::random_definition(rng);
    const auto doc = wire::encode_definition(d);
    CHECK(wire::decode_definition(doc) == d);
    CHECK(wire::encode_definition(wire::decode_definition(doc)) == doc);
    CHECK(doc == testing::oracle_encode(d));
    CHECK(doc.find_first_of(" \n\t") == std::string::npos);
  }
}

TEST_CASE("batches are all-or-nothing") {
  const std::vector<PrototypeDefinition> defs = {PrototypeDefinition(P("ex:a"), empty_prototype_id()),
                                                 PrototypeDefinition(P("ex:b"), P("ex:a"))};
  const auto doc = wire::encode_batch(defs);
  CHECK(doc == "[" + wire::encode_definition(defs[0]) + "," + wire::encode_definition(defs[1]) + "]");
  CHECK(wire::decode_batch(doc) == defs);
  CHECK(wire::encode_batch(std::span<const PrototypeDefinition>{}) == "[]");
  try {
    wire::decode_batch(R"([{"id":"ex:a","base":"PROTO:P_0"},{"id":"bad iri","base":"PROTO:P_0"}])");
    FAIL("expected WireError");
  } catch (const WireError& e) {
    CHECK(e.kind() == WireError::Kind::kMalformedDocument);
  }
  CHECK_THROWS_AS(wire::decode_batch("{}"), WireError);
}

TEST_CASE("ndjson round trip") {
  std::mt19937_64 rng(6);
  std::vector<DefinitionPtr> defs;
  for (int i = 0; i < 200; ++i) defs.push_back(std::make_shared<const PrototypeDefinition>(testing::random_definition(rng)));
  std::stringstream ss;
  wire::write_ndjson(ss, defs);
  std::string text = ss.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 200);
  std::stringstream with_blank("\n" + text + "\n\n");
  const auto back = wire::read_ndjson(with_blank);
  REQUIRE(back.size() == defs.size());
  for (std::size_t i = 0; i < defs.size(); ++i) CHECK(*back[i] == *defs[i]);

  std::stringstream broken(wire::encode_definition(*defs[0]) + "\n{oops\n");
  try {
    wire::read_ndjson(broken);
    FAIL("expected WireError");
  } catch (const WireError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}
