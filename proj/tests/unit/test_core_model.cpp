// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "protokb/change_set.hpp"
#include "protokb/consistency.hpp"
#include "protokb/definition.hpp"
#include "protokb/ids.hpp"
#include "protokb/knowledge_base.hpp"
#include "protokb/literals.hpp"

using namespace protokb;

namespace {

PrototypeId P(std::string_view s) { return PrototypeId::parse(s); }
PropertyId R(std::string_view s) { return PropertyId::parse(s); }

}  // namespace

TEST_CASE("IRI validation") {
  for (const char* ok : {"PROTO:P_0", "http://example.org/a#b", "urn:isbn:0451450523", "ex:a%20b",
                         "ex:\xC3\xA9t\xC3\xA9", "a+b-c.d:x", "value:integer:-5", "mailto:x@y.z"}) {
    CAPTURE(ok);
    CHECK(iri::is_valid(ok));
    CHECK_NOTHROW(PrototypeId::parse(ok));
  }
  for (const char* bad : {"", "noscheme", ":nothing", "1ex:a", "ex:a b", "ex:a%2", "ex:a%zz",
                          "ex:<x>", "ex:a\"b", "ex:\xC3", "ex:\xFF", "ex:a\\b", "ex:{x}"}) {
    CAPTURE(bad);
    CHECK_FALSE(iri::is_valid(bad));
    CHECK_THROWS_AS(PrototypeId::parse(bad), InvalidIriError);
    CHECK_FALSE(PropertyId::try_parse(bad).has_value());
  }
}

TEST_CASE("IDs order bytewise and compare exactly") {
  CHECK(P("ex:B") < P("ex:a"));
  CHECK(P("ex:a") != P("EX:a"));
  CHECK(P("ex:%41") != P("ex:A"));  // no normalization
  CHECK(empty_prototype_id().str() == "PROTO:P_0");
}

TEST_CASE("integer literals") {
  CHECK(literal::integer_id(0).str() == "value:integer:0");
  CHECK(literal::integer_id(-42).str() == "value:integer:-42");
  CHECK(literal::decode_integer("value:integer:9223372036854775807") == INT64_MAX);
  CHECK(literal::decode_integer("value:integer:-9223372036854775808") == INT64_MIN);
  for (const char* bad : {"value:integer:", "value:integer:-0", "value:integer:01", "value:integer:+1",
                          "value:integer:1.0", "value:integer:9223372036854775808", "value:integer:-"}) {
    CAPTURE(bad);
    CHECK_FALSE(literal::is_integer_literal(bad));
  }
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto v = static_cast<std::int64_t>(rng());
    CHECK(literal::decode_integer(literal::integer_id(v).str()) == v);
  }
}

TEST_CASE("string literals against the percent-decoding oracle") {
  CHECK(literal::string_id("hello world").str() == "value:string:hello%20world");
  CHECK(literal::string_id("").str() == "value:string:");
  CHECK(literal::string_id("\xC3\xA9").str() == "value:string:%C3%A9");
  CHECK_FALSE(literal::is_string_literal("value:string:%c3%a9"));  // lowercase hex
  CHECK_FALSE(literal::is_string_literal("value:string:%41"));     // encoded unreserved
  CHECK_FALSE(literal::is_string_literal("value:string:%FF"));     // not UTF-8
  CHECK_FALSE(literal::is_string_literal("value:string:a%2"));
  CHECK_THROWS(literal::string_id("\xFF"));

  const std::vector<std::string> alphabet = {"a", "Z", "0", "-", ".", "_", "~", " ", "%", "/", "?", "#",
                                             "\"", "\xC3\xA9", "\xE2\x82\xAC", "\xF0\x9F\x98\x80", "\n"};
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    for (int n = static_cast<int>(rng() % 12); n > 0; --n) s += alphabet[rng() % alphabet.size()];
    const auto id = literal::string_id(s);
    const std::string payload = id.str().substr(literal::kStringPrefix.size());
    CHECK(testing::percent_decode(payload) == s);
    CHECK(literal::decode_string(id.str()) == s);
    CHECK(literal::is_string_literal(id.str()));
  }
}

TEST_CASE("literal registry is extensible") {
  auto reg = LiteralRegistry::defaults();
  CHECK(reg.recognizes("value:integer:3"));
  CHECK_FALSE(reg.recognizes("value:bool:true"));
  reg.add("bool", [](std::string_view s) { return s == "value:bool:true" || s == "value:bool:false"; });
  CHECK(reg.recognizes("value:bool:true"));
  PredefinedKnowledgeBase kb(reg);
  CHECK(kb.is_defined(P("value:bool:false")) != nullptr);
  CHECK(kb.is_defined(P("value:bool:maybe")) == nullptr);
}

TEST_CASE("change sets are canonical") {
  ChangeSet cs;
  cs.remove(R("ex:p"), P("ex:v")).remove_all(R("ex:p")).remove(R("ex:q"), P("ex:w"));
  CHECK(cs.removals().count(R("ex:p")) == 0);
  CHECK(cs.removed_properties() == PropertySet{R("ex:p")});
  CHECK(cs.removals().at(R("ex:q")) == ValueSet{P("ex:w")});

  ChangeSet direct({}, {{R("ex:p"), {P("ex:v")}}, {R("ex:e"), {}}}, {R("ex:p")});
  CHECK(direct.removals().empty());
  CHECK(direct.has_removals());

  ChangeSet adds;
  adds.add(R("ex:p"), P("ex:v")).add(R("ex:p"), P("ex:v")).add(R("ex:p"), P("ex:w"));
  CHECK(adds.addition_count() == 2);
  CHECK_THROWS_AS(PrototypeDefinition(P("ex:x"), empty_prototype_id(), cs), std::invalid_argument);
  CHECK_THROWS_AS(PrototypeDefinition(P("ex:x"), empty_prototype_id(), {}, adds), std::invalid_argument);
}

TEST_CASE("apply_changeset: remove before add") {
  const auto p = R("ex:p"), q = R("ex:q");
  PropertyMap base({{p, {P("ex:1"), P("ex:2")}}, {q, {P("ex:3")}}});

  ChangeSet rem;
  rem.remove(p, P("ex:1")).remove_all(q);
  ChangeSet add;
  add.add(q, P("ex:3")).add(p, P("ex:1"));
  const auto out = apply_changeset(base, rem, add);
  CHECK(out.values(p) == ValueSet{P("ex:1"), P("ex:2")});  // removed then re-added
  CHECK(out.values(q) == ValueSet{P("ex:3")});

  const auto gone = apply_changeset(base, ChangeSet().remove_all(p).remove_all(q), {});
  CHECK(gone.empty());
  CHECK(gone.entries().empty());  // no empty value sets left behind
}

TEST_CASE("property: apply_changeset is idempotent and matches a set-algebra oracle") {
  std::mt19937_64 rng(3);
  auto prop = [&] { return R("ex:p" + std::to_string(rng() % 4)); };
  auto val = [&] { return P("ex:v" + std::to_string(rng() % 5)); };
  for (int trial = 0; trial < 1000; ++trial) {
    PropertyValues start;
    for (int i = static_cast<int>(rng() % 8); i > 0; --i) start[prop()].insert(val());
    ChangeSet add, rem;
    for (int i = static_cast<int>(rng() % 5); i > 0; --i) add.add(prop(), val());
    for (int i = static_cast<int>(rng() % 5); i > 0; --i) rem.remove(prop(), val());
    if (rng() % 3 == 0) rem.remove_all(prop());

    const PropertyMap once = apply_changeset(PropertyMap(start), rem, add);
    CHECK(apply_changeset(once, rem, add) == once);

    testing::PlainProperties expected;
    for (const auto& [p, vs] : start)
      for (const auto& v : vs) {
        const bool dropped = rem.removed_properties().count(p) ||
                             (rem.removals().count(p) && rem.removals().at(p).count(v));
        if (!dropped) expected[p.str()].insert(v.str());
      }
    for (const auto& [p, vs] : add.additions())
      for (const auto& v : vs) expected[p.str()].insert(v.str());
    CHECK(testing::to_plain(once) == expected);
  }
}

TEST_CASE("empty and predefined knowledge bases") {
  const auto empty = EmptyKnowledgeBase::instance();
  const auto def = empty->is_defined(empty_prototype_id());
  REQUIRE(def);
  CHECK(*def == PrototypeDefinition::empty_prototype());
  CHECK(def->base() == empty_prototype_id());
  CHECK(def->add().empty());
  CHECK(empty->is_defined(P("ex:a")) == nullptr);
  CHECK(empty->explicit_ids().empty());

  const auto pre = PredefinedKnowledgeBase::instance();
  CHECK(pre->is_defined(empty_prototype_id()));
  const auto lit = pre->is_defined(literal::integer_id(5));
  REQUIRE(lit);
  CHECK(*lit == PrototypeDefinition(literal::integer_id(5), empty_prototype_id()));
  CHECK(pre->is_defined(literal::string_id("x y")));
  CHECK(pre->is_defined(P("value:integer:-0")) == nullptr);
  CHECK(pre->is_defined(P("ex:a")) == nullptr);
  CHECK(pre->explicit_ids().empty());
}

TEST_CASE("property: predefined KB recognizes exactly the literal grammar") {
  std::mt19937_64 rng(5);
  const std::string chars = "0123456789-+aZ%.:~_ ";
  const auto pre = PredefinedKnowledgeBase::instance();
  for (int i = 0; i < 5000; ++i) {
    std::string payload;
    for (int n = static_cast<int>(rng() % 6); n > 0; --n) payload += chars[rng() % chars.size()];
    for (const std::string prefix : {"value:integer:", "value:string:"}) {
      const std::string text = prefix + payload;
      const auto id = PrototypeId::try_parse(text);
      if (!id) continue;
      bool expected;
      if (prefix == "value:integer:") {
        // Oracle: round trip through the canonical decimal form.
        try {
          std::size_t used = 0;
          const long long v = std::stoll(payload, &used);
          expected = used == payload.size() && std::to_string(v) == payload;
        } catch (...) {
          expected = false;
        }
      } else {
        expected = literal::percent_encode(testing::percent_decode(payload)) == payload &&
                   iri::is_well_formed_utf8(testing::percent_decode(payload));
      }
      CAPTURE(text);
      CHECK((pre->is_defined(*id) != nullptr) == expected);
    }
  }
}

TEST_CASE("layered KB looks locally, then in its basis") {
  KnowledgeBaseBuilder builder(PredefinedKnowledgeBase::instance());
  builder.add(PrototypeDefinition(P("ex:a"), empty_prototype_id(), ChangeSet().add(R("ex:n"), literal::integer_id(1))));
  builder.add(PrototypeDefinition(P("ex:b"), P("ex:a")));
  const auto kb = builder.build();
  CHECK(kb->is_defined(P("ex:b"))->base() == P("ex:a"));
  CHECK(kb->is_defined(literal::integer_id(1)));
  CHECK(kb->is_defined(empty_prototype_id()));
  CHECK(kb->is_defined(P("ex:c")) == nullptr);
  CHECK(kb->explicit_ids() == std::vector<PrototypeId>{P("ex:a"), P("ex:b")});

  KnowledgeBaseBuilder upper(kb);
  upper.add(PrototypeDefinition(P("ex:c"), P("ex:b")));
  const auto top = upper.build();
  CHECK(top->explicit_ids() == std::vector<PrototypeId>{P("ex:c"), P("ex:a"), P("ex:b")});
  CHECK(top->is_defined(P("ex:a")) == kb->is_defined(P("ex:a")));
}

TEST_CASE("chained KB: the first member defining an ID wins") {
  auto make = [](const char* value) {
    KnowledgeBaseBuilder b(PredefinedKnowledgeBase::instance());
    b.add(PrototypeDefinition(P("ex:x"), empty_prototype_id(), ChangeSet().add(R("ex:from"), literal::string_id(value))));
    return b.build();
  };
  const auto first = make("first");
  const auto second = make("second");
  KnowledgeBaseBuilder only_second;
  only_second.add(PrototypeDefinition(P("ex:y"), empty_prototype_id()));
  const auto third = only_second.build();

  ChainedKnowledgeBase chain({first, second, third});
  CHECK(chain.is_defined(P("ex:x"))->add().additions().at(R("ex:from")) == ValueSet{literal::string_id("first")});
  CHECK(chain.is_defined(P("ex:y")) == third->is_defined(P("ex:y")));
  CHECK(chain.is_defined(P("ex:z")) == nullptr);
  CHECK(chain.is_defined(empty_prototype_id()));

  ChainedKnowledgeBase reversed({second, first});
  CHECK(reversed.is_defined(P("ex:x"))->add().additions().at(R("ex:from")) == ValueSet{literal::string_id("second")});
  CHECK(chain.explicit_ids() == std::vector<PrototypeId>{P("ex:x"), P("ex:y")});

  ChainedKnowledgeBase none({});
  CHECK(none.is_defined(empty_prototype_id()));
}

TEST_CASE("property: chained lookup equals a first-hit scan") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<KnowledgeBasePtr> members;
    std::vector<std::map<std::string, DefinitionPtr>> tables;
    for (int m = 0; m < 3; ++m) {
      KnowledgeBaseBuilder b(PredefinedKnowledgeBase::instance());
      std::map<std::string, DefinitionPtr> table;
      for (int k = 0; k < 10; ++k) {
        if (rng() % 2) continue;
        auto def = make_definition(P("ex:k" + std::to_string(k)), empty_prototype_id(),
                                   ChangeSet().add(R("ex:m"), literal::integer_id(m)));
        table[def->id().str()] = def;
        b.add(def);
      }
      members.push_back(b.build());
      tables.push_back(table);
    }
    ChainedKnowledgeBase chain(members);
    for (int k = 0; k < 10; ++k) {
      const std::string id = "ex:k" + std::to_string(k);
      DefinitionPtr expected;
      for (const auto& t : tables)
        if (auto it = t.find(id); it != t.end()) {
          expected = it->second;
          break;
        }
      CHECK(chain.is_defined(P(id)) == expected);
    }
  }
}
