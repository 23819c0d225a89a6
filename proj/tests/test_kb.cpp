#include <doctest.h>

#include "helpers.hpp"
#include "rowcomp/errors.hpp"
#include "rowcomp/kb.hpp"

using namespace rowcomp;
using helpers::TempFile;

TEST_CASE("loadKb on an empty file yields an empty KB") {
    TempFile f("");
    KnowledgeBase kb = loadKb(f.str());
    CHECK(kb.entityCount() == 0);
    CHECK(kb.tripleCount() == 0);
}

TEST_CASE("loadKb reads the 6-line fixture: 2 entities, 1 property, 2 triples") {
    KnowledgeBase kb = loadKb(helpers::fixturePath("kb_small.tsv"));
    CHECK(kb.entityCount() == 2);
    CHECK(kb.tripleCount() == 2);
    CHECK(kb.hasProperty("P1"));
    CHECK(kb.entityLabel("Q1") == "Kanye West");
    REQUIRE(kb.aliases("Q2").size() == 1);
    CHECK(kb.aliases("Q2")[0] == "K-Dot");
}

TEST_CASE("loadKb rejects two distinct objects for one (subject, property)") {
    TempFile f(
        "E\tA\ta\n"
        "P\tp\tp label\n"
        "S\tA\tp\ts\tx\n"
        "S\tA\tp\ts\ty\n");
    CHECK_THROWS_AS(loadKb(f.str()), ParseError);
}

TEST_CASE("loadKb reports parse errors with a line number") {
    TempFile f("E\tA\ta\nX\tbogus\trecord\n");
    try {
        loadKb(f.str());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("loadKb rejects dangling references") {
    TempFile f("E\tA\ta\nT\tA\tMissing\n");
    CHECK_THROWS_AS(loadKb(f.str()), ParseError);
    TempFile g("E\tA\ta\nP\tp\tp\nS\tB\tp\ts\tx\n");
    CHECK_THROWS_AS(loadKb(g.str()), ParseError);
}

TEST_CASE("propertyLookup returns the unique object or nullopt") {
    KnowledgeBase kb = helpers::rapperKb();
    auto v = kb.propertyLookup("Q1", "P1");
    REQUIRE(v.has_value());
    CHECK(v->kind == ValueKind::String);
    CHECK(v->text == "Yeezy");
    CHECK_FALSE(kb.propertyLookup("Q1", "P3").has_value());
    CHECK_THROWS_AS(kb.propertyLookup("nope", "P1"), UnknownIdError);
    CHECK_THROWS_AS(kb.propertyLookup("Q1", "nope"), UnknownIdError);
}

TEST_CASE("propertyLookup replays every loaded triple") {
    KnowledgeBase kb = loadKb(helpers::fixturePath("kb.tsv"));
    for (const auto& [key, value] : kb.triples()) {
        auto back = kb.propertyLookup(key.first, key.second);
        REQUIRE(back.has_value());
        CHECK(*back == value);
    }
}

TEST_CASE("time values survive load") {
    TempFile f("E\tA\ta\nP\tdob\tdate of birth\nS\tA\tdob\tt\t1977\n");
    KnowledgeBase kb = loadKb(f.str());
    auto v = kb.propertyLookup("A", "dob");
    REQUIRE(v.has_value());
    CHECK(v->kind == ValueKind::Time);
    CHECK(v->text == "1977");
    CHECK(kb.renderValue(*v) == "1977");
}

TEST_CASE("typesOf and entitiesOfType are inverse relations") {
    KnowledgeBase kb = helpers::rapperKb();
    CHECK(kb.typesOf("Q100").empty());
    CHECK(kb.typesOf("Q1") == std::set<EntityId>{"Q100", "Q101"});
    CHECK(kb.entitiesOfType("Q102").empty());
    CHECK(kb.entitiesOfType("Q101").size() == 6);
    for (const auto& [id, rec] : kb.entities()) {
        for (const EntityId& t : kb.typesOf(id)) {
            CHECK(kb.entitiesOfType(t).count(id) == 1);
        }
    }
    for (const auto& [id, rec] : kb.entities()) {
        for (const EntityId& t : kb.entitiesOfType(id)) {
            CHECK(kb.typesOf(t).count(id) == 1);
        }
    }
}

TEST_CASE("typeClosure follows subclass-of edges") {
    KnowledgeBase kb = helpers::rapperKb();
    // rapper is a subclass of musician; direct types stay unchanged.
    CHECK(kb.typesOf("Q1").count("Q102") == 0);
    CHECK(kb.typeClosure("Q1") == std::set<EntityId>{"Q100", "Q101", "Q102"});
}

TEST_CASE("resolveLabel is case-insensitive and sees aliases") {
    KnowledgeBase kb = helpers::rapperKb();
    CHECK(kb.resolveLabel("no such artist").empty());
    CHECK(kb.resolveLabel("kanye west") == std::set<EntityId>{"Q1"});
    CHECK(kb.resolveLabel("  KANYE   WEST ") == std::set<EntityId>{"Q1"});
    // Alias hit returns the same entity as the label hit.
    CHECK(kb.resolveLabel("Ye") == kb.resolveLabel("Kanye West"));
}

TEST_CASE("save/load round-trip preserves the KB") {
    KnowledgeBase kb = loadKb(helpers::fixturePath("kb.tsv"));
    TempFile out("", ".tsv");
    saveKb(kb, out.str());
    KnowledgeBase back = loadKb(out.str());
    CHECK(back.entities() == kb.entities());
    CHECK(back.properties() == kb.properties());
    CHECK(back.triples() == kb.triples());
    CHECK(back.subclassEdges() == kb.subclassEdges());
    for (const auto& [id, rec] : kb.entities()) {
        CHECK(back.typesOf(id) == kb.typesOf(id));
    }
}

TEST_CASE("builder rejects duplicate declarations") {
    KnowledgeBaseBuilder b;
    b.addEntity("A", "a");
    CHECK_THROWS_AS(b.addEntity("A", "again"), ParseError);
    b.addProperty("p", "p");
    CHECK_THROWS_AS(b.addProperty("p", "again"), ParseError);
}
