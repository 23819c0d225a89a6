#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "rowcomp/errors.hpp"
#include "rowcomp/suggest.hpp"
#include "rowcomp/table.hpp"
#include "rowcomp/text.hpp"

using namespace rowcomp;

namespace {

LinkedTable rapperSeedTable(const KnowledgeBase& kb, const EmbeddingIndex& idx) {
    Table t = parseCsv(
        "Kanye West,Yeezy,1977\n"
        "Kendrick Lamar,K-Dot,1987\n"
        "Drake,Drizzy,1986\n");
    return linkTable(kb, idx, t);
}

}  // namespace

TEST_CASE("generateEmbeddingCandidates filters by type and table properties") {
    KnowledgeBaseBuilder b;
    b.addEntity("human", "human");
    b.addEntity("rapper", "rapper");
    b.addProperty("tp1", "first in-table");
    b.addProperty("tp2", "second in-table");
    b.addEntity("S", "Seed");
    b.addType("S", "human");
    b.addType("S", "rapper");
    // C1: shares a low-cardinality type, holds one in-table property -> in.
    b.addEntity("C1", "cand one");
    b.addType("C1", "human");
    b.addType("C1", "rapper");
    b.addTriple("C1", "tp1", ObjectValue::stringValue("x"));
    // C2: human only, missing tp2 -> excluded by the all-properties rule.
    b.addEntity("C2", "cand two");
    b.addType("C2", "human");
    b.addTriple("C2", "tp1", ObjectValue::stringValue("x"));
    // C3: human only but holds every in-table property -> in.
    b.addEntity("C3", "cand three");
    b.addType("C3", "human");
    b.addTriple("C3", "tp1", ObjectValue::stringValue("x"));
    b.addTriple("C3", "tp2", ObjectValue::stringValue("x"));
    // C4: shares no seed type -> out.
    b.addEntity("C4", "cand four");
    KnowledgeBase kb = b.build();

    EmbeddingIndex idx(2, Metric::Cosine);
    idx.add("S", {1, 0});
    idx.add("C1", {1, 0.1});
    idx.add("C2", {1, 0.2});
    idx.add("C3", {1, 0.3});
    idx.add("C4", {1, 0.4});

    std::set<PropertyId> inTable{"tp1", "tp2"};
    std::set<EntityId> highCard{"human"};

    CHECK(generateEmbeddingCandidates(kb, idx, {}, inTable, 10, highCard).empty());

    auto cands = generateEmbeddingCandidates(kb, idx, {"S"}, inTable, 10, highCard);
    std::set<EntityId> got;
    for (const auto& c : cands) {
        got.insert(c.entity);
        CHECK(c.source == CandidateSource::Embedding);
    }
    CHECK(got == std::set<EntityId>{"C1", "C3"});
}

TEST_CASE("toPrompt renders linked columns in order") {
    KnowledgeBase kb = helpers::rapperKb();
    LinkedTable lt;
    lt.table = parseCsv("Kanye West,Yeezy,1977\n");
    lt.mainColumn = {EntityId("Q1")};
    lt.columnLinks = {std::nullopt, PropertyId("P1"), PropertyId("P2")};
    CHECK(toPrompt(kb, lt, 0) ==
          "Kanye West has pseudonym Yeezy and has date of birth 1977");

    lt.columnLinks = {std::nullopt, std::nullopt, std::nullopt};
    CHECK(toPrompt(kb, lt, 0) == "Kanye West");

    lt.mainColumn = {std::nullopt};
    CHECK_THROWS_AS(toPrompt(kb, lt, 0), UnknownIdError);
}

TEST_CASE("generateLmCandidates links generations back to the KB") {
    KnowledgeBase kb = helpers::rapperKb();
    LinkedTable lt;
    lt.table = parseCsv("Kanye West,Yeezy\n");
    lt.mainColumn = {EntityId("Q1")};
    lt.columnLinks = {std::nullopt, PropertyId("P1")};

    MockGenerator dry;
    CHECK(generateLmCandidates(kb, dry, lt).empty());

    std::map<std::string, std::vector<Generation>> fixtures;
    fixtures["Kanye West has pseudonym Yeezy"] = {
        {"Kendrick Lamar has pseudonym K-Dot", 0.8},
        {"Kendrick Lamar has pseudonym Kung Fu Kenny", 0.6},
        {"Unknown Someone has pseudonym Q", std::nullopt},
        {"Kanye West has pseudonym Yeezy", 0.9},  // the seed itself: excluded
        {"Nas has pseudonym Nasty Nas", std::nullopt},
    };
    MockGenerator gen(fixtures);
    auto cands = generateLmCandidates(kb, gen, lt);
    REQUIRE(cands.size() == 2);
    std::map<EntityId, std::optional<double>> byId;
    for (const auto& c : cands) {
        CHECK(c.source == CandidateSource::Lm);
        byId[c.entity] = c.lmScore;
    }
    REQUIRE(byId.count("Q2"));
    CHECK(*byId["Q2"] == 0.8);  // best score across duplicate mentions
    REQUIRE(byId.count("Q6"));
    CHECK_FALSE(byId["Q6"].has_value());
}

TEST_CASE("extractFeatures computes each feature as hand-derived") {
    KnowledgeBaseBuilder b;
    b.addEntity("tau", "tau type");
    b.addEntity("sigma", "sigma type");
    b.addProperty("tp", "in table");
    b.addProperty("e1", "extra one");
    b.addProperty("e2", "extra two");
    b.addProperty("e3", "extra three");
    b.addEntity("S1", "abcd");
    b.addEntity("S2", "wxyz");
    b.addEntity("C", "abcx");
    b.addType("S1", "tau");
    b.addType("S2", "tau");
    b.addType("S2", "sigma");
    b.addType("C", "tau");
    b.addTriple("S1", "e1", ObjectValue::stringValue("v"));
    b.addTriple("S1", "e2", ObjectValue::stringValue("v"));
    b.addTriple("S2", "e2", ObjectValue::stringValue("v"));
    b.addTriple("S2", "e3", ObjectValue::stringValue("v"));
    b.addTriple("C", "e2", ObjectValue::stringValue("v"));
    b.addTriple("C", "e3", ObjectValue::stringValue("v"));
    KnowledgeBase kb = b.build();

    EmbeddingIndex idx(2, Metric::Cosine);
    idx.add("S1", {1, 0});
    idx.add("S2", {0, 1});
    idx.add("C", {1, 1});

    Candidate c{"C", CandidateSource::Lm, 0.4, std::nullopt};
    FeatureVector f = extractFeatures(kb, idx, {"S1", "S2"}, {"tp"}, c, 1);

    CHECK(f.distToClosestSeed == doctest::Approx(1.0 - std::sqrt(0.5)));
    CHECK(f.extraPropertyOverlap == doctest::Approx(2.0 / 3.0));
    CHECK(f.minLabelLevenshtein == doctest::Approx(0.25));
    // Labels "abcx"/"abcd" share exactly the n-gram "abc" of their three
    // 3..5-grams each: cosine 1/3, distance 2/3.
    CHECK(f.minLabelEmbedDistance == doctest::Approx(2.0 / 3.0));
    CHECK(f.typeOverlap == doctest::Approx(0.5));
    CHECK(f.seedNeighborFraction == doctest::Approx(1.0));
    CHECK(f.source == CandidateSource::Lm);
    CHECK(f.lmScore == 0.4);

    // A candidate labeled like a seed has zero label distance.
    KnowledgeBaseBuilder d;
    d.addEntity("S", "Same Name");
    d.addEntity("C", "Same Name");
    KnowledgeBase kb2 = d.build();
    EmbeddingIndex none;
    Candidate c2{"C", CandidateSource::Embedding, std::nullopt, std::nullopt};
    FeatureVector f2 = extractFeatures(kb2, none, {"S"}, {}, c2, 1);
    CHECK(f2.minLabelLevenshtein == 0.0);
    CHECK(f2.typeOverlap == 0.0);  // no shared types
}

TEST_CASE("detectors score planted outliers highest") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<std::vector<double>> m;
    for (int i = 0; i < 50; ++i) m.push_back({noise(rng), noise(rng)});
    m.push_back({5, 5});
    m.push_back({-6, 4});
    m.push_back({7, -7});

    for (auto scores : {knnOutlierScores(m, 5), lofOutlierScores(m, 5)}) {
        std::vector<std::size_t> order(m.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
        std::set<std::size_t> top(order.begin(), order.begin() + 3);
        CHECK(top == std::set<std::size_t>{50, 51, 52});
    }
}

TEST_CASE("rankCandidates normalizes, orders, and ignores input permutation") {
    auto mk = [](const std::string& id, double dist) {
        Candidate c{id, CandidateSource::Embedding, std::nullopt, FeatureVector{}};
        c.features->distToClosestSeed = dist;
        return c;
    };

    // Single candidate: degenerate normalization gives score 1.
    auto lone = rankCandidates({mk("only", 0.3)}, "knn", 0.05);
    REQUIRE(lone.size() == 1);
    CHECK(lone[0].entity == "only");
    CHECK(lone[0].score == 1.0);

    std::vector<Candidate> cands;
    for (int i = 0; i < 12; ++i) cands.push_back(mk("e" + std::to_string(i), 0.01 * i));
    cands.push_back(mk("far", 5.0));

    auto ranked = rankCandidates(cands, "knn", 0.05);
    REQUIRE(ranked.size() == cands.size());
    CHECK(ranked[0].entity == "far");
    for (const auto& r : ranked) {
        CHECK(r.score >= 0.0);
        CHECK(r.score <= 1.0);
    }

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        auto shuffled = cands;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto again = rankCandidates(shuffled, "knn", 0.05);
        REQUIRE(again.size() == ranked.size());
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            CHECK(again[i].entity == ranked[i].entity);
            CHECK(again[i].score == ranked[i].score);
        }
    }

    CHECK_THROWS_AS(rankCandidates({}, "knn", 0.05), std::invalid_argument);
    CHECK_THROWS_AS(rankCandidates({mk("x", 1)}, "mystery", 0.05), std::invalid_argument);
    // lof accepts the same input.
    CHECK(rankCandidates(cands, "lof", 0.05).size() == cands.size());
}

TEST_CASE("suggestSubjects merges generator outputs deterministically") {
    KnowledgeBase kb = helpers::rapperKb();
    EmbeddingIndex idx = helpers::rapperIndex();
    LinkedTable lt = rapperSeedTable(kb, idx);

    SuggestConfig cfg;
    cfg.highCardinalityTypes = {"Q100"};

    MockGenerator dry;
    auto embeddingOnly = suggestSubjects(kb, idx, dry, lt, cfg);
    std::set<EntityId> entities;
    for (const auto& r : embeddingOnly) entities.insert(r.entity);
    CHECK(entities == std::set<EntityId>{"Q4", "Q5", "Q6"});

    std::map<std::string, std::vector<Generation>> fixtures;
    fixtures["Kanye West has pseudonym Yeezy and has date of birth 1977\n"
             "Kendrick Lamar has pseudonym K-Dot and has date of birth 1987\n"
             "Drake has pseudonym Drizzy and has date of birth 1986"] = {
        {"Eminem has pseudonym Slim Shady", 0.9}};
    MockGenerator gen(fixtures);
    auto merged = suggestSubjects(kb, idx, gen, lt, cfg);
    std::map<EntityId, int> counts;
    for (const auto& r : merged) ++counts[r.entity];
    CHECK(counts.size() == 3);         // Q4 appears once despite both sources
    CHECK(counts["Q4"] == 1);

    auto again = suggestSubjects(kb, idx, gen, lt, cfg);
    REQUIRE(again.size() == merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
        CHECK(again[i].entity == merged[i].entity);
        CHECK(again[i].score == merged[i].score);
    }

    // With no seeds and a dry generator there is nothing to suggest.
    LinkedTable none;
    none.table = parseCsv("nobody\n");
    none.mainColumn = {std::nullopt};
    none.columnLinks = {std::nullopt};
    CHECK(suggestSubjects(kb, idx, dry, none, cfg).empty());
}
