#include <doctest.h>

#include "helpers.hpp"
#include "rowcomp/clients.hpp"
#include "rowcomp/errors.hpp"
#include "rowcomp/text.hpp"

using namespace rowcomp;
using helpers::TempFile;

TEST_CASE("GenerationRequest defaults: 100 samples at temperature 0.7") {
    GenerationRequest req;
    CHECK(req.samples == 100);
    CHECK(req.temperature == doctest::Approx(0.7));
    CHECK(req.valid());
    req.samples = 0;
    CHECK_FALSE(req.valid());
}

TEST_CASE("MockGenerator replays its fixture in order") {
    MockGenerator empty;
    GenerationRequest req;
    req.prompt = "anything";
    CHECK(empty.generate(req).empty());
    CHECK(empty.callCount() == 1);

    TempFile f(R"({"P": ["one", {"text": "two", "score": 0.5}, "three"]})", ".json");
    MockGenerator gen(f.str());
    req.prompt = "P";
    auto out = gen.generate(req);
    REQUIRE(out.size() == 3);
    CHECK(out[0].text == "one");
    CHECK(out[1].text == "two");
    CHECK(out[1].score == 0.5);
    CHECK_FALSE(out[2].score.has_value());

    req.samples = 2;  // the sample budget truncates the fixture
    CHECK(gen.generate(req).size() == 2);
}

TEST_CASE("MockSearchClient keys by sorted keywords and truncates to 10") {
    CHECK(MockSearchClient::keyFor({"b", "a"}) == "a || b");

    std::string fixture = R"({"a || b": [)";
    for (int i = 0; i < 12; ++i) {
        if (i) fixture += ",";
        fixture += R"({"url": "u)" + std::to_string(i) + R"(", "description": "d)" +
                   std::to_string(i) + R"(", "source": ")" +
                   (i % 2 ? "news" : "wikipedia") + R"("})";
    }
    fixture += "]}";
    TempFile f(fixture, ".json");
    MockSearchClient search(f.str());

    CHECK(search.search({"unknown"}, SourceFilter::Any).empty());
    auto any = search.search({"b", "a"}, SourceFilter::Any);
    CHECK(any.size() == kMaxSnippets);
    CHECK(any[0].url == "u0");

    auto wiki = search.search({"a", "b"}, SourceFilter::Wikipedia);
    CHECK(wiki.size() == 6);
    for (const auto& s : wiki) CHECK(s.source == SnippetSource::Wikipedia);
    auto news = search.search({"a", "b"}, SourceFilter::News);
    CHECK(news.size() == 6);
    CHECK(search.callCount() == 4);
}

TEST_CASE("makeGenerator / makeSearchClient parse the config string") {
    CHECK(makeGenerator("mock:") != nullptr);
    CHECK(makeSearchClient("mock:") != nullptr);
    CHECK_THROWS_AS(makeGenerator("carrier-pigeon"), ParseError);
    CHECK_THROWS_AS(makeSearchClient("carrier-pigeon"), ParseError);
}

TEST_CASE("encodeSentence is deterministic, unit-length, and orthogonal on disjoint tokens") {
    auto v1 = encodeSentence("Kendrick Lamar raps");
    CHECK(v1 == encodeSentence("Kendrick Lamar raps"));
    CHECK(v1.size() == kSentenceEmbeddingDim);
    CHECK(cosineSimilarity(v1, v1) == doctest::Approx(1.0));

    // Verify the two token sets land in disjoint buckets (collision-free),
    // then orthogonality follows.
    auto a = encodeSentence("alpha beta");
    auto b = encodeSentence("gamma delta");
    bool collision = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0 && b[i] != 0) collision = true;
    }
    REQUIRE_FALSE(collision);
    CHECK(cosineSimilarity(a, b) == doctest::Approx(0.0));
}

TEST_CASE("snippet source names round-trip") {
    for (SnippetSource s : {SnippetSource::Wikipedia, SnippetSource::News, SnippetSource::Other}) {
        CHECK(parseSnippetSource(snippetSourceName(s)) == s);
    }
    CHECK(parseSnippetSource("whatever") == SnippetSource::Other);
}
