#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rowcomp {

struct GenerationRequest {
    std::string prompt;
    int samples = 100;         // API call budget per prompt
    double temperature = 0.7;  // diversity over stability
    int maxSentences = 1;

    bool valid() const {
        return samples >= 1 && temperature >= 0 && temperature <= 2 && maxSentences >= 1;
    }
};

struct Generation {
    std::string text;
    std::optional<double> score;  // model confidence when the backend supplies one
};

enum class SnippetSource { Wikipedia, News, Other };

struct SearchSnippet {
    std::string url;
    std::string description;  // result name + snippet, concatenated
    SnippetSource source = SnippetSource::Other;
};

enum class SourceFilter { Any, Wikipedia, News };

inline constexpr std::size_t kMaxSnippets = 10;

class TextGenerator {
public:
    virtual ~TextGenerator() = default;
    virtual std::vector<Generation> generate(const GenerationRequest& req) const = 0;
};

class SearchClient {
public:
    virtual ~SearchClient() = default;
    // At most kMaxSnippets results; engine rank preserved in list order.
    virtual std::vector<SearchSnippet> search(const std::vector<std::string>& keywords,
                                              SourceFilter restrict) const = 0;
};

// Fixture-backed generator keyed by exact prompt. Missing key -> empty list.
class MockGenerator : public TextGenerator {
public:
    MockGenerator() = default;
    explicit MockGenerator(const std::string& fixturePath);
    explicit MockGenerator(std::map<std::string, std::vector<Generation>> fixtures)
        : fixtures_(std::move(fixtures)) {}

    std::vector<Generation> generate(const GenerationRequest& req) const override;

    std::size_t callCount() const { return calls_; }

private:
    std::map<std::string, std::vector<Generation>> fixtures_;
    mutable std::size_t calls_ = 0;
};

// Fixture-backed search keyed by the sorted keyword multiset.
class MockSearchClient : public SearchClient {
public:
    MockSearchClient() = default;
    explicit MockSearchClient(const std::string& fixturePath);
    explicit MockSearchClient(std::map<std::string, std::vector<SearchSnippet>> fixtures)
        : fixtures_(std::move(fixtures)) {}

    std::vector<SearchSnippet> search(const std::vector<std::string>& keywords,
                                      SourceFilter restrict) const override;

    static std::string keyFor(std::vector<std::string> keywords);

    std::size_t callCount() const { return calls_; }

private:
    std::map<std::string, std::vector<SearchSnippet>> fixtures_;
    mutable std::size_t calls_ = 0;
};

// HTTP-backed implementations. Endpoint and key come from
// ROWCOMP_LM_ENDPOINT / ROWCOMP_LM_API_KEY and ROWCOMP_SEARCH_ENDPOINT /
// ROWCOMP_SEARCH_API_KEY. 3 attempts with exponential backoff.
class HttpGenerator : public TextGenerator {
public:
    HttpGenerator();
    std::vector<Generation> generate(const GenerationRequest& req) const override;

private:
    std::string endpoint_;
    std::string apiKey_;
};

class HttpSearchClient : public SearchClient {
public:
    HttpSearchClient();
    std::vector<SearchSnippet> search(const std::vector<std::string>& keywords,
                                      SourceFilter restrict) const override;

private:
    std::string endpoint_;
    std::string apiKey_;
};

// Config string: "mock:<path>" or "http".
std::unique_ptr<TextGenerator> makeGenerator(const std::string& config);
std::unique_ptr<SearchClient> makeSearchClient(const std::string& config);

inline constexpr std::size_t kSentenceEmbeddingDim = 256;

// Token-level TF-weighted hashing encoder, L2-normalized; deterministic
// stand-in for a transformer sentence encoder.
std::vector<double> encodeSentence(const std::string& text);

SnippetSource parseSnippetSource(const std::string& s);
std::string snippetSourceName(SnippetSource s);

}  // namespace rowcomp
