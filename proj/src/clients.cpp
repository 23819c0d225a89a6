#include "rowcomp/clients.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "rowcomp/errors.hpp"
#include "rowcomp/text.hpp"

namespace rowcomp {

namespace {

nlohmann::json loadJsonFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bad JSON in ") + path + ": " + e.what());
    }
}

const char* envOr(const char* name, const char* fallback) {
    const char* v = std::getenv(name);
    return v ? v : fallback;
}

}  // namespace

SnippetSource parseSnippetSource(const std::string& s) {
    if (s == "wikipedia") return SnippetSource::Wikipedia;
    if (s == "news") return SnippetSource::News;
    return SnippetSource::Other;
}

std::string snippetSourceName(SnippetSource s) {
    switch (s) {
        case SnippetSource::Wikipedia: return "wikipedia";
        case SnippetSource::News: return "news";
        case SnippetSource::Other: return "other";
    }
    return "other";
}

MockGenerator::MockGenerator(const std::string& fixturePath) {
    if (fixturePath.empty()) return;  // "mock:" with no path = empty fixture set
    nlohmann::json j = loadJsonFile(fixturePath);
    for (const auto& [prompt, gens] : j.items()) {
        std::vector<Generation> list;
        for (const auto& g : gens) {
            if (g.is_string()) {
                list.push_back({g.get<std::string>(), std::nullopt});
            } else {
                Generation gen;
                gen.text = g.at("text").get<std::string>();
                if (g.contains("score") && !g["score"].is_null()) {
                    gen.score = g["score"].get<double>();
                }
                list.push_back(std::move(gen));
            }
        }
        fixtures_[prompt] = std::move(list);
    }
}

std::vector<Generation> MockGenerator::generate(const GenerationRequest& req) const {
    ++calls_;
    auto it = fixtures_.find(req.prompt);
    if (it == fixtures_.end()) return {};
    std::vector<Generation> out = it->second;
    if (out.size() > static_cast<std::size_t>(req.samples)) out.resize(req.samples);
    return out;
}

std::string MockSearchClient::keyFor(std::vector<std::string> keywords) {
    std::sort(keywords.begin(), keywords.end());
    std::string key;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        if (i) key += " || ";
        key += keywords[i];
    }
    return key;
}

MockSearchClient::MockSearchClient(const std::string& fixturePath) {
    if (fixturePath.empty()) return;
    nlohmann::json j = loadJsonFile(fixturePath);
    for (const auto& [key, entries] : j.items()) {
        std::vector<SearchSnippet> list;
        for (const auto& e : entries) {
            SearchSnippet s;
            s.url = e.value("url", "");
            s.description = e.at("description").get<std::string>();
            s.source = parseSnippetSource(e.value("source", "other"));
            list.push_back(std::move(s));
        }
        fixtures_[key] = std::move(list);
    }
}

std::vector<SearchSnippet> MockSearchClient::search(const std::vector<std::string>& keywords,
                                                    SourceFilter restrict) const {
    ++calls_;
    auto it = fixtures_.find(keyFor(keywords));
    if (it == fixtures_.end()) return {};
    std::vector<SearchSnippet> out;
    for (const SearchSnippet& s : it->second) {
        if (restrict == SourceFilter::Wikipedia && s.source != SnippetSource::Wikipedia) continue;
        if (restrict == SourceFilter::News && s.source != SnippetSource::News) continue;
        out.push_back(s);
        if (out.size() == kMaxSnippets) break;
    }
    return out;
}

HttpGenerator::HttpGenerator()
    : endpoint_(envOr("ROWCOMP_LM_ENDPOINT", "")), apiKey_(envOr("ROWCOMP_LM_API_KEY", "")) {
    if (endpoint_.empty()) throw ClientError("ROWCOMP_LM_ENDPOINT not set", false);
}

HttpSearchClient::HttpSearchClient()
    : endpoint_(envOr("ROWCOMP_SEARCH_ENDPOINT", "")),
      apiKey_(envOr("ROWCOMP_SEARCH_API_KEY", "")) {
    if (endpoint_.empty()) throw ClientError("ROWCOMP_SEARCH_ENDPOINT not set", false);
}

std::unique_ptr<TextGenerator> makeGenerator(const std::string& config) {
    if (config.rfind("mock:", 0) == 0) {
        return std::make_unique<MockGenerator>(config.substr(5));
    }
    if (config == "http") return std::make_unique<HttpGenerator>();
    throw ParseError("bad generator config: " + config);
}

std::unique_ptr<SearchClient> makeSearchClient(const std::string& config) {
    if (config.rfind("mock:", 0) == 0) {
        return std::make_unique<MockSearchClient>(config.substr(5));
    }
    if (config == "http") return std::make_unique<HttpSearchClient>();
    throw ParseError("bad search config: " + config);
}

std::vector<double> encodeSentence(const std::string& text) {
    std::vector<double> vec(kSentenceEmbeddingDim, 0.0);
    for (const std::string& token : tokenize(text)) {
        vec[fnv1a64(token) % kSentenceEmbeddingDim] += 1.0;
    }
    double norm2 = 0;
    for (double v : vec) norm2 += v * v;
    if (norm2 > 0) {
        double inv = 1.0 / std::sqrt(norm2);
        for (double& v : vec) v *= inv;
    }
    return vec;
}

}  // namespace rowcomp
