// Thin HTTP clients; selected only via config, never exercised by tests.

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "rowcomp/clients.hpp"
#include "rowcomp/errors.hpp"

namespace rowcomp {

namespace {

// 3 attempts, exponential backoff. Requests here are idempotent.
nlohmann::json postJsonWithRetry(const std::string& endpoint, const std::string& apiKey,
                                 const nlohmann::json& body) {
    std::string host = endpoint;
    std::string path = "/";
    auto schemeEnd = host.find("://");
    if (schemeEnd != std::string::npos) host = host.substr(schemeEnd + 3);
    auto slash = host.find('/');
    if (slash != std::string::npos) {
        path = host.substr(slash);
        host = host.substr(0, slash);
    }

    std::string lastError;
    for (int attempt = 0; attempt < 3; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(250 << attempt));
        }
        httplib::Client cli(host);
        httplib::Headers headers;
        if (!apiKey.empty()) headers.emplace("Authorization", "Bearer " + apiKey);
        auto res = cli.Post(path, headers, body.dump(), "application/json");
        if (!res) {
            lastError = "transport error";
            continue;
        }
        if (res->status == 401 || res->status == 403) {
            throw ClientError("authentication failed (" + std::to_string(res->status) + ")",
                              false);
        }
        if (res->status >= 500) {
            lastError = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw ClientError("unexpected status " + std::to_string(res->status), false);
        }
        return nlohmann::json::parse(res->body);
    }
    throw ClientError(lastError.empty() ? "request failed" : lastError, true);
}

}  // namespace

std::vector<Generation> HttpGenerator::generate(const GenerationRequest& req) const {
    nlohmann::json body = {
        {"prompt", req.prompt},
        {"n", req.samples},
        {"temperature", req.temperature},
        {"max_sentences", req.maxSentences},
    };
    nlohmann::json resp = postJsonWithRetry(endpoint_, apiKey_, body);
    std::vector<Generation> out;
    for (const auto& g : resp.value("generations", nlohmann::json::array())) {
        Generation gen;
        gen.text = g.value("text", "");
        if (gen.text.empty()) continue;
        if (g.contains("score") && !g["score"].is_null()) gen.score = g["score"].get<double>();
        out.push_back(std::move(gen));
    }
    return out;
}

std::vector<SearchSnippet> HttpSearchClient::search(const std::vector<std::string>& keywords,
                                                    SourceFilter restrict) const {
    nlohmann::json body = {
        {"keywords", keywords},
        {"restrict", restrict == SourceFilter::Wikipedia ? "wikipedia"
                     : restrict == SourceFilter::News    ? "news"
                                                         : "any"},
        {"count", kMaxSnippets},
    };
    nlohmann::json resp = postJsonWithRetry(endpoint_, apiKey_, body);
    std::vector<SearchSnippet> out;
    for (const auto& r : resp.value("results", nlohmann::json::array())) {
        SearchSnippet s;
        s.url = r.value("url", "");
        // Description is the result name plus its snippet text.
        s.description = r.value("name", "");
        std::string snippet = r.value("snippet", "");
        if (!snippet.empty()) {
            if (!s.description.empty()) s.description += " ";
            s.description += snippet;
        }
        if (s.description.empty()) continue;
        s.source = parseSnippetSource(r.value("source", "other"));
        out.push_back(std::move(s));
        if (out.size() == kMaxSnippets) break;
    }
    return out;
}

}  // namespace rowcomp
