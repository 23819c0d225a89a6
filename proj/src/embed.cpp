#include "rowcomp/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rowcomp/errors.hpp"
#include "rowcomp/text.hpp"

namespace rowcomp {

void EmbeddingIndex::add(EntityId id, std::vector<double> vec) {
    if (vec.size() != dim_) throw ParseError("dimension mismatch for " + id);
    for (double v : vec) {
        if (!std::isfinite(v)) throw ParseError("non-finite component for " + id);
    }
    vectors_[std::move(id)] = std::move(vec);
}

const std::vector<double>& EmbeddingIndex::vectorOf(const EntityId& e) const {
    auto it = vectors_.find(e);
    if (it == vectors_.end()) throw UnknownIdError(e);
    return it->second;
}

double EmbeddingIndex::similarity(const EntityId& a, const EntityId& b) const {
    const auto& va = vectorOf(a);
    const auto& vb = vectorOf(b);
    if (metric_ == Metric::Cosine) return cosineSimilarity(va, vb);
    double dot = 0;
    for (std::size_t i = 0; i < dim_; ++i) dot += va[i] * vb[i];
    return dot;
}

double EmbeddingIndex::euclidean(const EntityId& a, const EntityId& b) const {
    return euclideanDistance(vectorOf(a), vectorOf(b));
}

std::vector<Neighbor> EmbeddingIndex::nearestNeighbors(const EntityId& e,
                                                       std::size_t k) const {
    vectorOf(e);  // validate presence
    std::vector<Neighbor> all;
    all.reserve(vectors_.size());
    for (const auto& [id, vec] : vectors_) {
        if (id == e) continue;
        all.push_back({id, similarity(e, id)});
    }
    std::sort(all.begin(), all.end(), [](const Neighbor& x, const Neighbor& y) {
        if (x.similarity != y.similarity) return x.similarity > y.similarity;
        return x.entity < y.entity;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

std::vector<std::pair<EntityId, double>> EmbeddingIndex::nearestByEuclidean(
    const EntityId& e, std::size_t k, const std::vector<EntityId>& pool) const {
    const auto& ve = vectorOf(e);
    std::vector<std::pair<EntityId, double>> all;
    for (const EntityId& id : pool) {
        if (id == e) continue;
        auto it = vectors_.find(id);
        if (it == vectors_.end()) continue;
        all.emplace_back(id, euclideanDistance(ve, it->second));
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second < y.second;
        return x.first < y.first;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

namespace {

EmbeddingIndex loadEmbeddingsImpl(const std::string& path, const Metric* metricOverride) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    std::size_t lineNo = 0;
    if (!std::getline(in, line)) {
        // Empty file: empty index.
        return EmbeddingIndex(0, metricOverride ? *metricOverride : Metric::Cosine);
    }
    ++lineNo;
    std::istringstream header(line);
    std::size_t dim = 0;
    std::string metricName;
    if (!(header >> dim >> metricName)) throw ParseError("bad header", lineNo);
    Metric metric;
    if (metricName == "cosine") {
        metric = Metric::Cosine;
    } else if (metricName == "dot" || metricName == "dot-product") {
        metric = Metric::DotProduct;
    } else {
        throw ParseError("unknown metric: " + metricName, lineNo);
    }
    if (metricOverride) metric = *metricOverride;

    EmbeddingIndex idx(dim, metric);
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string id;
        if (!(ss >> id)) throw ParseError("missing entity id", lineNo);
        std::vector<double> vec;
        vec.reserve(dim);
        double v;
        while (ss >> v) vec.push_back(v);
        if (!ss.eof()) throw ParseError("bad vector component for " + id, lineNo);
        if (vec.size() != dim) {
            throw ParseError("dimension mismatch for " + id + ": got " +
                                 std::to_string(vec.size()) + ", expected " +
                                 std::to_string(dim),
                             lineNo);
        }
        try {
            idx.add(id, std::move(vec));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineNo);
        }
    }
    return idx;
}

}  // namespace

EmbeddingIndex loadEmbeddings(const std::string& path) {
    return loadEmbeddingsImpl(path, nullptr);
}

EmbeddingIndex loadEmbeddings(const std::string& path, Metric metricOverride) {
    return loadEmbeddingsImpl(path, &metricOverride);
}

double normalizedLevenshtein(const std::string& a, const std::string& b) {
    if (a.empty() && b.empty()) return 0.0;
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return static_cast<double>(prev[m]) / static_cast<double>(std::max(n, m));
}

std::vector<double> labelEmbedding(const std::string& text) {
    std::vector<double> vec(kLabelEmbeddingDim, 0.0);
    std::string norm = normalizeText(text);
    for (std::size_t n = 3; n <= 5; ++n) {
        if (norm.size() < n) break;
        for (std::size_t i = 0; i + n <= norm.size(); ++i) {
            std::uint64_t h = fnv1a64(std::string_view(norm).substr(i, n));
            vec[h % kLabelEmbeddingDim] += 1.0;
        }
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
