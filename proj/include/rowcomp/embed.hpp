#pragma once

#include <map>
#include <string>
#include <vector>

#include "rowcomp/kb.hpp"

namespace rowcomp {

enum class Metric { Cosine, DotProduct };

struct Neighbor {
    EntityId entity;
    double similarity;  // higher = closer under the index metric
};

// Dense entity-embedding index. Exact k-NN by linear scan; immutable after
// construction, safe for concurrent reads.
class EmbeddingIndex {
public:
    EmbeddingIndex() = default;
    EmbeddingIndex(std::size_t dim, Metric metric) : dim_(dim), metric_(metric) {}

    void add(EntityId id, std::vector<double> vec);

    std::size_t dim() const { return dim_; }
    Metric metric() const { return metric_; }
    std::size_t size() const { return vectors_.size(); }
    bool contains(const EntityId& e) const { return vectors_.count(e) != 0; }

    const std::vector<double>& vectorOf(const EntityId& e) const;

    // Similarity under the index metric.
    double similarity(const EntityId& a, const EntityId& b) const;

    double euclidean(const EntityId& a, const EntityId& b) const;

    // Top-k by descending similarity, query excluded, ties by ascending id.
    std::vector<Neighbor> nearestNeighbors(const EntityId& e, std::size_t k) const;

    // Top-k by ascending Euclidean distance over a caller-supplied candidate
    // pool (used by the missing-property estimator).
    std::vector<std::pair<EntityId, double>> nearestByEuclidean(
        const EntityId& e, std::size_t k, const std::vector<EntityId>& pool) const;

    const std::map<EntityId, std::vector<double>>& vectors() const { return vectors_; }

private:
    std::size_t dim_ = 0;
    Metric metric_ = Metric::Cosine;
    std::map<EntityId, std::vector<double>> vectors_;
};

// Text format: first line "dim metric" (metric: cosine | dot); then one line
// per entity: "entity_id v1 ... vdim".
EmbeddingIndex loadEmbeddings(const std::string& path);
EmbeddingIndex loadEmbeddings(const std::string& path, Metric metricOverride);

// edit-distance(a,b) / max(|a|,|b|); 0 when both empty.
double normalizedLevenshtein(const std::string& a, const std::string& b);

inline constexpr std::size_t kLabelEmbeddingDim = 128;

// Hashed character n-gram (n = 3..5) embedding, L2-normalized; deterministic
// stand-in for pretrained subword vectors.
std::vector<double> labelEmbedding(const std::string& text);

}  // namespace rowcomp
