#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rowcomp/clients.hpp"
#include "rowcomp/embed.hpp"
#include "rowcomp/interpret.hpp"
#include "rowcomp/kb.hpp"

namespace rowcomp {

enum class CandidateSource { Embedding, Lm, Both };

std::string candidateSourceName(CandidateSource s);

struct FeatureVector {
    double distToClosestSeed = 0;     // metric-derived; max-finite sentinel without embeddings
    double extraPropertyOverlap = 0;  // [0,1]
    double minLabelLevenshtein = 0;   // [0,1]
    double minLabelEmbedDistance = 0; // [0,2]
    double typeOverlap = 0;           // [0,1]
    double seedNeighborFraction = 0;  // [0,1]
    CandidateSource source = CandidateSource::Embedding;
    std::optional<double> lmScore;    // absent exactly when source == Embedding
};

struct Candidate {
    EntityId entity;
    CandidateSource source = CandidateSource::Embedding;
    std::optional<double> lmScore;
    std::optional<FeatureVector> features;
};

struct RankedSuggestion {
    EntityId entity;
    double score;  // normalized to [0,1], higher = stronger suggestion
};

struct SuggestConfig {
    int kPerSeed = 1000;
    std::set<EntityId> highCardinalityTypes = {"human"};
    std::string detector = "knn";  // knn | lof
    double contamination = 0.05;   // [0.01, 0.06], score normalization only
    int samples = 100;
    double temperature = 0.7;
};

// Seed-neighborhood candidates: per-seed top-k union, filtered to entities
// sharing a seed type and holding in-table properties (all of them when the
// shared types are all high-cardinality).
std::vector<Candidate> generateEmbeddingCandidates(const KnowledgeBase& kb,
                                                   const EmbeddingIndex& idx,
                                                   const std::vector<EntityId>& seeds,
                                                   const std::set<PropertyId>& inTableProps,
                                                   int kPerSeed,
                                                   const std::set<EntityId>& highCardinalityTypes);

// "S has P1 V1 and has P2 V2 ..." for one row; subject label alone when no
// column is linked.
std::string toPrompt(const KnowledgeBase& kb, const LinkedTable& lt, std::size_t row);

std::vector<Candidate> generateLmCandidates(const KnowledgeBase& kb, const TextGenerator& gen,
                                            const LinkedTable& lt, int samples = 100,
                                            double temperature = 0.7);

FeatureVector extractFeatures(const KnowledgeBase& kb, const EmbeddingIndex& idx,
                              const std::vector<EntityId>& seeds,
                              const std::set<PropertyId>& inTableProps, const Candidate& c,
                              int kPerSeed);

// Outlier scores via a kNN-distance or LOF detector over the min-max scaled
// feature matrix; sorted by descending normalized score, ties by entity id.
std::vector<RankedSuggestion> rankCandidates(std::vector<Candidate> candidates,
                                             const std::string& detector,
                                             double contamination);

std::vector<RankedSuggestion> suggestSubjects(const KnowledgeBase& kb, const EmbeddingIndex& idx,
                                              const TextGenerator& gen, const LinkedTable& lt,
                                              const SuggestConfig& config = {});

// Raw detector scores over an arbitrary row-major matrix (higher = more
// outlying). Exposed for detector sanity checks.
std::vector<double> knnOutlierScores(const std::vector<std::vector<double>>& matrix, int k);
std::vector<double> lofOutlierScores(const std::vector<std::vector<double>>& matrix, int k);

}  // namespace rowcomp
