#include "rowcomp/suggest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rowcomp/errors.hpp"
#include "rowcomp/text.hpp"

namespace rowcomp {

std::string candidateSourceName(CandidateSource s) {
    switch (s) {
        case CandidateSource::Embedding: return "embedding";
        case CandidateSource::Lm: return "lm";
        case CandidateSource::Both: return "both";
    }
    return "embedding";
}

std::vector<Candidate> generateEmbeddingCandidates(const KnowledgeBase& kb,
                                                   const EmbeddingIndex& idx,
                                                   const std::vector<EntityId>& seeds,
                                                   const std::set<PropertyId>& inTableProps,
                                                   int kPerSeed,
                                                   const std::set<EntityId>& highCardinalityTypes) {
    std::set<EntityId> seedSet(seeds.begin(), seeds.end());
    std::set<EntityId> seedTypes;
    for (const EntityId& s : seeds) {
        if (!kb.hasEntity(s)) continue;
        const auto& ts = kb.typesOf(s);
        seedTypes.insert(ts.begin(), ts.end());
    }

    std::set<EntityId> pool;
    for (const EntityId& s : seeds) {
        if (!idx.contains(s)) continue;
        for (const Neighbor& n : idx.nearestNeighbors(s, static_cast<std::size_t>(kPerSeed))) {
            pool.insert(n.entity);
        }
    }

    std::vector<Candidate> out;
    for (const EntityId& c : pool) {
        if (seedSet.count(c) || !kb.hasEntity(c)) continue;
        std::set<EntityId> shared;
        for (const EntityId& t : kb.typesOf(c)) {
            if (seedTypes.count(t)) shared.insert(t);
        }
        if (shared.empty()) continue;
        bool allHighCardinality = std::all_of(shared.begin(), shared.end(), [&](const EntityId& t) {
            return highCardinalityTypes.count(t) != 0;
        });
        const auto& props = kb.propertiesOf(c);
        bool propsOk;
        if (allHighCardinality) {
            propsOk = std::all_of(inTableProps.begin(), inTableProps.end(),
                                  [&](const PropertyId& p) { return props.count(p) != 0; });
        } else {
            propsOk = inTableProps.empty() ||
                      std::any_of(inTableProps.begin(), inTableProps.end(),
                                  [&](const PropertyId& p) { return props.count(p) != 0; });
        }
        if (!propsOk) continue;
        out.push_back({c, CandidateSource::Embedding, std::nullopt, std::nullopt});
    }
    return out;
}

std::string toPrompt(const KnowledgeBase& kb, const LinkedTable& lt, std::size_t row) {
    if (row >= lt.mainColumn.size() || !lt.mainColumn[row]) {
        throw UnknownIdError("unlinked main cell in row " + std::to_string(row));
    }
    std::string prompt = kb.entityLabel(*lt.mainColumn[row]);
    bool firstClause = true;
    for (std::size_t j = 1; j < lt.columnLinks.size(); ++j) {
        if (!lt.columnLinks[j]) continue;
        prompt += firstClause ? " has " : " and has ";
        firstClause = false;
        prompt += kb.propertyLabel(*lt.columnLinks[j]);
        prompt += " ";
        prompt += lt.table.at(row, j);
    }
    return prompt;
}

std::vector<Candidate> generateLmCandidates(const KnowledgeBase& kb, const TextGenerator& gen,
                                            const LinkedTable& lt, int samples,
                                            double temperature) {
    std::string prompt;
    bool any = false;
    for (std::size_t i = 0; i < lt.mainColumn.size(); ++i) {
        if (!lt.mainColumn[i]) continue;
        if (any) prompt += "\n";
        prompt += toPrompt(kb, lt, i);
        any = true;
    }
    if (!any) return {};

    GenerationRequest req;
    req.prompt = prompt;
    req.samples = samples;
    req.temperature = temperature;

    std::set<EntityId> seedSet;
    for (const auto& e : lt.mainColumn) {
        if (e) seedSet.insert(*e);
    }

    // entity -> best generation score seen
    std::map<EntityId, std::optional<double>> found;
    for (const Generation& g : gen.generate(req)) {
        for (const std::string& line : splitString(g.text, '\n')) {
            std::string subject = line;
            auto pos = line.find(" has ");
            if (pos != std::string::npos) subject = line.substr(0, pos);
            subject = trim(subject);
            if (subject.empty()) continue;
            std::set<EntityId> resolved = kb.resolveLabel(subject);
            if (resolved.size() != 1) continue;  // unlinkable or ambiguous
            const EntityId& e = *resolved.begin();
            if (seedSet.count(e)) continue;
            auto it = found.find(e);
            if (it == found.end()) {
                found[e] = g.score;
            } else if (g.score && (!it->second || *g.score > *it->second)) {
                it->second = g.score;
            }
        }
    }

    std::vector<Candidate> out;
    for (const auto& [e, score] : found) {
        out.push_back({e, CandidateSource::Lm, score, std::nullopt});
    }
    return out;
}

FeatureVector extractFeatures(const KnowledgeBase& kb, const EmbeddingIndex& idx,
                              const std::vector<EntityId>& seeds,
                              const std::set<PropertyId>& inTableProps, const Candidate& c,
                              int kPerSeed) {
    FeatureVector f;
    f.source = c.source;
    f.lmScore = c.lmScore;

    const double kMissingDistance = std::numeric_limits<double>::max();

    // f1: metric-derived distance to the closest seed.
    f.distToClosestSeed = kMissingDistance;
    if (idx.contains(c.entity)) {
        for (const EntityId& s : seeds) {
            if (!idx.contains(s)) continue;
            double sim = idx.similarity(c.entity, s);
            double dist = idx.metric() == Metric::Cosine ? 1.0 - sim : -sim;
            f.distToClosestSeed = std::min(f.distToClosestSeed, dist);
        }
    }

    // f2: overlap of out-of-table properties with the seeds' pool.
    std::set<PropertyId> seedProps;
    for (const EntityId& s : seeds) {
        const auto& ps = kb.propertiesOf(s);
        seedProps.insert(ps.begin(), ps.end());
    }
    std::set<PropertyId> seedExtra;
    for (const PropertyId& p : seedProps) {
        if (!inTableProps.count(p)) seedExtra.insert(p);
    }
    std::size_t overlap = 0;
    for (const PropertyId& p : kb.propertiesOf(c.entity)) {
        if (!inTableProps.count(p) && seedExtra.count(p)) ++overlap;
    }
    f.extraPropertyOverlap =
        static_cast<double>(overlap) / std::max<std::size_t>(1, seedExtra.size());

    // f3 / f4: label similarity to the closest seed.
    const std::string& cLabel = kb.entityLabel(c.entity);
    std::vector<double> cEmb = labelEmbedding(cLabel);
    f.minLabelLevenshtein = 1.0;
    f.minLabelEmbedDistance = 2.0;
    for (const EntityId& s : seeds) {
        const std::string& sLabel = kb.entityLabel(s);
        f.minLabelLevenshtein = std::min(
            f.minLabelLevenshtein,
            normalizedLevenshtein(normalizeText(cLabel), normalizeText(sLabel)));
        f.minLabelEmbedDistance = std::min(
            f.minLabelEmbedDistance, 1.0 - cosineSimilarity(cEmb, labelEmbedding(sLabel)));
    }

    // f5: shared types over the seeds' type pool.
    std::set<EntityId> seedTypes;
    for (const EntityId& s : seeds) {
        const auto& ts = kb.typesOf(s);
        seedTypes.insert(ts.begin(), ts.end());
    }
    std::size_t sharedTypes = 0;
    for (const EntityId& t : kb.typesOf(c.entity)) {
        if (seedTypes.count(t)) ++sharedTypes;
    }
    f.typeOverlap = static_cast<double>(sharedTypes) / std::max<std::size_t>(1, seedTypes.size());

    // f6: fraction of seeds with the candidate in their neighbor list.
    std::size_t hits = 0;
    if (idx.contains(c.entity)) {
        for (const EntityId& s : seeds) {
            if (!idx.contains(s)) continue;
            auto neighbors = idx.nearestNeighbors(s, static_cast<std::size_t>(kPerSeed));
            if (std::any_of(neighbors.begin(), neighbors.end(),
                            [&](const Neighbor& n) { return n.entity == c.entity; })) {
                ++hits;
            }
        }
    }
    f.seedNeighborFraction =
        static_cast<double>(hits) / std::max<std::size_t>(1, seeds.size());

    return f;
}

namespace {

std::vector<std::vector<double>> pairwiseDistances(const std::vector<std::vector<double>>& m) {
    std::size_t n = m.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            d[i][j] = d[j][i] = euclideanDistance(m[i], m[j]);
        }
    }
    return d;
}

// Ascending distances from point i to all others.
std::vector<double> sortedRow(const std::vector<std::vector<double>>& d, std::size_t i) {
    std::vector<double> row;
    row.reserve(d.size() - 1);
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (j != i) row.push_back(d[i][j]);
    }
    std::sort(row.begin(), row.end());
    return row;
}

}  // namespace

std::vector<double> knnOutlierScores(const std::vector<std::vector<double>>& matrix, int k) {
    std::size_t n = matrix.size();
    if (n <= 1) return std::vector<double>(n, 0.0);
    std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, k)), n - 1);
    auto d = pairwiseDistances(matrix);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = sortedRow(d, i)[kk - 1];  // distance to the k-th neighbor
    }
    return scores;
}

std::vector<double> lofOutlierScores(const std::vector<std::vector<double>>& matrix, int k) {
    std::size_t n = matrix.size();
    if (n <= 1) return std::vector<double>(n, 0.0);
    std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, k)), n - 1);
    auto d = pairwiseDistances(matrix);

    std::vector<std::vector<std::size_t>> knn(n);
    std::vector<double> kDist(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> order;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) order.push_back(j);
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (d[i][a] != d[i][b]) return d[i][a] < d[i][b];
            return a < b;
        });
        kDist[i] = d[i][order[kk - 1]];
        // k-distance neighborhood includes ties at the k-distance.
        for (std::size_t j : order) {
            if (d[i][j] <= kDist[i]) {
                knn[i].push_back(j);
            } else {
                break;
            }
        }
    }

    std::vector<double> lrd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double reachSum = 0;
        for (std::size_t j : knn[i]) reachSum += std::max(kDist[j], d[i][j]);
        double avgReach = reachSum / static_cast<double>(knn[i].size());
        lrd[i] = avgReach > 0 ? 1.0 / avgReach : std::numeric_limits<double>::infinity();
    }

    std::vector<double> lof(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0;
        bool anyInf = false;
        for (std::size_t j : knn[i]) {
            if (std::isinf(lrd[j]) && std::isinf(lrd[i])) {
                sum += 1.0;
            } else if (std::isinf(lrd[j])) {
                anyInf = true;
            } else {
                sum += lrd[j] / lrd[i];
            }
        }
        lof[i] = anyInf ? std::numeric_limits<double>::max()
                        : sum / static_cast<double>(knn[i].size());
        if (std::isinf(lrd[i]) && !anyInf) lof[i] = sum / static_cast<double>(knn[i].size());
    }
    return lof;
}

namespace {

std::vector<std::vector<double>> buildFeatureMatrix(const std::vector<Candidate>& candidates) {
    std::vector<std::vector<double>> m;
    m.reserve(candidates.size());
    for (const Candidate& c : candidates) {
        const FeatureVector& f = *c.features;
        std::vector<double> row = {
            f.distToClosestSeed,
            f.extraPropertyOverlap,
            f.minLabelLevenshtein,
            f.minLabelEmbedDistance,
            f.typeOverlap,
            f.seedNeighborFraction,
            f.source == CandidateSource::Embedding ? 1.0 : 0.0,
            f.source == CandidateSource::Lm ? 1.0 : 0.0,
            f.source == CandidateSource::Both ? 1.0 : 0.0,
            f.lmScore.value_or(0.0),
            f.lmScore ? 1.0 : 0.0,
        };
        m.push_back(std::move(row));
    }
    // Min-max scale per column; constant columns collapse to 0.
    if (m.empty()) return m;
    std::size_t cols = m.front().size();
    for (std::size_t j = 0; j < cols; ++j) {
        double lo = m[0][j], hi = m[0][j];
        for (const auto& row : m) {
            lo = std::min(lo, row[j]);
            hi = std::max(hi, row[j]);
        }
        double span = hi - lo;
        for (auto& row : m) row[j] = span > 0 ? (row[j] - lo) / span : 0.0;
    }
    return m;
}

// Piecewise-linear map to [0,1]: the (1 - contamination) raw-score quantile
// lands at 0.5, the extremes at 0 and 1.
std::vector<double> normalizeScores(const std::vector<double>& raw, double contamination) {
    std::size_t n = raw.size();
    std::vector<double> out(n, 1.0);
    if (n == 0) return out;
    double lo = *std::min_element(raw.begin(), raw.end());
    double hi = *std::max_element(raw.begin(), raw.end());
    if (hi <= lo) return out;  // degenerate: every candidate equally outlying
    std::vector<double> sorted = raw;
    std::sort(sorted.begin(), sorted.end());
    double h = (1.0 - contamination) * static_cast<double>(n - 1);
    std::size_t i0 = static_cast<std::size_t>(std::floor(h));
    std::size_t i1 = static_cast<std::size_t>(std::ceil(h));
    double t = sorted[i0] + (h - static_cast<double>(i0)) * (sorted[i1] - sorted[i0]);
    for (std::size_t i = 0; i < n; ++i) {
        double x = raw[i];
        if (t <= lo) {
            out[i] = 0.5 + 0.5 * (x - lo) / (hi - lo);
        } else if (t >= hi) {
            out[i] = 0.5 * (x - lo) / (hi - lo);
        } else if (x <= t) {
            out[i] = 0.5 * (x - lo) / (t - lo);
        } else {
            out[i] = 0.5 + 0.5 * (x - t) / (hi - t);
        }
    }
    return out;
}

}  // namespace

std::vector<RankedSuggestion> rankCandidates(std::vector<Candidate> candidates,
                                             const std::string& detector,
                                             double contamination) {
    if (candidates.empty()) throw std::invalid_argument("no candidates to rank");
    for (const Candidate& c : candidates) {
        if (!c.features) throw std::invalid_argument("candidate without features: " + c.entity);
    }
    // Canonical order first so ranking is independent of input permutation.
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.entity < b.entity; });

    auto matrix = buildFeatureMatrix(candidates);
    int k = std::max(5, static_cast<int>(std::ceil(0.03 * static_cast<double>(matrix.size()))));
    std::vector<double> raw;
    if (detector == "lof") {
        raw = lofOutlierScores(matrix, k);
    } else if (detector == "knn") {
        raw = knnOutlierScores(matrix, k);
    } else {
        throw std::invalid_argument("unknown detector: " + detector);
    }
    std::vector<double> norm = normalizeScores(raw, contamination);

    std::vector<RankedSuggestion> out;
    out.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out.push_back({candidates[i].entity, norm[i]});
    }
    std::sort(out.begin(), out.end(), [](const RankedSuggestion& a, const RankedSuggestion& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.entity < b.entity;
    });
    return out;
}

std::vector<RankedSuggestion> suggestSubjects(const KnowledgeBase& kb, const EmbeddingIndex& idx,
                                              const TextGenerator& gen, const LinkedTable& lt,
                                              const SuggestConfig& config) {
    std::vector<EntityId> seeds = lt.seeds();
    std::set<PropertyId> inTableProps = lt.inTableProperties();

    std::vector<Candidate> embedding = generateEmbeddingCandidates(
        kb, idx, seeds, inTableProps, config.kPerSeed, config.highCardinalityTypes);
    std::vector<Candidate> lm =
        generateLmCandidates(kb, gen, lt, config.samples, config.temperature);

    std::map<EntityId, Candidate> merged;
    for (Candidate& c : embedding) merged.emplace(c.entity, std::move(c));
    for (Candidate& c : lm) {
        auto [it, inserted] = merged.emplace(c.entity, c);
        if (!inserted) {
            it->second.source = CandidateSource::Both;
            it->second.lmScore = c.lmScore;
        }
    }
    if (merged.empty()) return {};

    std::vector<Candidate> all;
    all.reserve(merged.size());
    for (auto& [id, c] : merged) {
        c.features = extractFeatures(kb, idx, seeds, inTableProps, c, config.kPerSeed);
        all.push_back(std::move(c));
    }
    return rankCandidates(std::move(all), config.detector, config.contamination);
}

}  // namespace rowcomp
