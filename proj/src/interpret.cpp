#include "rowcomp/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rowcomp/errors.hpp"
#include "rowcomp/text.hpp"
#include "rowcomp/units.hpp"

namespace rowcomp {

std::vector<EntityId> LinkedTable::seeds() const {
    std::vector<EntityId> out;
    std::set<EntityId> seen;
    for (const auto& e : mainColumn) {
        if (e && seen.insert(*e).second) out.push_back(*e);
    }
    return out;
}

std::set<PropertyId> LinkedTable::inTableProperties() const {
    std::set<PropertyId> props;
    for (const auto& p : columnLinks) {
        if (p) props.insert(*p);
    }
    return props;
}

LinkedTable linkMainColumn(const KnowledgeBase& kb, const Table& t, double fuzzyThreshold) {
    LinkedTable lt;
    lt.table = t;
    lt.columnLinks.assign(t.cols(), std::nullopt);
    lt.mainColumn.reserve(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const std::string& cell = t.at(i, 0);
        std::set<EntityId> exact = kb.resolveLabel(cell);
        if (exact.size() == 1) {
            lt.mainColumn.emplace_back(*exact.begin());
            continue;
        }
        if (exact.size() > 1) {
            lt.mainColumn.emplace_back(std::nullopt);
            continue;
        }
        // Fuzzy fallback: unique entity within the edit-distance threshold.
        std::string normCell = normalizeText(cell);
        std::set<EntityId> fuzzy;
        for (const auto& [id, rec] : kb.entities()) {
            bool hit = normalizedLevenshtein(normCell, normalizeText(rec.label)) <= fuzzyThreshold;
            for (std::size_t a = 0; !hit && a < rec.aliases.size(); ++a) {
                hit = normalizedLevenshtein(normCell, normalizeText(rec.aliases[a])) <= fuzzyThreshold;
            }
            if (hit) fuzzy.insert(id);
        }
        if (fuzzy.size() == 1) {
            lt.mainColumn.emplace_back(*fuzzy.begin());
        } else {
            lt.mainColumn.emplace_back(std::nullopt);
        }
    }
    return lt;
}

std::set<PropertyId> candidateProperties(const KnowledgeBase& kb,
                                         const std::vector<std::optional<EntityId>>& mainColumn) {
    std::set<PropertyId> props;
    for (const auto& e : mainColumn) {
        if (!e) continue;
        const auto& ps = kb.propertiesOf(*e);
        props.insert(ps.begin(), ps.end());
    }
    return props;
}

int numericExactScore(const KnowledgeBase& kb, const std::vector<std::optional<EntityId>>& L,
                      const Table& t, std::size_t i, std::size_t j, const PropertyId& p) {
    if (i >= L.size() || !L[i]) return 0;
    auto cell = parseNumericCell(t.at(i, j));
    if (!cell) return 0;
    auto obj = kb.propertyLookup(*L[i], p);
    if (!obj || obj->kind != ValueKind::Number) return 0;
    return convEqual(cell->value, cell->unit, obj->number, obj->unit) ? 1 : 0;
}

namespace detail {

namespace {

double quantileLinear(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0;
    double h = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = static_cast<std::size_t>(std::ceil(h));
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct IsoNode {
    double split = 0;
    int left = -1, right = -1;  // leaf when left < 0
    std::size_t size = 0;
};

// Average unsuccessful-search path length in a BST of n nodes.
double avgPathLength(std::size_t n) {
    if (n <= 1) return 0;
    double nd = static_cast<double>(n);
    return 2.0 * (std::log(nd - 1.0) + 0.5772156649015329) - 2.0 * (nd - 1.0) / nd;
}

int buildIsoTree(std::vector<IsoNode>& nodes, std::vector<double>& values, std::size_t begin,
                 std::size_t end, int depth, int maxDepth, std::mt19937_64& rng) {
    int id = static_cast<int>(nodes.size());
    nodes.push_back({});
    nodes[id].size = end - begin;
    double lo = *std::min_element(values.begin() + begin, values.begin() + end);
    double hi = *std::max_element(values.begin() + begin, values.begin() + end);
    if (end - begin <= 1 || depth >= maxDepth || lo == hi) return id;
    std::uniform_real_distribution<double> dist(lo, hi);
    double split = dist(rng);
    auto mid = std::partition(values.begin() + begin, values.begin() + end,
                              [split](double v) { return v < split; });
    std::size_t m = static_cast<std::size_t>(mid - values.begin());
    if (m == begin || m == end) return id;  // degenerate split, treat as leaf
    nodes[id].split = split;
    int left = buildIsoTree(nodes, values, begin, m, depth + 1, maxDepth, rng);
    nodes[id].left = left;
    int right = buildIsoTree(nodes, values, m, end, depth + 1, maxDepth, rng);
    nodes[id].right = right;
    return id;
}

double isoPathLength(const std::vector<IsoNode>& nodes, int root, double v) {
    double depth = 0;
    int cur = root;
    while (nodes[cur].left >= 0) {
        cur = v < nodes[cur].split ? nodes[cur].left : nodes[cur].right;
        depth += 1.0;
    }
    return depth + avgPathLength(nodes[cur].size);
}

}  // namespace

std::vector<double> removeOutliersIqr(std::vector<double> values) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    double q1 = quantileLinear(sorted, 0.25);
    double q3 = quantileLinear(sorted, 0.75);
    double iqr = q3 - q1;
    double lo = q1 - 1.5 * iqr;
    double hi = q3 + 1.5 * iqr;
    std::vector<double> kept;
    for (double v : values) {
        if (v >= lo && v <= hi) kept.push_back(v);
    }
    return kept;
}

std::vector<double> removeOutliersIsolationForest(std::vector<double> values,
                                                  std::uint64_t seed, double contamination,
                                                  int trees, std::size_t maxSubsample) {
    const std::size_t n = values.size();
    if (n < 3) return values;
    std::mt19937_64 rng(seed);
    std::size_t sub = std::min(maxSubsample, n);
    int maxDepth = static_cast<int>(std::ceil(std::log2(static_cast<double>(sub))));
    std::vector<double> pathSums(n, 0.0);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (int t = 0; t < trees; ++t) {
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> sample(sub);
        for (std::size_t i = 0; i < sub; ++i) sample[i] = values[perm[i]];
        std::vector<IsoNode> nodes;
        int root = buildIsoTree(nodes, sample, 0, sub, 0, maxDepth, rng);
        for (std::size_t i = 0; i < n; ++i) {
            pathSums[i] += isoPathLength(nodes, root, values[i]);
        }
    }

    double c = avgPathLength(sub);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        double avg = pathSums[i] / static_cast<double>(trees);
        scores[i] = std::pow(2.0, -avg / std::max(c, 1e-12));
    }
    std::vector<double> sortedScores = scores;
    std::sort(sortedScores.begin(), sortedScores.end());
    double cutoff = quantileLinear(sortedScores, 1.0 - contamination);
    std::vector<double> kept;
    for (std::size_t i = 0; i < n; ++i) {
        if (scores[i] <= cutoff) kept.push_back(values[i]);
    }
    if (kept.empty()) return values;
    return kept;
}

}  // namespace detail

std::optional<CharacteristicRange> characteristicRange(const KnowledgeBase& kb,
                                                       const PropertyId& p, const EntityId& type,
                                                       OutlierRemover remover,
                                                       std::uint64_t seed) {
    std::vector<double> values;
    for (const EntityId& e : kb.entitiesOfType(type)) {
        auto obj = kb.propertyLookup(e, p);
        if (!obj || obj->kind != ValueKind::Number) continue;
        auto base = toBaseUnit(obj->number, obj->unit);
        if (base) values.push_back(*base);
    }
    if (values.size() < 3) return std::nullopt;
    std::vector<double> kept = remover == OutlierRemover::IqrFence
                                   ? detail::removeOutliersIqr(std::move(values))
                                   : detail::removeOutliersIsolationForest(std::move(values), seed);
    auto [lo, hi] = std::minmax_element(kept.begin(), kept.end());
    return CharacteristicRange{p, type, *lo, *hi};
}

int numericApproxScore(const KnowledgeBase& kb, const std::vector<std::optional<EntityId>>& L,
                       const Table& t, std::size_t i, std::size_t j, const PropertyId& p,
                       OutlierRemover remover, std::uint64_t seed) {
    if (i >= L.size() || !L[i]) return 0;
    auto cell = parseNumericCell(t.at(i, j));
    if (!cell) return 0;
    auto base = toBaseUnit(cell->value, cell->unit);
    if (!base) return 0;
    for (const EntityId& type : kb.typesOf(*L[i])) {
        auto range = characteristicRange(kb, p, type, remover, seed);
        if (range && *base >= range->low && *base <= range->high) return 1;
    }
    return 0;
}

int stringExactScore(const KnowledgeBase& kb, const std::vector<std::optional<EntityId>>& L,
                     const Table& t, std::size_t i, std::size_t j, const PropertyId& p) {
    if (i >= L.size() || !L[i]) return 0;
    auto obj = kb.propertyLookup(*L[i], p);
    if (!obj) return 0;
    std::string kbText = normalizeText(kb.renderValue(*obj));
    std::string cellText = normalizeText(t.at(i, j));
    return normalizedLevenshtein(kbText, cellText) <= 0.2 ? 1 : 0;
}

double missingPropertyScore(const KnowledgeBase& kb, const EmbeddingIndex& idx,
                            const EntityId& e, const PropertyId& p, int nNeighbors) {
    if (!idx.contains(e)) throw UnknownIdError(e);
    const std::set<EntityId>& myTypes = kb.typesOf(e);
    std::vector<EntityId> pool;
    for (const auto& [id, vec] : idx.vectors()) {
        if (id == e || !kb.hasEntity(id)) continue;
        const auto& ts = kb.typesOf(id);
        bool shares = std::any_of(ts.begin(), ts.end(),
                                  [&](const EntityId& t) { return myTypes.count(t) != 0; });
        if (shares) pool.push_back(id);
    }
    auto neighbors = idx.nearestByEuclidean(e, static_cast<std::size_t>(nNeighbors), pool);
    if (neighbors.empty()) return 0.0;
    double maxDist = 0;
    for (const auto& [id, d] : neighbors) maxDist = std::max(maxDist, d);
    if (maxDist <= 0) return 0.0;
    double sum = 0;
    for (const auto& [id, d] : neighbors) {
        double sim = 1.0 - d / maxDist;
        bool has = kb.propertyLookup(id, p).has_value();
        sum += sim * (has ? 1.0 : -1.0);
    }
    double mean = sum / static_cast<double>(neighbors.size());
    return std::clamp(mean, 0.0, 1.0);
}

double stringApproxScore(const KnowledgeBase& kb, const EmbeddingIndex& idx,
                         const std::vector<std::optional<EntityId>>& L, const Table& t,
                         std::size_t i, std::size_t j, const PropertyId& p, int nNeighbors) {
    (void)t;
    (void)j;
    if (i >= L.size() || !L[i]) return 0.0;
    if (kb.propertyLookup(*L[i], p)) return 0.0;  // exact path owns this case
    if (!idx.contains(*L[i])) return 0.0;
    return missingPropertyScore(kb, idx, *L[i], p, nNeighbors);
}

bool columnIsNumeric(const Table& t, std::size_t j) {
    std::size_t nonEmpty = 0, numeric = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        if (trim(t.at(i, j)).empty()) continue;
        ++nonEmpty;
        if (parseNumericCell(t.at(i, j))) ++numeric;
    }
    if (nonEmpty == 0) return false;
    return 2 * numeric >= nonEmpty;
}

ColumnLinkResult linkColumn(const KnowledgeBase& kb, const EmbeddingIndex& idx, const Table& t,
                            const std::vector<std::optional<EntityId>>& L, std::size_t j,
                            double threshold, const InterpretOptions& opts) {
    ColumnLinkResult result;
    result.numericColumn = columnIsNumeric(t, j);

    std::set<PropertyId> candidates = candidateProperties(kb, L);
    if (candidates.empty()) {
        result.failure = LinkFailure::NoCandidates;
        return result;
    }

    auto exactScore = [&](std::size_t i, const PropertyId& p) {
        return result.numericColumn ? numericExactScore(kb, L, t, i, j, p)
                                    : stringExactScore(kb, L, t, i, j, p);
    };
    auto approxScore = [&](std::size_t i, const PropertyId& p) -> double {
        return result.numericColumn
                   ? numericApproxScore(kb, L, t, i, j, p, opts.remover, opts.seed)
                   : stringApproxScore(kb, idx, L, t, i, j, p, opts.nNeighbors);
    };

    std::map<PropertyId, double> scores;
    for (const PropertyId& p : candidates) {
        double sum = 0;
        for (std::size_t i = 0; i < t.rows(); ++i) sum += exactScore(i, p);
        scores[p] = sum;
    }
    double maxExact = 0;
    for (const auto& [p, s] : scores) maxExact = std::max(maxExact, s);
    std::vector<PropertyId> argmax;
    for (const auto& [p, s] : scores) {
        if (s == maxExact) argmax.push_back(p);
    }
    if (argmax.size() == 1 && maxExact >= threshold) {
        result.property = argmax.front();
        return result;
    }

    // Approximate adjustment, applied only where the exact score was 0 and
    // only to the exact argmax set.
    std::map<PropertyId, double> approxScores;
    for (const PropertyId& p : argmax) {
        double adj = 0;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (exactScore(i, p) == 0) adj += approxScore(i, p);
        }
        approxScores[p] = scores[p] + adj;
    }
    double maxApprox = 0;
    bool first = true;
    for (const auto& [p, s] : approxScores) {
        if (first || s > maxApprox) maxApprox = s;
        first = false;
    }
    std::vector<PropertyId> argmaxApprox;
    for (const auto& [p, s] : approxScores) {
        if (s == maxApprox) argmaxApprox.push_back(p);
    }
    if (argmaxApprox.size() == 1 && maxApprox >= threshold) {
        result.property = argmaxApprox.front();
        return result;
    }
    result.failure =
        argmaxApprox.size() > 1 ? LinkFailure::Tie : LinkFailure::BelowThreshold;
    return result;
}

LinkedTable linkTable(const KnowledgeBase& kb, const EmbeddingIndex& idx, const Table& t,
                      const InterpretOptions& opts) {
    LinkedTable lt = linkMainColumn(kb, t, opts.fuzzyThreshold);
    std::size_t linkedRows = 0;
    for (const auto& e : lt.mainColumn) {
        if (e) ++linkedRows;
    }
    double threshold = opts.linkThreshold
                           ? *opts.linkThreshold
                           : std::ceil(0.5 * static_cast<double>(linkedRows));
    if (linkedRows == 0) return lt;  // nothing to score against
    for (std::size_t j = 1; j < t.cols(); ++j) {
        ColumnLinkResult r = linkColumn(kb, idx, t, lt.mainColumn, j, threshold, opts);
        lt.columnLinks[j] = r.property;
    }
    return lt;
}

}  // namespace rowcomp
