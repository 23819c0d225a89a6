#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rowcomp/embed.hpp"
#include "rowcomp/kb.hpp"
#include "rowcomp/table.hpp"

namespace rowcomp {

struct LinkedTable {
    Table table;
    // One entry per row; nullopt = unlinkable cell.
    std::vector<std::optional<EntityId>> mainColumn;
    // One entry per column; [0] is always nullopt (main column).
    std::vector<std::optional<PropertyId>> columnLinks;

    std::vector<EntityId> seeds() const;  // linked main-column entities, deduped, row order
    std::set<PropertyId> inTableProperties() const;
};

struct CharacteristicRange {
    PropertyId property;
    EntityId type;
    double low;
    double high;
};

enum class OutlierRemover { IsolationForest, IqrFence };

struct InterpretOptions {
    double fuzzyThreshold = 0.2;          // normalized edit distance for label matching
    std::optional<double> linkThreshold;  // default: ceil(0.5 * linked rows)
    int nNeighbors = 10;                  // missing-property estimator
    OutlierRemover remover = OutlierRemover::IsolationForest;
    std::uint64_t seed = 0;
};

// Main-column entity linking: unique exact label/alias match, else unique
// fuzzy match within fuzzyThreshold, else unlinked.
LinkedTable linkMainColumn(const KnowledgeBase& kb, const Table& t,
                           double fuzzyThreshold = 0.2);

// Properties held by at least one linked entity.
std::set<PropertyId> candidateProperties(const KnowledgeBase& kb,
                                         const std::vector<std::optional<EntityId>>& mainColumn);

// 1 iff the cell equals the KB value after unit conversion (1e-9 relative).
int numericExactScore(const KnowledgeBase& kb, const std::vector<std::optional<EntityId>>& L,
                      const Table& t, std::size_t i, std::size_t j, const PropertyId& p);

// [min,max] of the type's numeric property values after outlier removal;
// nullopt with fewer than 3 values.
std::optional<CharacteristicRange> characteristicRange(
    const KnowledgeBase& kb, const PropertyId& p, const EntityId& type,
    OutlierRemover remover = OutlierRemover::IsolationForest, std::uint64_t seed = 0);

int numericApproxScore(const KnowledgeBase& kb, const std::vector<std::optional<EntityId>>& L,
                       const Table& t, std::size_t i, std::size_t j, const PropertyId& p,
                       OutlierRemover remover = OutlierRemover::IsolationForest,
                       std::uint64_t seed = 0);

// 1 iff the rendered KB value fuzzy-matches the cell (normalized edit
// distance <= 0.2 after case/whitespace normalization).
int stringExactScore(const KnowledgeBase& kb, const std::vector<std::optional<EntityId>>& L,
                     const Table& t, std::size_t i, std::size_t j, const PropertyId& p);

// Likelihood in [0,1] that e is missing p only by omission, from the
// Euclidean neighborhood of e restricted to type-sharing entities.
double missingPropertyScore(const KnowledgeBase& kb, const EmbeddingIndex& idx,
                            const EntityId& e, const PropertyId& p, int nNeighbors);

double stringApproxScore(const KnowledgeBase& kb, const EmbeddingIndex& idx,
                         const std::vector<std::optional<EntityId>>& L, const Table& t,
                         std::size_t i, std::size_t j, const PropertyId& p, int nNeighbors);

enum class LinkFailure { NoCandidates, Tie, BelowThreshold };

struct ColumnLinkResult {
    std::optional<PropertyId> property;
    std::optional<LinkFailure> failure;  // set iff property is nullopt
    bool numericColumn = false;
};

// Exact-score sum, then approximate adjustment over the argmax set, each
// gated by a unique maximum at or above threshold.
ColumnLinkResult linkColumn(const KnowledgeBase& kb, const EmbeddingIndex& idx, const Table& t,
                            const std::vector<std::optional<EntityId>>& L, std::size_t j,
                            double threshold, const InterpretOptions& opts = {});

LinkedTable linkTable(const KnowledgeBase& kb, const EmbeddingIndex& idx, const Table& t,
                      const InterpretOptions& opts = {});

// True when at least half the non-empty cells of column j parse as numbers.
bool columnIsNumeric(const Table& t, std::size_t j);

namespace detail {
// Survivor values after outlier removal; exposed for tests.
std::vector<double> removeOutliersIqr(std::vector<double> values);
std::vector<double> removeOutliersIsolationForest(std::vector<double> values,
                                                  std::uint64_t seed,
                                                  double contamination = 0.05,
                                                  int trees = 100,
                                                  std::size_t maxSubsample = 256);
}  // namespace detail

}  // namespace rowcomp
