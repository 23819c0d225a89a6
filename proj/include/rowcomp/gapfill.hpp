#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rowcomp/clients.hpp"
#include "rowcomp/interpret.hpp"
#include "rowcomp/kb.hpp"

namespace rowcomp {

struct Provenance {
    enum class Kind { KbTriple, WebSnippet };
    Kind kind = Kind::KbTriple;
    Triple triple;          // KbTriple
    SearchSnippet snippet;  // WebSnippet
    double similarity = 0;  // WebSnippet, in [-1, 1]
};

struct GapFill {
    std::string value;
    Provenance provenance;
    bool numericWarning = false;  // numeric LM fills are unreliable
};

struct SeedContext {
    std::vector<std::string> sentences;
    std::vector<std::vector<double>> vectors;  // same length as sentences
};

struct GapFillConfig {
    int samples = 100;
    double temperature = 0.7;
    double fillThreshold = 0.05;   // minimum best-snippet similarity for a fill
    double simThreshold = 0.5;     // context-sentence retention threshold
    bool contextMaxPooling = false;  // pool by max pairwise instead of mean
    SourceFilter restrict = SourceFilter::Any;
};

// Pool search snippets over the seed rows of column j and keep the sentences
// most similar to the rest of the pool.
SeedContext contextOfSeeds(const SearchClient& search, const KnowledgeBase& kb,
                           const LinkedTable& lt, std::size_t j,
                           const std::optional<PropertyId>& p, const GapFillConfig& config);

// Linked property: "S1 has P V1\n...\nS has P" left open.
// No property: "S1 is to V1 as S2 is to V2 as ... as S is to".
std::string buildFillPrompt(const KnowledgeBase& kb, const LinkedTable& lt, std::size_t j,
                            const std::optional<PropertyId>& p, const EntityId& subject);

// LM sampling + snippet-grounded verification; every returned fill carries
// a snippet whose score beat the threshold.
std::vector<GapFill> rankValues(const EntityId& subject, std::size_t j, const LinkedTable& lt,
                                const std::optional<PropertyId>& p, const KnowledgeBase& kb,
                                const TextGenerator& gen, const SearchClient& search,
                                const GapFillConfig& config);

// KB-triple short-circuit, else rankValues. `subject` need not be a table
// row (suggested entities fill virtual rows).
std::vector<GapFill> fillCell(const EntityId& subject, std::size_t j, const LinkedTable& lt,
                              const KnowledgeBase& kb, const TextGenerator& gen,
                              const SearchClient& search, const GapFillConfig& config);

// fillCell for an existing table row; throws on an unlinked subject.
std::vector<GapFill> gapFill(std::size_t i, std::size_t j, const LinkedTable& lt,
                             const KnowledgeBase& kb, const TextGenerator& gen,
                             const SearchClient& search, const GapFillConfig& config);

// All non-main columns of a virtual row for a suggested subject.
std::vector<std::pair<std::size_t, std::vector<GapFill>>> completeRow(
    const EntityId& subject, const LinkedTable& lt, const KnowledgeBase& kb,
    const TextGenerator& gen, const SearchClient& search, const GapFillConfig& config);

}  // namespace rowcomp
