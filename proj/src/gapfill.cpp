#include "rowcomp/gapfill.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rowcomp/errors.hpp"
#include "rowcomp/text.hpp"
#include "rowcomp/units.hpp"

namespace rowcomp {

SeedContext contextOfSeeds(const SearchClient& search, const KnowledgeBase& kb,
                           const LinkedTable& lt, std::size_t j,
                           const std::optional<PropertyId>& p, const GapFillConfig& config) {
    SeedContext context;
    std::vector<std::string> pooled;
    for (std::size_t i = 0; i < lt.table.rows(); ++i) {
        if (!lt.mainColumn[i]) continue;
        std::string cell = trim(lt.table.at(i, j));
        if (cell.empty()) continue;
        std::vector<std::string> keywords = {kb.entityLabel(*lt.mainColumn[i]), cell};
        if (p) keywords.push_back(kb.propertyLabel(*p));
        for (const SearchSnippet& s : search.search(keywords, config.restrict)) {
            pooled.push_back(s.description);
        }
    }
    if (pooled.empty()) return context;

    std::vector<std::vector<double>> vecs;
    vecs.reserve(pooled.size());
    for (const std::string& s : pooled) vecs.push_back(encodeSentence(s));

    for (std::size_t a = 0; a < pooled.size(); ++a) {
        double agg;
        if (pooled.size() == 1) {
            agg = 1.0;  // a lone sentence is its own context
        } else if (config.contextMaxPooling) {
            agg = -1.0;
            for (std::size_t b = 0; b < pooled.size(); ++b) {
                if (b != a) agg = std::max(agg, cosineSimilarity(vecs[a], vecs[b]));
            }
        } else {
            double sum = 0;
            for (std::size_t b = 0; b < pooled.size(); ++b) {
                if (b != a) sum += cosineSimilarity(vecs[a], vecs[b]);
            }
            agg = sum / static_cast<double>(pooled.size() - 1);
        }
        if (agg >= config.simThreshold) {
            context.sentences.push_back(pooled[a]);
            context.vectors.push_back(vecs[a]);
        }
    }
    return context;
}

std::string buildFillPrompt(const KnowledgeBase& kb, const LinkedTable& lt, std::size_t j,
                            const std::optional<PropertyId>& p, const EntityId& subject) {
    const std::string subjectLabel = kb.entityLabel(subject);
    if (p) {
        const std::string propLabel = kb.propertyLabel(*p);
        std::string prompt;
        for (std::size_t i = 0; i < lt.table.rows(); ++i) {
            if (!lt.mainColumn[i]) continue;
            std::string cell = trim(lt.table.at(i, j));
            if (cell.empty()) continue;
            prompt += kb.entityLabel(*lt.mainColumn[i]) + " has " + propLabel + " " + cell + "\n";
        }
        if (prompt.empty()) throw UnknownIdError("no linked seed rows for column " + std::to_string(j));
        prompt += subjectLabel + " has " + propLabel;
        return prompt;
    }
    // Analogy chain for an unlinked column.
    std::string prompt;
    bool any = false;
    for (std::size_t i = 0; i < lt.table.rows(); ++i) {
        if (!lt.mainColumn[i]) continue;
        std::string cell = trim(lt.table.at(i, j));
        if (cell.empty()) continue;
        if (any) prompt += " as ";
        prompt += kb.entityLabel(*lt.mainColumn[i]) + " is to " + cell;
        any = true;
    }
    if (!any) throw UnknownIdError("no linked seed rows for column " + std::to_string(j));
    prompt += " as " + subjectLabel + " is to";
    return prompt;
}

namespace {

// Completion text up to the first sentence terminator or newline; the open
// stub is stripped when the backend echoes it.
std::string extractValue(const std::string& generation, const std::string& openStub) {
    std::string text = generation;
    if (!openStub.empty() && text.rfind(openStub, 0) == 0) {
        text = text.substr(openStub.size());
    }
    std::size_t cut = text.find_first_of(".!?\n");
    if (cut != std::string::npos) text = text.substr(0, cut);
    return trim(text);
}

}  // namespace

std::vector<GapFill> rankValues(const EntityId& subject, std::size_t j, const LinkedTable& lt,
                                const std::optional<PropertyId>& p, const KnowledgeBase& kb,
                                const TextGenerator& gen, const SearchClient& search,
                                const GapFillConfig& config) {
    SeedContext context = contextOfSeeds(search, kb, lt, j, p, config);

    std::string prompt = buildFillPrompt(kb, lt, j, p, subject);
    std::string openStub;
    auto lastNewline = prompt.rfind('\n');
    openStub = lastNewline == std::string::npos ? prompt : prompt.substr(lastNewline + 1);

    GenerationRequest req;
    req.prompt = prompt;
    req.samples = config.samples;
    req.temperature = config.temperature;

    std::vector<std::string> values;
    std::set<std::string> seen;
    for (const Generation& g : gen.generate(req)) {
        std::string value = extractValue(g.text, openStub);
        if (value.empty()) continue;
        if (seen.insert(value).second) values.push_back(value);
    }

    // value -> best-scored grounding snippet
    std::map<std::string, std::pair<SearchSnippet, double>> grounded;
    for (const std::string& value : values) {
        std::vector<std::string> keywords = {kb.entityLabel(subject)};
        if (p) keywords.push_back(kb.propertyLabel(*p));
        keywords.push_back(value);
        SearchSnippet best;
        double bestScore = -2.0;
        for (const SearchSnippet& s : search.search(keywords, config.restrict)) {
            std::vector<double> enc = encodeSentence(s.description);
            double score = -2.0;
            for (const auto& ctx : context.vectors) {
                score = std::max(score, cosineSimilarity(enc, ctx));
            }
            if (score > bestScore) {
                bestScore = score;
                best = s;
            }
        }
        if (bestScore > config.fillThreshold) {
            grounded.emplace(value, std::make_pair(best, bestScore));
        }
    }

    std::vector<GapFill> out;
    for (const auto& [value, hit] : grounded) {
        GapFill fill;
        fill.value = value;
        fill.provenance.kind = Provenance::Kind::WebSnippet;
        fill.provenance.snippet = hit.first;
        fill.provenance.similarity = hit.second;
        fill.numericWarning = parseNumericCell(value).has_value();
        out.push_back(std::move(fill));
    }
    std::sort(out.begin(), out.end(), [](const GapFill& a, const GapFill& b) {
        if (a.provenance.similarity != b.provenance.similarity) {
            return a.provenance.similarity > b.provenance.similarity;
        }
        return a.value < b.value;
    });
    return out;
}

std::vector<GapFill> fillCell(const EntityId& subject, std::size_t j, const LinkedTable& lt,
                              const KnowledgeBase& kb, const TextGenerator& gen,
                              const SearchClient& search, const GapFillConfig& config) {
    const std::optional<PropertyId>& p = lt.columnLinks[j];
    if (p) {
        auto obj = kb.propertyLookup(subject, *p);
        if (obj) {
            GapFill fill;
            fill.value = kb.renderValue(*obj);
            fill.provenance.kind = Provenance::Kind::KbTriple;
            fill.provenance.triple = {subject, *p, *obj};
            return {std::move(fill)};
        }
    }
    return rankValues(subject, j, lt, p, kb, gen, search, config);
}

std::vector<GapFill> gapFill(std::size_t i, std::size_t j, const LinkedTable& lt,
                             const KnowledgeBase& kb, const TextGenerator& gen,
                             const SearchClient& search, const GapFillConfig& config) {
    if (i >= lt.mainColumn.size() || !lt.mainColumn[i]) {
        throw UnknownIdError("unlinked subject in row " + std::to_string(i));
    }
    return fillCell(*lt.mainColumn[i], j, lt, kb, gen, search, config);
}

std::vector<std::pair<std::size_t, std::vector<GapFill>>> completeRow(
    const EntityId& subject, const LinkedTable& lt, const KnowledgeBase& kb,
    const TextGenerator& gen, const SearchClient& search, const GapFillConfig& config) {
    std::vector<std::pair<std::size_t, std::vector<GapFill>>> out;
    for (std::size_t j = 1; j < lt.table.cols(); ++j) {
        out.emplace_back(j, fillCell(subject, j, lt, kb, gen, search, config));
    }
    return out;
}

}  // namespace rowcomp
