#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "rowcomp/gapfill.hpp"
#include "rowcomp/interpret.hpp"
#include "rowcomp/suggest.hpp"

namespace rowcomp {

struct PipelineConfig {
    std::string kbPath;
    std::string embeddingsPath;
    std::string generatorConfig = "mock:";  // "mock:<path>" or "http"
    std::string searchConfig = "mock:";
    std::optional<double> linkThreshold;    // default: ceil(0.5 * linked rows)
    int kPerSeed = 1000;
    std::string detector = "knn";
    double contamination = 0.05;
    double fillThreshold = 0.05;
    double simThreshold = 0.5;
    int seedRows = 3;
    int suggestionsRequested = 10;
    std::uint64_t randomSeed = 0;
    int samples = 100;
    double temperature = 0.7;
    int nNeighbors = 10;
    std::set<EntityId> highCardinalityTypes = {"human"};
    std::string outlierRemover = "iforest";  // iforest | iqr
    SourceFilter searchRestrict = SourceFilter::Any;

    InterpretOptions interpretOptions() const;
    SuggestConfig suggestConfig() const;
    GapFillConfig gapFillConfig() const;
};

// JSON config file; flags override afterwards.
PipelineConfig loadPipelineConfig(const std::string& path);
void applyConfigJson(PipelineConfig& cfg, const nlohmann::json& j);

// Loaded, immutable pipeline inputs.
struct PipelineContext {
    KnowledgeBase kb;
    EmbeddingIndex index;
    std::unique_ptr<TextGenerator> generator;
    std::unique_ptr<SearchClient> search;

    static PipelineContext open(const PipelineConfig& cfg);
};

nlohmann::json linkedTableJson(const LinkedTable& lt);

// link: table -> linked-table JSON.
nlohmann::json runLink(const std::string& tablePath, const PipelineConfig& cfg);

// complete: link seeds -> suggest -> fill, truncated to suggestionsRequested.
nlohmann::json runComplete(const std::string& tablePath, const PipelineConfig& cfg);

// evaluate: directory of (table.csv, table.truth.json) pairs -> metrics report.
nlohmann::json runEvaluate(const std::string& benchmarkDir, const PipelineConfig& cfg,
                           bool stability = false);

// ingest: JSON-lines triple export -> KB TSV (validated by reloading).
void runIngest(const std::string& inputPath, const std::string& outputPath);

}  // namespace rowcomp
