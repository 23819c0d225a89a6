#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rowcomp/errors.hpp"
#include "rowcomp/pipeline.hpp"

namespace {

struct CommonFlags {
    std::string configPath;
    std::string kb;
    std::string embeddings;
    std::string generator;
    std::string search;
    int seedRows = -1;
    std::string detector;
    double contamination = -1;
    double fillThreshold = -1;
    double simThreshold = -1;
    int kPerSeed = -1;
    int suggestions = -1;
    int samples = -1;
    long long seed = -1;
    std::string remover;
};

void addCommonFlags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.configPath, "JSON config file");
    cmd->add_option("--kb", f.kb, "KB TSV path");
    cmd->add_option("--embeddings", f.embeddings, "embedding text file");
    cmd->add_option("--generator", f.generator, "mock:<path> or http");
    cmd->add_option("--search", f.search, "mock:<path> or http");
    cmd->add_option("--clients", [&f](const std::vector<std::string>& vals) {
        // shorthand: one config for both clients
        f.generator = vals.back();
        f.search = vals.back();
        return true;
    }, "client config applied to both generator and search");
    cmd->add_option("--seed-rows", f.seedRows, "seed rows taken from the top of the table");
    cmd->add_option("--detector", f.detector, "knn | lof");
    cmd->add_option("--contamination", f.contamination, "detector contamination in [0.01,0.06]");
    cmd->add_option("--fill-threshold", f.fillThreshold, "minimum snippet similarity for a fill");
    cmd->add_option("--sim-threshold", f.simThreshold, "context retention threshold");
    cmd->add_option("--k-per-seed", f.kPerSeed, "embedding neighbors per seed");
    cmd->add_option("--suggestions", f.suggestions, "suggestions requested");
    cmd->add_option("--samples", f.samples, "generator samples per prompt");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--outlier-remover", f.remover, "iforest | iqr");
}

rowcomp::PipelineConfig buildConfig(const CommonFlags& f) {
    rowcomp::PipelineConfig cfg;
    if (!f.configPath.empty()) cfg = rowcomp::loadPipelineConfig(f.configPath);
    if (!f.kb.empty()) cfg.kbPath = f.kb;
    if (!f.embeddings.empty()) cfg.embeddingsPath = f.embeddings;
    if (!f.generator.empty()) cfg.generatorConfig = f.generator;
    if (!f.search.empty()) cfg.searchConfig = f.search;
    if (f.seedRows >= 0) cfg.seedRows = f.seedRows;
    if (!f.detector.empty()) cfg.detector = f.detector;
    if (f.contamination >= 0) cfg.contamination = f.contamination;
    if (f.fillThreshold >= 0) cfg.fillThreshold = f.fillThreshold;
    if (f.simThreshold >= 0) cfg.simThreshold = f.simThreshold;
    if (f.kPerSeed >= 0) cfg.kPerSeed = f.kPerSeed;
    if (f.suggestions >= 0) cfg.suggestionsRequested = f.suggestions;
    if (f.samples >= 0) cfg.samples = f.samples;
    if (f.seed >= 0) cfg.randomSeed = static_cast<std::uint64_t>(f.seed);
    if (!f.remover.empty()) cfg.outlierRemover = f.remover;
    return cfg;
}

int runGuarded(const std::function<void()>& fn) {
    try {
        fn();
        return 0;
    } catch (const rowcomp::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rowcomp - knowledge-base row completion"};
    app.require_subcommand(1);

    CommonFlags linkFlags, completeFlags, evalFlags;
    std::string linkTable, completeTable, evalDir, ingestIn, ingestOut;
    bool stability = false;

    CLI::App* link = app.add_subcommand("link", "link a table to the knowledge base");
    link->add_option("table", linkTable, "input CSV")->required();
    addCommonFlags(link, linkFlags);

    CLI::App* complete = app.add_subcommand("complete", "suggest subjects and fill rows");
    complete->add_option("table", completeTable, "input CSV")->required();
    addCommonFlags(complete, completeFlags);

    CLI::App* evaluate = app.add_subcommand("evaluate", "run the benchmark harness");
    evaluate->add_option("dir", evalDir, "directory of (table.csv, table.truth.json) pairs")
        ->required();
    evaluate->add_flag("--stability", stability, "average over seed-row combinations");
    addCommonFlags(evaluate, evalFlags);

    CLI::App* ingest = app.add_subcommand("ingest", "convert a JSON-lines dump to KB TSV");
    ingest->add_option("input", ingestIn, "JSON-lines triple export")->required();
    ingest->add_option("output", ingestOut, "output KB TSV")->required();

    CLI11_PARSE(app, argc, argv);

    auto timed = [](const char* stage, const std::function<nlohmann::json()>& fn) {
        auto start = std::chrono::steady_clock::now();
        nlohmann::json out = fn();
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::cerr << stage << " finished in " << ms << " ms\n";
        std::cout << out.dump(2) << "\n";
        return out;
    };

    if (link->parsed()) {
        return runGuarded([&] {
            timed("link", [&] { return rowcomp::runLink(linkTable, buildConfig(linkFlags)); });
        });
    }
    if (complete->parsed()) {
        return runGuarded([&] {
            timed("complete",
                  [&] { return rowcomp::runComplete(completeTable, buildConfig(completeFlags)); });
        });
    }
    if (evaluate->parsed()) {
        return runGuarded([&] {
            timed("evaluate", [&] {
                return rowcomp::runEvaluate(evalDir, buildConfig(evalFlags), stability);
            });
        });
    }
    if (ingest->parsed()) {
        return runGuarded([&] {
            rowcomp::runIngest(ingestIn, ingestOut);
            std::cerr << "wrote " << ingestOut << "\n";
        });
    }
    return 1;
}
