#include "rowcomp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "rowcomp/errors.hpp"
#include "rowcomp/metrics.hpp"
#include "rowcomp/text.hpp"

namespace rowcomp {

namespace fs = std::filesystem;

InterpretOptions PipelineConfig::interpretOptions() const {
    InterpretOptions opts;
    opts.linkThreshold = linkThreshold;
    opts.nNeighbors = nNeighbors;
    opts.remover = outlierRemover == "iqr" ? OutlierRemover::IqrFence
                                           : OutlierRemover::IsolationForest;
    opts.seed = randomSeed;
    return opts;
}

SuggestConfig PipelineConfig::suggestConfig() const {
    SuggestConfig sc;
    sc.kPerSeed = kPerSeed;
    sc.highCardinalityTypes = highCardinalityTypes;
    sc.detector = detector;
    sc.contamination = contamination;
    sc.samples = samples;
    sc.temperature = temperature;
    return sc;
}

GapFillConfig PipelineConfig::gapFillConfig() const {
    GapFillConfig gc;
    gc.samples = samples;
    gc.temperature = temperature;
    gc.fillThreshold = fillThreshold;
    gc.simThreshold = simThreshold;
    gc.restrict = searchRestrict;
    return gc;
}

void applyConfigJson(PipelineConfig& cfg, const nlohmann::json& j) {
    if (j.contains("kb")) cfg.kbPath = j["kb"].get<std::string>();
    if (j.contains("embeddings")) cfg.embeddingsPath = j["embeddings"].get<std::string>();
    if (j.contains("clients")) {
        const auto& c = j["clients"];
        if (c.contains("generator")) cfg.generatorConfig = c["generator"].get<std::string>();
        if (c.contains("search")) cfg.searchConfig = c["search"].get<std::string>();
    }
    if (j.contains("link_threshold") && !j["link_threshold"].is_null()) {
        cfg.linkThreshold = j["link_threshold"].get<double>();
    }
    if (j.contains("k_per_seed")) cfg.kPerSeed = j["k_per_seed"].get<int>();
    if (j.contains("detector")) cfg.detector = j["detector"].get<std::string>();
    if (j.contains("contamination")) cfg.contamination = j["contamination"].get<double>();
    if (j.contains("fill_threshold")) cfg.fillThreshold = j["fill_threshold"].get<double>();
    if (j.contains("sim_threshold")) cfg.simThreshold = j["sim_threshold"].get<double>();
    if (j.contains("seed_rows")) cfg.seedRows = j["seed_rows"].get<int>();
    if (j.contains("suggestions")) cfg.suggestionsRequested = j["suggestions"].get<int>();
    if (j.contains("seed")) cfg.randomSeed = j["seed"].get<std::uint64_t>();
    if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
    if (j.contains("temperature")) cfg.temperature = j["temperature"].get<double>();
    if (j.contains("n_neighbors")) cfg.nNeighbors = j["n_neighbors"].get<int>();
    if (j.contains("high_cardinality_types")) {
        cfg.highCardinalityTypes.clear();
        for (const auto& t : j["high_cardinality_types"]) {
            cfg.highCardinalityTypes.insert(t.get<std::string>());
        }
    }
    if (j.contains("outlier_remover")) cfg.outlierRemover = j["outlier_remover"].get<std::string>();
    if (j.contains("search_restrict")) {
        std::string r = j["search_restrict"].get<std::string>();
        cfg.searchRestrict = r == "wikipedia" ? SourceFilter::Wikipedia
                             : r == "news"    ? SourceFilter::News
                                              : SourceFilter::Any;
    }
}

PipelineConfig loadPipelineConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bad JSON in ") + path + ": " + e.what());
    }
    PipelineConfig cfg;
    applyConfigJson(cfg, j);
    return cfg;
}

PipelineContext PipelineContext::open(const PipelineConfig& cfg) {
    PipelineContext ctx;
    ctx.kb = loadKb(cfg.kbPath);
    ctx.index = loadEmbeddings(cfg.embeddingsPath);
    ctx.generator = makeGenerator(cfg.generatorConfig);
    ctx.search = makeSearchClient(cfg.searchConfig);
    return ctx;
}

nlohmann::json linkedTableJson(const LinkedTable& lt) {
    nlohmann::json j;
    j["rows"] = lt.table.rows();
    j["cols"] = lt.table.cols();
    nlohmann::json main = nlohmann::json::array();
    for (const auto& e : lt.mainColumn) {
        main.push_back(e ? nlohmann::json(*e) : nlohmann::json(nullptr));
    }
    j["mainColumn"] = std::move(main);
    nlohmann::json links = nlohmann::json::object();
    for (std::size_t c = 1; c < lt.columnLinks.size(); ++c) {
        links[std::to_string(c)] =
            lt.columnLinks[c] ? nlohmann::json(*lt.columnLinks[c]) : nlohmann::json(nullptr);
    }
    j["columnLinks"] = std::move(links);
    return j;
}

namespace {

nlohmann::json fillJson(std::size_t row, std::size_t column, const GapFill& fill) {
    nlohmann::json j;
    j["row"] = row;
    j["column"] = column;
    j["value"] = fill.value;
    j["numericWarning"] = fill.numericWarning;
    if (fill.provenance.kind == Provenance::Kind::KbTriple) {
        j["provenanceKind"] = "kb-triple";
        j["tripleId"] =
            fill.provenance.triple.subject + "|" + fill.provenance.triple.property;
    } else {
        j["provenanceKind"] = "web-snippet";
        j["url"] = fill.provenance.snippet.url;
        j["similarity"] = fill.provenance.similarity;
    }
    return j;
}

// Round to stabilize the textual form of derived floats in reports.
double round9(double v) { return std::round(v * 1e9) / 1e9; }

struct TableEvaluation {
    nlohmann::json report;
};

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) break;
            if (i == 0) return out;
        }
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<EntityId> suggestionEntities(const std::vector<RankedSuggestion>& ranked) {
    std::vector<EntityId> out;
    out.reserve(ranked.size());
    for (const auto& r : ranked) out.push_back(r.entity);
    return out;
}

}  // namespace

nlohmann::json runLink(const std::string& tablePath, const PipelineConfig& cfg) {
    PipelineContext ctx = PipelineContext::open(cfg);
    Table t = loadCsv(tablePath);
    LinkedTable lt = linkTable(ctx.kb, ctx.index, t, cfg.interpretOptions());
    return linkedTableJson(lt);
}

nlohmann::json runComplete(const std::string& tablePath, const PipelineConfig& cfg) {
    PipelineContext ctx = PipelineContext::open(cfg);
    Table full = loadCsv(tablePath);
    Table seedTable = full.head(static_cast<std::size_t>(cfg.seedRows));
    LinkedTable lt = linkTable(ctx.kb, ctx.index, seedTable, cfg.interpretOptions());

    nlohmann::json out;
    out["link"] = linkedTableJson(lt);

    std::vector<RankedSuggestion> ranked;
    if (cfg.suggestionsRequested > 0 && !lt.seeds().empty()) {
        ranked = suggestSubjects(ctx.kb, ctx.index, *ctx.generator, lt, cfg.suggestConfig());
        if (ranked.size() > static_cast<std::size_t>(cfg.suggestionsRequested)) {
            ranked.resize(cfg.suggestionsRequested);
        }
    }
    nlohmann::json suggestions = nlohmann::json::array();
    for (const auto& r : ranked) {
        suggestions.push_back({{"entity", r.entity},
                               {"label", ctx.kb.entityLabel(r.entity)},
                               {"score", round9(r.score)}});
    }
    out["suggestions"] = std::move(suggestions);

    nlohmann::json rows = nlohmann::json::array();
    GapFillConfig gc = cfg.gapFillConfig();
    for (std::size_t s = 0; s < ranked.size(); ++s) {
        nlohmann::json rowJson;
        rowJson["subject"] = ranked[s].entity;
        nlohmann::json fills = nlohmann::json::array();
        std::size_t virtualRow = seedTable.rows() + s;
        for (const auto& [column, cellFills] :
             completeRow(ranked[s].entity, lt, ctx.kb, *ctx.generator, *ctx.search, gc)) {
            for (const GapFill& f : cellFills) {
                nlohmann::json fj = fillJson(virtualRow, column, f);
                if (fj.contains("similarity")) fj["similarity"] = round9(f.provenance.similarity);
                fills.push_back(std::move(fj));
            }
        }
        rowJson["fills"] = std::move(fills);
        rows.push_back(std::move(rowJson));
    }
    out["rows"] = std::move(rows);
    return out;
}

nlohmann::json runEvaluate(const std::string& benchmarkDir, const PipelineConfig& cfg,
                           bool stability) {
    PipelineContext ctx = PipelineContext::open(cfg);

    std::vector<fs::path> tablePaths;
    for (const auto& entry : fs::directory_iterator(benchmarkDir)) {
        if (entry.path().extension() == ".csv") tablePaths.push_back(entry.path());
    }
    std::sort(tablePaths.begin(), tablePaths.end());

    nlohmann::json tables = nlohmann::json::object();
    nlohmann::json skipped = nlohmann::json::array();
    std::vector<double> recalls50, recalls1000, maps, p1s, r1s, p3s;

    for (const fs::path& tablePath : tablePaths) {
        fs::path truthPath = tablePath;
        truthPath.replace_extension(".truth.json");
        std::string name = tablePath.stem().string();
        if (!fs::exists(truthPath)) {
            skipped.push_back(name);
            continue;
        }
        GroundTruth truth = loadGroundTruth(truthPath.string());
        Table full = loadCsv(tablePath.string());
        std::size_t seedRows = std::min<std::size_t>(truth.seedRows, full.rows());

        Table seedTable = full.head(seedRows);
        LinkedTable lt = linkTable(ctx.kb, ctx.index, seedTable, cfg.interpretOptions());

        std::vector<RankedSuggestion> ranked;
        if (!lt.seeds().empty()) {
            ranked = suggestSubjects(ctx.kb, ctx.index, *ctx.generator, lt, cfg.suggestConfig());
        }
        std::vector<EntityId> rankedIds = suggestionEntities(ranked);

        double r50 = recallAtN(rankedIds, truth.additionalSubjects, 50);
        double r1000 = recallAtN(rankedIds, truth.additionalSubjects, 1000);
        double ap = averagePrecision(rankedIds, truth.additionalSubjects);

        // Fill evaluation: cells with ground truth, subjects taken from the
        // full table's main column.
        LinkedTable fullLinked = linkMainColumn(ctx.kb, full);
        fullLinked.columnLinks = lt.columnLinks;
        GapFillConfig gc = cfg.gapFillConfig();
        std::vector<FillOutcome> cells;
        for (const auto& [rc, expected] : truth.fills) {
            auto [r, c] = rc;
            FillOutcome cell;
            cell.hasTruth = true;
            cell.truthValue = expected;
            if (r < fullLinked.mainColumn.size() && fullLinked.mainColumn[r] &&
                c >= 1 && c < full.cols()) {
                for (const GapFill& f : fillCell(*fullLinked.mainColumn[r], c, lt, ctx.kb,
                                                 *ctx.generator, *ctx.search, gc)) {
                    cell.rankedValues.push_back(f.value);
                }
            }
            cells.push_back(std::move(cell));
        }
        PrecisionRecall pr1 = fillPrecisionRecallAtK(cells, 1);
        PrecisionRecall pr3 = fillPrecisionRecallAtK(cells, 3);

        nlohmann::json tj;
        tj["recall@50"] = round9(r50);
        tj["recall@1000"] = round9(r1000);
        tj["map"] = round9(ap);
        tj["fillP@1"] = round9(pr1.precision);
        tj["fillR@1"] = round9(pr1.recall);
        tj["fillP@3"] = round9(pr3.precision);
        tj["suggestions"] = rankedIds.size();
        tj["truthSubjects"] = truth.additionalSubjects.size();
        tj["truthFills"] = truth.fills.size();

        if (stability) {
            std::size_t top = std::min<std::size_t>(5, full.rows());
            nlohmann::json combos = nlohmann::json::array();
            std::vector<double> comboRecalls;
            for (const auto& combo : combinations(top, seedRows)) {
                Table comboTable;
                for (std::size_t idx : combo) comboTable.cells.push_back(full.cells[idx]);
                LinkedTable comboLt = linkTable(ctx.kb, ctx.index, comboTable, cfg.interpretOptions());
                double recall = 0.0;
                if (!comboLt.seeds().empty()) {
                    auto comboRanked =
                        suggestSubjects(ctx.kb, ctx.index, *ctx.generator, comboLt, cfg.suggestConfig());
                    recall = recallAtN(suggestionEntities(comboRanked), truth.additionalSubjects, 1000);
                }
                comboRecalls.push_back(recall);
                nlohmann::json cj;
                cj["rows"] = combo;
                cj["recall@1000"] = round9(recall);
                combos.push_back(std::move(cj));
            }
            double mean = 0;
            for (double v : comboRecalls) mean += v;
            mean /= std::max<std::size_t>(1, comboRecalls.size());
            double var = 0;
            for (double v : comboRecalls) var += (v - mean) * (v - mean);
            var /= std::max<std::size_t>(1, comboRecalls.size());
            tj["stability"] = {{"combinations", std::move(combos)},
                               {"mean", round9(mean)},
                               {"stddev", round9(std::sqrt(var))}};
        }

        tables[name] = std::move(tj);
        recalls50.push_back(r50);
        recalls1000.push_back(r1000);
        maps.push_back(ap);
        p1s.push_back(pr1.precision);
        r1s.push_back(pr1.recall);
        p3s.push_back(pr3.precision);
    }

    auto macro = [](const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        double sum = 0;
        for (double x : v) sum += x;
        return round9(sum / static_cast<double>(v.size()));
    };

    nlohmann::json report;
    report["tables"] = std::move(tables);
    report["skipped"] = std::move(skipped);
    report["macro"] = {{"recall@50", macro(recalls50)}, {"recall@1000", macro(recalls1000)},
                       {"map", macro(maps)},           {"fillP@1", macro(p1s)},
                       {"fillR@1", macro(r1s)},        {"fillP@3", macro(p3s)},
                       {"tables", recalls50.size()}};
    return report;
}

void runIngest(const std::string& inputPath, const std::string& outputPath) {
    std::ifstream in(inputPath);
    if (!in) throw ParseError("cannot open " + inputPath);

    KnowledgeBaseBuilder builder;
    struct Deferred {
        std::size_t lineNo;
        nlohmann::json record;
    };
    std::vector<Deferred> declarations, assertions;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(trimmed);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("bad JSON record: ") + e.what(), lineNo);
        }
        std::string kind = rec.value("kind", "");
        if (kind == "entity" || kind == "property") {
            declarations.push_back({lineNo, std::move(rec)});
        } else if (kind == "type" || kind == "subclass" || kind == "triple") {
            assertions.push_back({lineNo, std::move(rec)});
        } else {
            throw ParseError("unknown record kind: " + kind, lineNo);
        }
    }

    auto guarded = [](std::size_t at, auto&& fn) {
        try {
            fn();
        } catch (const ParseError& e) {
            if (e.line()) throw;
            throw ParseError(e.what(), at);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(e.what(), at);
        }
    };
    for (const auto& [at, rec] : declarations) {
        guarded(at, [&, &rec = rec] {
            if (rec["kind"] == "entity") {
                std::vector<std::string> aliases;
                for (const auto& a : rec.value("aliases", nlohmann::json::array())) {
                    aliases.push_back(a.get<std::string>());
                }
                builder.addEntity(rec.at("id").get<std::string>(),
                                  rec.at("label").get<std::string>(), aliases);
            } else {
                builder.addProperty(rec.at("id").get<std::string>(),
                                    rec.at("label").get<std::string>());
            }
        });
    }
    for (const auto& [at, rec] : assertions) {
        guarded(at, [&, &rec = rec] {
            std::string kind = rec["kind"].get<std::string>();
            if (kind == "type") {
                builder.addType(rec.at("entity").get<std::string>(),
                                rec.at("type").get<std::string>());
            } else if (kind == "subclass") {
                builder.addSubclass(rec.at("child").get<std::string>(),
                                    rec.at("parent").get<std::string>());
            } else {
                std::string vk = rec.value("valueKind", "s");
                ObjectValue value;
                if (vk == "e") {
                    value = ObjectValue::entityRef(rec.at("value").get<std::string>());
                } else if (vk == "n") {
                    value = ObjectValue::numberValue(rec.at("value").get<double>(),
                                                     rec.value("unit", ""));
                } else if (vk == "t") {
                    value = ObjectValue::timeValue(rec.at("value").get<std::string>());
                } else {
                    value = ObjectValue::stringValue(rec.at("value").get<std::string>());
                }
                builder.addTriple(rec.at("subject").get<std::string>(),
                                  rec.at("property").get<std::string>(), std::move(value));
            }
        });
    }

    KnowledgeBase kb = builder.build();
    saveKb(kb, outputPath);
    loadKb(outputPath);  // validation identical to loadKb
}

}  // namespace rowcomp
