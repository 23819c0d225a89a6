#include "rowcomp/metrics.hpp"

#include <fstream>

#include <json.hpp>

#include "rowcomp/errors.hpp"
#include "rowcomp/text.hpp"

namespace rowcomp {

GroundTruth loadGroundTruth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bad JSON in ") + path + ": " + e.what());
    }
    GroundTruth gt;
    for (const auto& s : j.value("subjects", nlohmann::json::array())) {
        gt.additionalSubjects.insert(s.get<std::string>());
    }
    if (j.contains("fills")) {
        for (const auto& [key, value] : j["fills"].items()) {
            auto parts = splitString(key, ',');
            if (parts.size() != 2) throw ParseError("bad fill key: " + key);
            gt.fills[{std::stoul(parts[0]), std::stoul(parts[1])}] = value.get<std::string>();
        }
    }
    gt.seedRows = j.value("seeds", 3u);
    return gt;
}

double recallAtN(const std::vector<EntityId>& ranked, const std::set<EntityId>& truth,
                 std::size_t n) {
    if (truth.empty()) return 1.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranked.size() && i < n; ++i) {
        if (truth.count(ranked[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double averagePrecision(const std::vector<EntityId>& ranked, const std::set<EntityId>& truth) {
    if (truth.empty()) return 1.0;
    double sum = 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (truth.count(ranked[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(truth.size());
}

PrecisionRecall fillPrecisionRecallAtK(const std::vector<FillOutcome>& cells, std::size_t k) {
    std::size_t filled = 0, withTruth = 0, correct = 0;
    for (const FillOutcome& cell : cells) {
        if (cell.hasTruth) ++withTruth;
        if (cell.rankedValues.empty()) continue;
        ++filled;
        if (!cell.hasTruth) continue;
        std::string truthNorm = normalizeText(cell.truthValue);
        for (std::size_t i = 0; i < cell.rankedValues.size() && i < k; ++i) {
            if (normalizeText(cell.rankedValues[i]) == truthNorm) {
                ++correct;
                break;
            }
        }
    }
    PrecisionRecall pr;
    pr.precision = filled == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(filled);
    pr.recall = withTruth == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(withTruth);
    return pr;
}

}  // namespace rowcomp
