#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rowcomp/kb.hpp"

namespace rowcomp {

struct GroundTruth {
    std::set<EntityId> additionalSubjects;
    // (row, column) -> expected value string
    std::map<std::pair<std::size_t, std::size_t>, std::string> fills;
    std::size_t seedRows = 3;
};

// JSON: {"subjects": [...], "fills": {"r,c": "value", ...}, "seeds": <int>}
GroundTruth loadGroundTruth(const std::string& path);

// |top-N intersect truth| / |truth|; 1 when truth is empty.
double recallAtN(const std::vector<EntityId>& ranked, const std::set<EntityId>& truth,
                 std::size_t n);

// Average precision of one ranked list; truth items never retrieved count 0.
double averagePrecision(const std::vector<EntityId>& ranked, const std::set<EntityId>& truth);

struct FillOutcome {
    std::vector<std::string> rankedValues;  // best first
    bool hasTruth = false;
    std::string truthValue;
};

struct PrecisionRecall {
    double precision;
    double recall;
};

// A cell counts correct at k when any of its top-k values matches truth
// after case/whitespace normalization. No fills emitted => precision 1
// (vacuous) so a KB-only run scores high precision / low recall.
PrecisionRecall fillPrecisionRecallAtK(const std::vector<FillOutcome>& cells, std::size_t k);

}  // namespace rowcomp
