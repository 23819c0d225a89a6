#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <set>

#include <json.hpp>

#include "rowcomp/embed.hpp"
#include "rowcomp/gapfill.hpp"
#include "rowcomp/interpret.hpp"
#include "rowcomp/kb.hpp"
#include "rowcomp/metrics.hpp"
#include "rowcomp/pipeline.hpp"
#include "rowcomp/text.hpp"

namespace py = pybind11;
using namespace rowcomp;

namespace {

PipelineConfig configFromDict(const py::dict& d) {
    PipelineConfig cfg;
    nlohmann::json j = nlohmann::json::parse(
        py::module_::import("json").attr("dumps")(d).cast<std::string>());
    applyConfigJson(cfg, j);
    return cfg;
}

py::object jsonToPy(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_rowcomp, m) {
    m.doc() = "knowledge-base row completion core";

    m.def("normalize_text", [](const std::string& s) { return normalizeText(s); });
    m.def("normalized_levenshtein", &normalizedLevenshtein);
    m.def("cosine_similarity", &cosineSimilarity);
    m.def("euclidean_distance", &euclideanDistance);
    m.def("label_embedding", &labelEmbedding);
    m.def("recall_at_n", &recallAtN);
    m.def("average_precision", &averagePrecision);

    m.def(
        "run_link",
        [](const std::string& table, const py::dict& config) {
            return jsonToPy(runLink(table, configFromDict(config)));
        },
        py::arg("table"), py::arg("config"));
    m.def(
        "run_complete",
        [](const std::string& table, const py::dict& config) {
            return jsonToPy(runComplete(table, configFromDict(config)));
        },
        py::arg("table"), py::arg("config"));
    m.def(
        "run_evaluate",
        [](const std::string& dir, const py::dict& config, bool stability) {
            return jsonToPy(runEvaluate(dir, configFromDict(config), stability));
        },
        py::arg("dir"), py::arg("config"), py::arg("stability") = false);
    m.def("run_ingest", &runIngest, py::arg("input"), py::arg("output"));
}
