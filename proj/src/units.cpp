#include "rowcomp/units.hpp"

#include <cmath>
#include <cstdlib>

#include "rowcomp/text.hpp"

namespace rowcomp {

const std::map<std::string, UnitInfo>& unitRegistry() {
    static const std::map<std::string, UnitInfo> registry = {
        {"", {"scalar", 1.0}},
        {"k", {"scalar", 1e3}},
        {"thousand", {"scalar", 1e3}},
        {"million", {"scalar", 1e6}},
        {"billion", {"scalar", 1e9}},
        {"m", {"length", 1.0}},
        {"cm", {"length", 0.01}},
        {"mm", {"length", 0.001}},
        {"km", {"length", 1000.0}},
        {"mi", {"length", 1609.344}},
        {"ft", {"length", 0.3048}},
        {"kg", {"mass", 1.0}},
        {"g", {"mass", 0.001}},
        {"lb", {"mass", 0.45359237}},
    };
    return registry;
}

bool isKnownUnit(const std::string& unit) { return unitRegistry().count(unit) != 0; }

std::optional<ParsedNumber> parseNumericCell(const std::string& cell) {
    std::string s = trim(cell);
    if (s.empty()) return std::nullopt;
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || !std::isfinite(v)) return std::nullopt;
    std::string unit = normalizeText(std::string(end));
    if (!isKnownUnit(unit)) return std::nullopt;
    return ParsedNumber{v, unit};
}

std::optional<double> toBaseUnit(double value, const std::string& unit) {
    auto it = unitRegistry().find(normalizeText(unit));
    if (it == unitRegistry().end()) return std::nullopt;
    return value * it->second.factor;
}

bool convEqual(double a, const std::string& unitA, double b, const std::string& unitB,
               double relTol) {
    const auto& reg = unitRegistry();
    auto ia = reg.find(normalizeText(unitA));
    auto ib = reg.find(normalizeText(unitB));
    if (ia == reg.end() || ib == reg.end()) return false;
    // A dimensionless table cell may match any dimension; distinct concrete
    // dimensions never match.
    if (ia->second.dimension != ib->second.dimension &&
        ia->second.dimension != "scalar" && ib->second.dimension != "scalar") {
        return false;
    }
    double va = a * ia->second.factor;
    double vb = b * ib->second.factor;
    if (va == vb) return true;
    double scale = std::max(std::abs(va), std::abs(vb));
    return std::abs(va - vb) <= relTol * scale;
}

}  // namespace rowcomp
