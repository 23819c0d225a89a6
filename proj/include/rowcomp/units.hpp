#pragma once

#include <map>
#include <optional>
#include <string>

namespace rowcomp {

struct UnitInfo {
    std::string dimension;  // "length", "mass", "scalar"
    double factor;          // multiplier to the dimension's base unit
};

// Fixed registry: length (m/cm/mm/km/mi/ft), mass (kg/g/lb), and
// powers-of-ten scalars (k/thousand/million/billion).
const std::map<std::string, UnitInfo>& unitRegistry();

bool isKnownUnit(const std::string& unit);

struct ParsedNumber {
    double value;
    std::string unit;  // empty = dimensionless
};

// "180 cm", "1.8m", "42" -> value + registered unit; nullopt otherwise.
std::optional<ParsedNumber> parseNumericCell(const std::string& cell);

// Value in the base unit of its dimension; nullopt for an unknown unit.
std::optional<double> toBaseUnit(double value, const std::string& unit);

// Equal after unit conversion, within relative tolerance. Units of different
// dimensions never compare equal.
bool convEqual(double a, const std::string& unitA, double b, const std::string& unitB,
               double relTol = 1e-9);

}  // namespace rowcomp
