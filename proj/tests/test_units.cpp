#include <doctest.h>

#include "rowcomp/units.hpp"

using namespace rowcomp;

TEST_CASE("parseNumericCell reads value plus optional registered unit") {
    auto p = parseNumericCell("180 cm");
    REQUIRE(p.has_value());
    CHECK(p->value == 180);
    CHECK(p->unit == "cm");

    p = parseNumericCell("1.8m");
    REQUIRE(p.has_value());
    CHECK(p->value == doctest::Approx(1.8));
    CHECK(p->unit == "m");

    p = parseNumericCell("42");
    REQUIRE(p.has_value());
    CHECK(p->value == 42);
    CHECK(p->unit == "");

    CHECK_FALSE(parseNumericCell("").has_value());
    CHECK_FALSE(parseNumericCell("tall").has_value());
    CHECK_FALSE(parseNumericCell("42 furlongs").has_value());
}

TEST_CASE("toBaseUnit converts to the dimension's base") {
    CHECK(*toBaseUnit(180, "cm") == doctest::Approx(1.8));
    CHECK(*toBaseUnit(2, "km") == doctest::Approx(2000));
    CHECK(*toBaseUnit(1, "mi") == doctest::Approx(1609.344));
    CHECK(*toBaseUnit(3, "thousand") == doctest::Approx(3000));
    CHECK(*toBaseUnit(5, "") == 5);
    CHECK_FALSE(toBaseUnit(1, "parsec").has_value());
}

TEST_CASE("convEqual compares across units of one dimension") {
    CHECK(convEqual(1.80, "m", 180, "cm"));
    CHECK(convEqual(180, "cm", 1.80, "m"));
    CHECK_FALSE(convEqual(180, "cm", 179, "cm"));
    CHECK(convEqual(1, "kg", 1000, "g"));
    // Different concrete dimensions never match, even when magnitudes align.
    CHECK_FALSE(convEqual(1, "m", 1, "kg"));
    // Dimensionless cells may match any dimension when magnitudes align.
    CHECK(convEqual(1.8, "", 1.8, "m"));
    CHECK(convEqual(42, "", 42, ""));
    CHECK_FALSE(convEqual(1, "bogus", 1, "m"));
}
