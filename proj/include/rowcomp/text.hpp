#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rowcomp {

// Lowercase ASCII, trim, collapse internal runs of whitespace to one space.
std::string normalizeText(std::string_view s);

// Whitespace-separated lowercase alphanumeric tokens.
std::vector<std::string> tokenize(std::string_view s);

// FNV-1a, stable across platforms (std::hash is not).
std::uint64_t fnv1a64(std::string_view s);

std::string trim(std::string_view s);

std::vector<std::string> splitString(std::string_view s, char sep);

// Shortest decimal rendering that round-trips the value.
std::string formatNumber(double v);

double cosineSimilarity(const std::vector<double>& a, const std::vector<double>& b);

double euclideanDistance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rowcomp
