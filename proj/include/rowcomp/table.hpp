#pragma once

#include <string>
#include <vector>

namespace rowcomp {

// Rectangular grid of text cells; no header row, column 0 is the main column.
struct Table {
    std::vector<std::vector<std::string>> cells;

    std::size_t rows() const { return cells.size(); }
    std::size_t cols() const { return cells.empty() ? 0 : cells.front().size(); }

    const std::string& at(std::size_t i, std::size_t j) const { return cells[i][j]; }

    // First `n` rows as a new table.
    Table head(std::size_t n) const;
};

// CSV, UTF-8, no header. Supports double-quoted fields with "" escapes.
Table loadCsv(const std::string& path);
Table parseCsv(const std::string& content);

}  // namespace rowcomp
