#include "rowcomp/table.hpp"

#include <fstream>
#include <sstream>

#include "rowcomp/errors.hpp"

namespace rowcomp {

Table Table::head(std::size_t n) const {
    Table t;
    t.cells.assign(cells.begin(), cells.begin() + std::min(n, cells.size()));
    return t;
}

Table parseCsv(const std::string& content) {
    Table table;
    std::vector<std::string> row;
    std::string field;
    bool inQuotes = false;
    bool rowStarted = false;
    std::size_t lineNo = 1;

    auto endField = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto endRow = [&] {
        endField();
        table.cells.push_back(std::move(row));
        row.clear();
        rowStarted = false;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (inQuotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    inQuotes = false;
                }
            } else {
                if (c == '\n') ++lineNo;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) throw ParseError("quote inside unquoted field", lineNo);
                inQuotes = true;
                rowStarted = true;
                break;
            case ',':
                endField();
                rowStarted = true;
                break;
            case '\r':
                break;
            case '\n':
                if (rowStarted || !field.empty() || !row.empty()) endRow();
                ++lineNo;
                break;
            default:
                field.push_back(c);
                rowStarted = true;
                break;
        }
    }
    if (inQuotes) throw ParseError("unterminated quoted field", lineNo);
    if (rowStarted || !field.empty() || !row.empty()) endRow();

    if (table.cells.empty()) throw ParseError("empty table");
    std::size_t width = table.cells.front().size();
    for (std::size_t i = 1; i < table.cells.size(); ++i) {
        if (table.cells[i].size() != width) {
            throw ParseError("ragged row: expected " + std::to_string(width) + " columns, got " +
                             std::to_string(table.cells[i].size()), i + 1);
        }
    }
    return table;
}

Table loadCsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parseCsv(ss.str());
}

}  // namespace rowcomp
