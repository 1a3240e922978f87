#pragma once

#include <string>
#include <vector>

namespace aeelm::csv {

// Minimal CSV support: UTF-8, comma separators, first row header, no quoted
// fields (the data dictionary uses plain identifiers and decimal reals).
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table read_file(const std::string& path);

// Writes with enough digits (%.17g) that reloading reproduces doubles exactly.
std::string format_double(double v);

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

} // namespace aeelm::csv
