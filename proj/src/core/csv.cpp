#include "aeelm/core/csv.hpp"

#include "aeelm/core/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace aeelm::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

} // namespace

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV file: " + path);
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof()) break;
        auto fields = split_line(line);
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            t.rows.push_back(std::move(fields));
        }
    }
    if (first) throw DataError("empty CSV file: " + path);
    return t;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write CSV file: " + path);
    std::ostringstream ss;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) ss << ',';
        ss << header[i];
    }
    ss << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) ss << ',';
            ss << row[i];
        }
        ss << '\n';
    }
    out << ss.str();
    if (!out) throw DataError("write failed: " + path);
}

} // namespace aeelm::csv
