#include "polcav/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "polcav/errors.hpp"

namespace polcav {

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string to_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv_file(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << to_csv(table);
    if (!out) throw ParseError("write failed for '" + path + "'");
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (line_no == 1) {
            while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
            if (table.columns.empty()) throw ParseError(path + ": empty header");
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError(path + " line " + std::to_string(line_no) + ": bad number '" +
                                 cell + "'");
            }
        }
        if (row.size() != table.columns.size())
            throw ParseError(path + " line " + std::to_string(line_no) + ": expected " +
                             std::to_string(table.columns.size()) + " cells");
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) throw ParseError(path + ": empty file");
    return table;
}

std::size_t column_index(const CsvTable& table, const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        if (table.columns[i] == name) return i;
    throw ParseError("missing column '" + name + "'");
}

}  // namespace polcav
