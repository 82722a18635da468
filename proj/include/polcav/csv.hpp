#ifndef POLCAV_CSV_HPP
#define POLCAV_CSV_HPP

#include <string>
#include <vector>

namespace polcav {

// Plot-ready CSV with a mandatory header naming columns and units.
// Numbers are written with 17 significant digits so values round-trip exactly
// and identical inputs give byte-identical files.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // each row matches columns.size()
};

std::string to_csv(const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

// Reads a CSV with a header row; all cells numeric ("nan" accepted).
CsvTable read_csv_file(const std::string& path);

// Index of a named column; throws ParseError when missing.
std::size_t column_index(const CsvTable& table, const std::string& name);

}  // namespace polcav

#endif
