#pragma once

#include <string>
#include <vector>

namespace pyro {

/// Render a double with 17 significant digits (lossless round trip), so CSV
/// outputs diff cleanly across runs and implementations.
std::string fmt17(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);

/// Parse a CSV with a header row. Throws a parse error naming the 1-based
/// line number on malformed rows.
CsvTable read_csv(const std::string& path);

double parse_double(const std::string& token, const std::string& context);

}  // namespace pyro
