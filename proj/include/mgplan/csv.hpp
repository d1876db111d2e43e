// Minimal CSV handling shared by ingest and reporting. Comma-separated,
// '.' decimal separator, no quoting (none of our file contracts need it).

#ifndef MGPLAN_CSV_HPP
#define MGPLAN_CSV_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mgplan::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> row_lines;  // 1-based file line per data row

    /// Column position for a header name, or -1.
    int column(const std::string& name) const;
};

/// Reads a CSV with a mandatory header row. Cells are trimmed of
/// surrounding whitespace and trailing CR.
Table read_table(const std::filesystem::path& path);

std::vector<std::string> split_line(const std::string& line);

/// Parses a full cell as double; empty or unparsable -> nullopt.
std::optional<double> parse_double(const std::string& cell);

/// Shortest representation that round-trips the exact double value.
std::string format_double(double v);

}  // namespace mgplan::csv

#endif
