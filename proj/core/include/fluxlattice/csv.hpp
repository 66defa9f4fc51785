#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fluxlattice {

/// Comma-separated table with a header row, `.` decimal, no quoting.
/// Cells are kept as strings so a read-write cycle is byte-stable.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; ///< -1 when absent
    int require_column(const std::string& name) const; ///< throws InputError
    double as_double(std::size_t row, int col) const;
    /// empty cell means null
    bool is_null(std::size_t row, int col) const;
};

/// Canonical number formatting for CSV output (round-trip stable).
std::string format_double(double v);

CsvTable read_csv(const std::filesystem::path& path);

/// Writes via a temp file in the same directory followed by a rename.
void write_csv_atomic(const std::filesystem::path& path, const CsvTable& table);

} // namespace fluxlattice
