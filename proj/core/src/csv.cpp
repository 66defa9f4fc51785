#include "fluxlattice/csv.hpp"
#include "fluxlattice/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fluxlattice {

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return static_cast<int>(i);
    return -1;
}

int CsvTable::require_column(const std::string& name) const {
    int c = column(name);
    if (c < 0)
        throw InputError("csv: missing required column '" + name + "'");
    return c;
}

double CsvTable::as_double(std::size_t row, int col) const {
    const std::string& cell = rows.at(row).at(static_cast<std::size_t>(col));
    try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size())
            throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        std::ostringstream os;
        os << "csv: cell '" << cell << "' at data row " << row + 1 << ", column "
           << col + 1 << " is not a number";
        throw InputError(os.str());
    }
}

bool CsvTable::is_null(std::size_t row, int col) const {
    return rows.at(row).at(static_cast<std::size_t>(col)).empty();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("csv: cannot open '" + path.string() + "'");
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> cells = split_line(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            std::ostringstream os;
            os << "csv: malformed row at line " << lineno << " of '" << path.string()
               << "': expected " << table.header.size() << " cells, found "
               << cells.size();
            throw InputError(os.str());
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty())
        throw InputError("csv: '" + path.string() + "' has no header row");
    return table;
}

void write_csv_atomic(const std::filesystem::path& path, const CsvTable& table) {
    namespace fs = std::filesystem;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw InputError("csv: cannot write '" + tmp.string() + "'");
        for (std::size_t i = 0; i < table.header.size(); ++i)
            out << (i ? "," : "") << table.header[i];
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << row[i];
            out << "\n";
        }
    }
    fs::rename(tmp, path);
}

} // namespace fluxlattice
