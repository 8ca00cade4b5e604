#include "parafree/reports.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace parafree {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw std::runtime_error("report file '" + path + "': " + why);
}

bool needs_quotes(const std::string& cell) {
    return cell.find_first_of(",\"\n") != std::string::npos;
}

void write_cell(std::ofstream& out, const std::string& cell) {
    if (!needs_quotes(cell)) {
        out << cell;
        return;
    }
    out << '"';
    for (const char c : cell) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

/// One CSV record, unquoting as it goes; records may span lines only inside
/// quotes, which the reports never produce but the reader tolerates.
bool read_record(std::istream& in, std::vector<std::string>& cells) {
    cells.clear();
    std::string cell;
    bool quoted = false;
    bool any = false;
    char c = 0;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    cell += '"';
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            cell += c;
        }
    }
    if (!any) return false;
    cells.push_back(cell);
    return true;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size()) {
        throw std::logic_error("csv row has " + std::to_string(cells.size()) + " cells, table has " +
                               std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(cells));
}

void CsvTable::write(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out << ',';
        write_cell(out, columns[c]);
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            write_cell(out, row[c]);
        }
        out << '\n';
    }
    if (!out) fail(path, "write failed");
}

CsvTable CsvTable::read(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    CsvTable table;
    if (!read_record(in, table.columns)) fail(path, "missing header row");
    std::vector<std::string> cells;
    while (read_record(in, cells)) {
        if (cells.size() != table.columns.size()) {
            fail(path, "row with " + std::to_string(cells.size()) + " cells under " +
                           std::to_string(table.columns.size()) + " columns");
        }
        table.rows.push_back(cells);
    }
    return table;
}

void KvReport::add(const std::string& key, const std::string& value) {
    entries.emplace_back(key, value);
}

void KvReport::add(const std::string& key, double value) { add(key, format_double(value)); }

void KvReport::add_count(const std::string& key, std::size_t value) {
    add(key, std::to_string(value));
}

void KvReport::add_flag(const std::string& key, bool value) {
    add(key, std::string(value ? "yes" : "no"));
}

const std::string* KvReport::find(const std::string& key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return &v;
    }
    return nullptr;
}

void KvReport::write(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    for (const auto& [key, value] : entries) out << key << ": " << value << '\n';
    if (!out) fail(path, "write failed");
}

KvReport KvReport::read(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    KvReport report;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t sep = line.find(": ");
        if (sep == std::string::npos) fail(path, "line without 'key: value' shape: '" + line + "'");
        report.entries.emplace_back(line.substr(0, sep), line.substr(sep + 2));
    }
    return report;
}

}  // namespace parafree
