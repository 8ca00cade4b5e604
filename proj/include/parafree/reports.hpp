#pragma once

/// Report containers behind the command-line artifacts: CSV tables whose
/// numeric cells are printed with enough digits to re-parse bitwise, and
/// ordered key: value summaries. Both sides of the round trip live here so
/// the writers and readers cannot drift apart.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace parafree {

/// Shortest-faithful decimal form of a double (%.17g).
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> cols) : columns(std::move(cols)) {}

    /// Cell count must match the column count.
    void add_row(std::vector<std::string> cells);

    void write(const std::string& path) const;

    /// Inverse of write, quoting included.
    static CsvTable read(const std::string& path);
};

struct KvReport {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add_count(const std::string& key, std::size_t value);
    void add_flag(const std::string& key, bool value);  // yes / no

    /// First value stored under the key, or null.
    const std::string* find(const std::string& key) const;

    void write(const std::string& path) const;
    static KvReport read(const std::string& path);
};

}  // namespace parafree
