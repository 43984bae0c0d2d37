#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace mdpvol {

/// One CSV cell: numbers are printed with 17 significant digits.
using Cell = std::variant<double, long long, std::string>;

/// A table with a fixed header; every row must have one cell per column.
struct ReportTable {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

std::string format_number(double v);

/// Comma-separated text with LF endings and a header row.
std::string to_csv(const ReportTable& table);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Insertion-ordered JSON, so summaries keep a stable key order.
using JsonSummary = nlohmann::ordered_json;

/// Two-space indented JSON text with a trailing newline; non-finite numbers become strings.
std::string to_json_text(const JsonSummary& summary);

/// Non-finite doubles are stored as the strings "inf", "-inf" or "nan".
JsonSummary json_number(double v);

}  // namespace mdpvol
