#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace rcheat::io {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest representation that parses back to the same double; "nan",
/// "inf" and "-inf" for non-finite values.
std::string format_number(double v);
/// Inverse of format_number. Throws std::invalid_argument on junk.
double parse_number(std::string_view text);

/// RFC 4180 quoting: fields containing a comma, quote, CR or LF are quoted
/// and embedded quotes doubled.
std::string quote_field(std::string_view field);

void write_csv(std::ostream& os, const Table& table);
std::vector<std::vector<std::string>> read_csv(std::istream& is);

/// Throws std::runtime_error when the path cannot be written.
void emit_csv(const Table& table, const std::filesystem::path& path);
void emit_json(const nlohmann::json& doc, const std::filesystem::path& path);

/// `<stem>.json` next to a CSV artifact.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace rcheat::io
