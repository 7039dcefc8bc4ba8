#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace typdiv {

// A parsed CSV document. `#` lines outside quoted fields are collected as
// comments (without the leading `#` and surrounding whitespace).
struct CsvTable {
    std::string source;
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;  // 1-based source line of each row

    // Index of a header cell, matched case-insensitively against any alias.
    std::optional<std::size_t> column(std::initializer_list<std::string_view> aliases) const;
};

CsvTable parse_csv(std::istream& in, std::string source);
CsvTable read_csv_file(const std::filesystem::path& path);

// Quotes a field only when it contains a separator, quote, or newline.
std::string csv_field(std::string_view value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace typdiv
