#include "typdiv/csv.hpp"

#include "typdiv/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

namespace typdiv {

namespace {

std::string trim(std::string_view s)
{
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::initializer_list<std::string_view> aliases) const
{
    for (std::string_view alias : aliases) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (iequals(header[i], alias)) return i;
        }
    }
    return std::nullopt;
}

CsvTable parse_csv(std::istream& in, std::string source)
{
    CsvTable table;
    table.source = std::move(source);

    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);

    std::size_t pos = 0;
    std::size_t line = 1;
    bool have_header = false;

    while (pos < text.size()) {
        const std::size_t record_line = line;

        // Comment and blank lines are only recognized at a record boundary.
        if (text[pos] == '#' || text[pos] == '\n' || text[pos] == '\r') {
            std::size_t end = text.find('\n', pos);
            if (end == std::string::npos) end = text.size();
            if (text[pos] == '#') table.comments.push_back(trim(std::string_view(text).substr(pos + 1, end - pos - 1)));
            pos = end + 1;
            ++line;
            continue;
        }

        std::vector<std::string> fields;
        std::string field;
        bool in_quotes = false;
        bool was_quoted = false;
        for (;;) {
            if (pos >= text.size()) {
                if (in_quotes) {
                    throw Error(ErrorKind::Parse, table.source + ":" + std::to_string(record_line) +
                                                      ": unterminated quoted field");
                }
                fields.push_back(was_quoted ? field : trim(field));
                break;
            }
            char c = text[pos++];
            if (in_quotes) {
                if (c == '"') {
                    if (pos < text.size() && text[pos] == '"') {
                        field.push_back('"');
                        ++pos;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (c == '\n') ++line;
                    field.push_back(c);
                }
                continue;
            }
            if (c == '"' && trim(field).empty()) {
                field.clear();
                in_quotes = true;
                was_quoted = true;
            } else if (c == ',') {
                fields.push_back(was_quoted ? field : trim(field));
                field.clear();
                was_quoted = false;
            } else if (c == '\n') {
                ++line;
                fields.push_back(was_quoted ? field : trim(field));
                break;
            } else if (c != '\r') {
                field.push_back(c);
            }
        }

        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
        } else {
            table.rows.push_back(std::move(fields));
            table.row_lines.push_back(record_line);
        }
    }
    return table;
}

CsvTable read_csv_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return parse_csv(in, path.string());
}

std::string csv_field(std::string_view value)
{
    if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorKind::Io, "failed while writing " + path.string());
}

}  // namespace typdiv
