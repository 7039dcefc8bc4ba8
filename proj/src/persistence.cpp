#include "typdiv/persistence.hpp"

#include "typdiv/csv.hpp"
#include "typdiv/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace typdiv {

namespace {

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return in;
}

template <typename T>
bool parse_number(const std::string& text, T& out)
{
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::pair<std::string, std::string> split_key_value(const std::string& comment)
{
    auto eq = comment.find('=');
    if (eq == std::string::npos) return {comment, {}};
    return {comment.substr(0, eq), comment.substr(eq + 1)};
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_double(double value, int significant_digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
    return buf;
}

std::string format_fixed(double value, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

void write_provenance(std::ostream& out, const Provenance& provenance)
{
    for (const auto& [key, value] : provenance) out << "# " << key << '=' << value << '\n';
}

void save_distance_matrix(std::ostream& out, const DistanceMatrix& dm, const Provenance& extra)
{
    out << "# kind=" << to_string(dm.kind()) << '\n';
    out << "# normalized=" << (dm.normalized() ? "true" : "false") << '\n';
    write_provenance(out, extra);
    out << "glottocode";
    for (const auto& id : dm.language_ids()) out << ',' << csv_field(id);
    out << '\n';
    for (std::size_t i = 0; i < dm.size(); ++i) {
        out << csv_field(dm.language_ids()[i]);
        for (std::size_t j = 0; j < dm.size(); ++j) out << ',' << format_double(dm.at(i, j));
        out << '\n';
    }
}

DistanceMatrix parse_distance_matrix(std::istream& in, const std::string& source)
{
    CsvTable csv = parse_csv(in, source);
    DistanceKind kind = DistanceKind::Typological;
    bool normalized = false;
    for (const auto& comment : csv.comments) {
        auto [key, value] = split_key_value(comment);
        if (key == "kind") {
            if (value == "typological") kind = DistanceKind::Typological;
            else if (value == "geographic") kind = DistanceKind::Geographic;
            else throw Error(ErrorKind::Parse, source + ": unknown matrix kind '" + value + "'");
        } else if (key == "normalized") {
            normalized = value == "true";
        }
    }
    if (csv.header.empty()) throw Error(ErrorKind::Parse, source + ": missing header row");

    std::vector<std::string> ids(csv.header.begin() + 1, csv.header.end());
    const std::size_t n = ids.size();
    if (csv.rows.size() != n) {
        throw Error(ErrorKind::Parse, source + ": expected " + std::to_string(n) + " rows, found " +
                                          std::to_string(csv.rows.size()));
    }
    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = csv.rows[i];
        const std::string at = source + ":" + std::to_string(csv.row_lines[i]);
        if (row.size() != n + 1) throw Error(ErrorKind::Parse, at + ": ragged row");
        if (row[0] != ids[i]) {
            throw Error(ErrorKind::Parse, at + ": row id '" + row[0] + "' does not match column '" + ids[i] + "'");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!parse_number(row[j + 1], values[i * n + j])) {
                throw Error(ErrorKind::Parse, at + ": bad distance '" + row[j + 1] + "'");
            }
        }
    }
    return DistanceMatrix(std::move(ids), std::move(values), kind, normalized);
}

DistanceMatrix load_distance_matrix(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_distance_matrix(in, path.string());
}

void save_sample(std::ostream& out, const Sample& sample, const Provenance& extra)
{
    out << "# method=" << to_string(sample.method) << '\n';
    out << "# k=" << sample.k << '\n';
    out << "# seed=" << (sample.seed ? std::to_string(*sample.seed) : "none") << '\n';
    if (sample.method == Method::Extension) out << "# base_size=" << sample.base_size << '\n';
    write_provenance(out, extra);
    for (const auto& id : sample.languages) out << id << '\n';
}

Sample parse_sample(std::istream& in, const std::string& source)
{
    Sample s;
    bool have_k = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto [key, value] = split_key_value(trim(line.substr(1)));
            if (key == "method") {
                auto m = parse_method(value);
                if (!m) throw Error(ErrorKind::Parse, source + ":" + std::to_string(line_no) + ": unknown method '" + value + "'");
                s.method = *m;
            } else if (key == "k") {
                have_k = parse_number(value, s.k);
            } else if (key == "seed" && value != "none") {
                std::uint64_t seed = 0;
                if (parse_number(value, seed)) s.seed = seed;
            } else if (key == "base_size") {
                parse_number(value, s.base_size);
            }
            continue;
        }
        if (line.find(',') != std::string::npos) {
            throw Error(ErrorKind::Parse, source + ":" + std::to_string(line_no) + ": expected one language id per line");
        }
        s.languages.push_back(line);
    }
    if (!have_k) s.k = s.languages.size();
    return s;
}

Sample load_sample(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_sample(in, path.string());
}

std::vector<std::string> load_id_list(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_sample(in, path.string()).languages;
}

std::vector<std::pair<std::string, long long>> load_frequency_list(const std::filesystem::path& path)
{
    CsvTable csv = read_csv_file(path);
    auto id = csv.column({"language_id", "glottocode", "id"});
    auto count = csv.column({"count", "frequency"});
    if (!id || !count) throw Error(ErrorKind::Parse, path.string() + ": expected columns language_id, count");
    std::vector<std::pair<std::string, long long>> out;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string at = path.string() + ":" + std::to_string(csv.row_lines[r]);
        if (row.size() != csv.header.size()) throw Error(ErrorKind::Parse, at + ": ragged row");
        long long c = 0;
        if (!parse_number(row[*count], c)) throw Error(ErrorKind::Parse, at + ": bad count '" + row[*count] + "'");
        out.emplace_back(row[*id], c);
    }
    return out;
}

std::vector<std::pair<std::string, double>> load_score_table(const std::filesystem::path& path)
{
    CsvTable csv = read_csv_file(path);
    auto id = csv.column({"language_id", "glottocode", "id"});
    auto score = csv.column({"score", "value", "accuracy"});
    if (!id || !score) throw Error(ErrorKind::Parse, path.string() + ": expected columns language_id, score");
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string at = path.string() + ":" + std::to_string(csv.row_lines[r]);
        if (row.size() != csv.header.size()) throw Error(ErrorKind::Parse, at + ": ragged row");
        double v = 0.0;
        if (!parse_number(row[*score], v)) throw Error(ErrorKind::Parse, at + ": bad score '" + row[*score] + "'");
        out.emplace_back(row[*id], v);
    }
    return out;
}

}  // namespace typdiv
